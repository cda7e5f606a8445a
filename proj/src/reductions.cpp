#include "dyck/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dyck/errors.hpp"
#include "dyck/oracle.hpp"

namespace dyck {

UnionSequence::UnionSequence(int universe,
                             std::vector<std::pair<int, int>> ops,
                             std::vector<std::string> element_names)
    : universe_(universe), ops_(std::move(ops)), names_(std::move(element_names)) {
  if (names_.empty()) {
    for (int e = 0; e < universe_; e++) names_.push_back("e" + std::to_string(e));
  }
  if (static_cast<int>(names_.size()) != universe_)
    fail(ErrorKind::InvalidSequence, "element name count != universe size");

  std::vector<int> parent(universe_);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int u) {
    while (parent[u] != u) {
      parent[u] = parent[parent[u]];
      u = parent[u];
    }
    return u;
  };
  int i = 0;
  for (auto [a, b] : ops_) {
    i++;
    if (a < 0 || a >= universe_ || b < 0 || b >= universe_)
      fail(ErrorKind::InvalidSequence,
           "operation " + std::to_string(i) + " references unknown element");
    int ra = root(a), rb = root(b);
    if (ra == rb)
      fail(ErrorKind::InvalidSequence, "operation " + std::to_string(i) +
                                           " joins elements already in one set");
    parent[ra] = rb;
  }
}

std::vector<int> UnionSequence::final_sets() const {
  std::vector<int> parent(universe_);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int u) {
    while (parent[u] != u) {
      parent[u] = parent[parent[u]];
      u = parent[u];
    }
    return u;
  };
  for (auto [a, b] : ops_) parent[std::max(root(a), root(b))] = std::min(root(a), root(b));
  std::vector<int> key(universe_);
  for (int e = 0; e < universe_; e++) key[e] = root(e);
  return key;
}

LabeledGraph union_graph(const UnionSequence& seq) {
  GraphBuilder builder(1, GraphMode::Bidirected);
  for (int e = 0; e < seq.universe(); e++) builder.add_node(seq.element_name(e));
  int i = 0;
  for (auto [a, b] : seq.ops()) {
    i++;
    NodeId z = builder.add_node("z" + std::to_string(i));
    builder.add_edge(z, builder.add_node(seq.element_name(a)), Label::close(1));
    builder.add_edge(z, builder.add_node(seq.element_name(b)), Label::close(1));
  }
  return builder.build();
}

CnfGrammar::CnfGrammar(std::string start,
                       const std::vector<std::string>& nonterminals,
                       const std::string& terminals)
    : nonterminals_(nonterminals), terminals_(terminals) {
  start_ = nt_index(start);
}

int CnfGrammar::nt_index(const std::string& name) const {
  for (int i = 0; i < nonterminal_count(); i++)
    if (nonterminals_[i] == name) return i;
  fail(ErrorKind::ParseError, "unknown nonterminal '" + name + "'");
}

int CnfGrammar::terminal_index(char t) const {
  auto pos = terminals_.find(t);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

void CnfGrammar::add_binary(const std::string& head, const std::string& b,
                            const std::string& c) {
  rules_.push_back({nt_index(head), false, nt_index(b), nt_index(c)});
}

void CnfGrammar::add_terminal(const std::string& head, char t) {
  int ti = terminal_index(t);
  if (ti < 0) fail(ErrorKind::ParseError, std::string("unknown terminal '") + t + "'");
  rules_.push_back({nt_index(head), true, ti, -1});
}

CnfGrammar CnfGrammar::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string start;
  struct RawRule {
    std::string head;
    std::vector<std::string> rhs;
    int lineno;
  };
  std::vector<RawRule> raw;

  auto parse_fail = [&](const std::string& msg) -> void {
    fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + msg);
  };

  bool saw_header = false;
  while (std::getline(in, line)) {
    lineno++;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      toks.push_back(t);
    }
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "cnf" || toks[1] != "1")
        parse_fail("expected header 'cnf 1'");
      saw_header = true;
    } else if (toks[0] == "start" && toks.size() == 2) {
      start = toks[1];
    } else if (toks[0] == "rule" && toks.size() >= 4 && toks[2] == "->") {
      raw.push_back({toks[1], {toks.begin() + 3, toks.end()}, lineno});
    } else {
      parse_fail("expected 'start <S>' or 'rule <A> -> ...'");
    }
  }
  if (start.empty()) fail(ErrorKind::ParseError, "missing 'start' line");

  // Declaration order: start symbol, then first appearance in rules.
  std::vector<std::string> nts{start};
  std::string terms;
  auto declare_nt = [&](const std::string& name) {
    if (std::find(nts.begin(), nts.end(), name) == nts.end())
      nts.push_back(name);
  };
  auto is_terminal_tok = [](const std::string& tok) {
    return tok.size() == 3 && tok.front() == '\'' && tok.back() == '\'';
  };
  for (const RawRule& r : raw) {
    declare_nt(r.head);
    for (const std::string& s : r.rhs)
      if (is_terminal_tok(s)) {
        if (terms.find(s[1]) == std::string::npos) terms.push_back(s[1]);
      } else {
        declare_nt(s);
      }
  }

  CnfGrammar g(start, nts, terms);
  for (const RawRule& r : raw) {
    lineno = r.lineno;
    if (r.rhs.size() == 1 && is_terminal_tok(r.rhs[0])) {
      g.add_terminal(r.head, r.rhs[0][1]);
    } else if (r.rhs.size() == 2 && !is_terminal_tok(r.rhs[0]) &&
               !is_terminal_tok(r.rhs[1])) {
      g.add_binary(r.head, r.rhs[0], r.rhs[1]);
    } else {
      parse_fail("rules must be <A> -> <B> <C> or <A> -> '<a>'");
    }
  }
  return g;
}

std::string CnfGrammar::write() const {
  std::ostringstream out;
  out << "cnf 1\n";
  out << "start " << nonterminals_[start_] << "\n";
  for (const Rule& r : rules_) {
    out << "rule " << nonterminals_[r.head] << " -> ";
    if (r.terminal) out << "'" << terminals_[r.a] << "'";
    else out << nonterminals_[r.a] << " " << nonterminals_[r.b];
    out << "\n";
  }
  return out.str();
}

namespace {

/// Adds one gadget copy to the builder; returns (x, y) node ids.
/// `prefix` keeps copies apart in the parse graph.
std::pair<NodeId, NodeId> add_gadget(GraphBuilder& builder, const CnfGrammar& g,
                                     const std::string& prefix) {
  NodeId x = builder.add_node(prefix + "x");
  NodeId y = builder.add_node(prefix + "y");
  for (size_t i = 0; i < g.rules().size(); i++) {
    const CnfGrammar::Rule& r = g.rules()[i];
    NodeId rule_node = builder.add_node(prefix + "r" + std::to_string(i + 1));
    builder.add_edge(x, rule_node,
                     Label::close(g.paren_of_nonterminal(r.head)));
    if (r.terminal) {
      builder.add_edge(rule_node, y, Label::open(g.paren_of_terminal(r.a)));
    } else {
      NodeId mid = builder.add_node(prefix + "m" + std::to_string(i + 1));
      builder.add_edge(rule_node, mid, Label::open(g.paren_of_nonterminal(r.b)));
      builder.add_edge(mid, y, Label::open(g.paren_of_nonterminal(r.a)));
    }
  }
  return {x, y};
}

} // namespace

LabeledGraph gadget_graph(const CnfGrammar& g) {
  GraphBuilder builder(g.nonterminal_count() + g.terminal_count(),
                       GraphMode::General);
  add_gadget(builder, g, "");
  return builder.build();
}

ParseGraph parse_graph(const CnfGrammar& g, const std::string& s) {
  if (s.empty())
    fail(ErrorKind::PreconditionViolated, "parse graph needs a nonempty string");
  for (char c : s)
    if (g.terminal_index(c) < 0)
      fail(ErrorKind::UnknownTerminal, std::string("terminal '") + c +
                                           "' not in the grammar");

  GraphBuilder builder(g.nonterminal_count() + g.terminal_count(),
                       GraphMode::General);
  const int n = static_cast<int>(s.size());
  NodeId v = builder.add_node("v");
  std::vector<NodeId> u(n + 1);
  for (int i = 0; i <= n; i++) u[i] = builder.add_node("u" + std::to_string(i));
  builder.add_edge(v, u[0], Label::open(g.paren_of_nonterminal(g.start())));
  for (int i = 1; i <= n; i++)
    builder.add_edge(u[i - 1], u[i],
                     Label::close(g.paren_of_terminal(g.terminal_index(s[i - 1]))));
  for (int i = 0; i < n; i++) {
    auto [x, y] = add_gadget(builder, g, "g" + std::to_string(i) + ".");
    builder.add_edge(u[i], x, Label::eps());
    builder.add_edge(y, u[i], Label::eps());
  }
  LabeledGraph graph = builder.build();
  NodeId source = graph.node_or_throw("v");
  NodeId sink = graph.node_or_throw("u" + std::to_string(n));
  return ParseGraph{std::move(graph), source, sink};
}

bool cfl_parse_via_dyck(const CnfGrammar& g, const std::string& s) {
  if (s.empty()) return false;  // the opening alpha_S can never be matched
  ParseGraph pg = parse_graph(g, s);
  return dyck_reachable(pg.graph, pg.source, pg.sink);
}

bool cky(const CnfGrammar& g, const std::string& s) {
  const int n = static_cast<int>(s.size());
  if (n == 0) return false;  // no eps rules in this CNF form
  const int nt = g.nonterminal_count();
  // table[len][pos][A]: A derives s[pos, pos+len)
  std::vector<std::vector<std::vector<char>>> table(
      n + 1, std::vector<std::vector<char>>(n, std::vector<char>(nt, 0)));
  for (int pos = 0; pos < n; pos++) {
    int ti = g.terminal_index(s[pos]);
    if (ti < 0) return false;
    for (const auto& r : g.rules())
      if (r.terminal && r.a == ti) table[1][pos][r.head] = 1;
  }
  for (int len = 2; len <= n; len++)
    for (int pos = 0; pos + len <= n; pos++)
      for (int split = 1; split < len; split++)
        for (const auto& r : g.rules())
          if (!r.terminal && table[split][pos][r.a] &&
              table[len - split][pos + split][r.b])
            table[len][pos][r.head] = 1;
  return table[n][0][g.start()] != 0;
}

} // namespace dyck
