#include "dyck/format.hpp"

#include <fstream>
#include <sstream>

#include "dyck/errors.hpp"

namespace dyck {

namespace {

[[noreturn]] void parse_fail(int lineno, const std::string& msg) {
  fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

int parse_int(const std::string& s, int lineno, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    parse_fail(lineno, "expected integer for " + what + ", got '" + s + "'");
  }
}

} // namespace

Label parse_label(const std::string& token) {
  if (token == "eps") return Label::eps();
  if (token.size() >= 2 && (token[0] == 'o' || token[0] == 'c')) {
    bool digits = true;
    for (size_t i = 1; i < token.size(); i++)
      if (!isdigit(static_cast<unsigned char>(token[i]))) digits = false;
    if (digits) {
      int idx = std::stoi(token.substr(1));
      return token[0] == 'o' ? Label::open(idx) : Label::close(idx);
    }
  }
  fail(ErrorKind::ParseError, "bad label '" + token + "'");
}

LabeledGraph read_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto next_meaningful = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      lineno++;
      toks = tokenize(line);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_meaningful(toks) || toks.size() != 2 || toks[0] != "dyckgraph" ||
      toks[1] != "1")
    parse_fail(lineno == 0 ? 1 : lineno, "expected header 'dyckgraph 1'");

  int k = -1;
  std::optional<GraphMode> mode;
  struct NodeDecl {
    std::string name;
    int method;
  };
  struct EdgeDecl {
    std::string src, dst;
    Label label;
    int lineno;
  };
  std::vector<NodeDecl> nodes;
  std::vector<EdgeDecl> edges;

  while (next_meaningful(toks)) {
    const std::string& cmd = toks[0];
    if (cmd == "k") {
      if (toks.size() != 2) parse_fail(lineno, "usage: k <int>");
      k = parse_int(toks[1], lineno, "k");
      if (k < 0) parse_fail(lineno, "k must be nonnegative");
    } else if (cmd == "mode") {
      if (toks.size() != 2) parse_fail(lineno, "usage: mode general|bidirected");
      if (toks[1] == "general") mode = GraphMode::General;
      else if (toks[1] == "bidirected") mode = GraphMode::Bidirected;
      else parse_fail(lineno, "unknown mode '" + toks[1] + "'");
    } else if (cmd == "node") {
      if (toks.size() < 2 || toks.size() > 3) parse_fail(lineno, "usage: node <name> [method=<int>]");
      int method = -1;
      if (toks.size() == 3) {
        if (toks[2].rfind("method=", 0) != 0)
          parse_fail(lineno, "expected method=<int>, got '" + toks[2] + "'");
        method = parse_int(toks[2].substr(7), lineno, "method");
        if (method < 0) parse_fail(lineno, "method must be nonnegative");
      }
      nodes.push_back({toks[1], method});
    } else if (cmd == "edge") {
      if (toks.size() != 4) parse_fail(lineno, "usage: edge <src> <dst> <label>");
      Label l;
      try {
        l = parse_label(toks[3]);
      } catch (const Error&) {
        parse_fail(lineno, "bad label '" + toks[3] + "'");
      }
      edges.push_back({toks[1], toks[2], l, lineno});
    } else {
      parse_fail(lineno, "unknown directive '" + cmd + "'");
    }
  }

  if (k < 0) fail(ErrorKind::ParseError, "missing required 'k' line");
  if (!mode) fail(ErrorKind::ParseError, "missing required 'mode' line");

  GraphBuilder builder(k, *mode);
  for (const NodeDecl& n : nodes) {
    if (n.method >= 0) builder.add_node(n.name, n.method);
    else builder.add_node(n.name);
  }
  for (const EdgeDecl& e : edges) {
    try {
      NodeId src = builder.add_node(e.src);
      NodeId dst = builder.add_node(e.dst);
      builder.add_edge(src, dst, e.label);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::ParseError) throw;
      fail(err.kind(), "line " + std::to_string(e.lineno) + ": " + err.what());
    }
  }
  return builder.build();
}

LabeledGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return read_graph(buf.str());
}

std::string write_graph(const LabeledGraph& g) {
  std::ostringstream out;
  out << "dyckgraph 1\n";
  out << "k " << g.alphabet_size() << "\n";
  out << "mode " << to_string(g.mode()) << "\n";
  for (NodeId u = 0; u < g.node_count(); u++) {
    out << "node " << g.name(u);
    if (g.method_of(u) >= 0) out << " method=" << g.method_of(u);
    out << "\n";
  }
  for (const Edge& e : g.edges()) {
    if (g.mode() == GraphMode::Bidirected) {
      // One direction per mirror pair: opens always, eps with src <= dst.
      if (e.label.is_close()) continue;
      if (e.label.is_eps() && e.src > e.dst) continue;
    }
    out << "edge " << g.name(e.src) << " " << g.name(e.dst) << " "
        << to_string(e.label) << "\n";
  }
  return out.str();
}

void write_graph_file(const LabeledGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  out << write_graph(g);
}

} // namespace dyck
