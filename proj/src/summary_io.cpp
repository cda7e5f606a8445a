#include "dyck/summary_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dyck/errors.hpp"

namespace dyck {

std::string write_summary(const SummaryArtifact& artifact,
                          const LabeledGraph& library_graph) {
  std::ostringstream out;
  out << "dycksum 1\n";
  out << "digest " << artifact.digest << "\n";
  out << "methods";
  for (int m : artifact.methods) out << " " << m;
  out << "\n";

  // Everything is emitted in name order so the text is independent of the
  // interning that produced the index: write(read(write(x))) == write(x).
  for (const auto& [method, idx] : artifact.indexes) {
    const auto& names = artifact.node_names.at(method);
    auto name_sorted = [&](std::vector<int> locals) {
      std::sort(locals.begin(), locals.end(),
                [&](int a, int b) { return names[a] < names[b]; });
      return locals;
    };
    std::vector<int> row_order(names.size());
    for (size_t i = 0; i < names.size(); i++) row_order[i] = static_cast<int>(i);
    row_order = name_sorted(row_order);

    out << "method " << method << "\n";
    const TreeDecomposition& td = idx.td();
    for (int b = 0; b < td.bag_count(); b++) {
      out << "bag " << b << " parent=";
      if (td.parent(b) < 0) out << "-";
      else out << td.parent(b);
      out << " :";
      for (int lu : name_sorted(td.bag(b))) out << " " << names[lu];
      out << "\n";
    }
    for (int lu : row_order) {
      out << "rf " << names[lu] << " :";
      for (int lv : name_sorted(idx.forward_sets()[lu])) out << " " << names[lv];
      out << "\n";
      out << "rb " << names[lu] << " :";
      for (int lv : name_sorted(idx.backward_sets()[lu])) out << " " << names[lv];
      out << "\n";
    }
    for (auto [x, y] : idx.applied_updates())
      out << "summary-edge " << library_graph.name(x) << " "
          << library_graph.name(y) << "\n";
    out << "end\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void sum_fail(int lineno, const std::string& msg) {
  fail(ErrorKind::ParseError,
       "summary line " + std::to_string(lineno) + ": " + msg);
}

} // namespace

class SummaryReader {
public:
  SummaryReader(const std::string& text, const LabeledGraph& resolve)
      : in_(text), resolve_(resolve) {}

  SummaryArtifact read() {
    SummaryArtifact artifact;
    expect_header();
    artifact.digest = read_digest();
    artifact.methods = read_methods();

    std::vector<std::string> toks;
    while (next(toks)) {
      if (toks[0] != "method" || toks.size() != 2)
        sum_fail(lineno_, "expected 'method <id>'");
      int method = std::stoi(toks[1]);
      read_method(artifact, method);
    }
    return artifact;
  }

private:
  bool next(std::vector<std::string>& toks) {
    std::string line;
    while (std::getline(in_, line)) {
      lineno_++;
      toks.clear();
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
      }
      if (!toks.empty()) return true;
    }
    return false;
  }

  void expect_header() {
    std::vector<std::string> toks;
    if (!next(toks) || toks.size() != 2 || toks[0] != "dycksum" || toks[1] != "1")
      sum_fail(lineno_, "expected header 'dycksum 1'");
  }

  std::string read_digest() {
    std::vector<std::string> toks;
    if (!next(toks) || toks.size() != 2 || toks[0] != "digest")
      sum_fail(lineno_, "expected 'digest <value>'");
    return toks[1];
  }

  std::vector<int> read_methods() {
    std::vector<std::string> toks;
    if (!next(toks) || toks[0] != "methods")
      sum_fail(lineno_, "expected 'methods <ids...>'");
    std::vector<int> out;
    for (size_t i = 1; i < toks.size(); i++) out.push_back(std::stoi(toks[i]));
    return out;
  }

  void read_method(SummaryArtifact& artifact, int method) {
    std::vector<std::vector<int>> bags;
    std::vector<int> parents;
    std::vector<std::string> names;          // local order = first appearance
    std::unordered_map<std::string, int> local;
    std::vector<std::pair<std::string, std::vector<std::string>>> rf_lines,
        rb_lines;
    std::vector<std::pair<std::string, std::string>> summary_edges;

    auto intern = [&](const std::string& name) {
      auto it = local.find(name);
      if (it != local.end()) return it->second;
      int id = static_cast<int>(names.size());
      local.emplace(name, id);
      names.push_back(name);
      return id;
    };

    std::vector<std::string> toks;
    while (next(toks)) {
      if (toks[0] == "end") break;
      if (toks[0] == "bag") {
        if (toks.size() < 4 || toks[3] != ":" || toks[2].rfind("parent=", 0) != 0)
          sum_fail(lineno_, "expected 'bag <id> parent=<id|-> : <members...>'");
        if (std::stoi(toks[1]) != static_cast<int>(bags.size()))
          sum_fail(lineno_, "bags must appear in id order");
        std::string p = toks[2].substr(7);
        parents.push_back(p == "-" ? -1 : std::stoi(p));
        std::vector<int> bag;
        for (size_t i = 4; i < toks.size(); i++) bag.push_back(intern(toks[i]));
        bags.push_back(std::move(bag));
      } else if (toks[0] == "rf" || toks[0] == "rb") {
        if (toks.size() < 3 || toks[2] != ":")
          sum_fail(lineno_, "expected '" + toks[0] + " <node> : <members...>'");
        std::vector<std::string> members(toks.begin() + 3, toks.end());
        if (toks[0] == "rf") rf_lines.push_back({toks[1], std::move(members)});
        else rb_lines.push_back({toks[1], std::move(members)});
      } else if (toks[0] == "summary-edge") {
        if (toks.size() != 3)
          sum_fail(lineno_, "expected 'summary-edge <x> <y>'");
        summary_edges.push_back({toks[1], toks[2]});
      } else {
        sum_fail(lineno_, "unknown directive '" + toks[0] + "'");
      }
    }

    ReachIndex idx;
    idx.td_ = TreeDecomposition::assemble(std::move(bags), std::move(parents),
                                          static_cast<int>(names.size()));
    for (const std::string& name : names)
      idx.global_of_.push_back(resolve_.node_or_throw(name));
    for (size_t i = 0; i < idx.global_of_.size(); i++)
      idx.local_of_[idx.global_of_[i]] = static_cast<int>(i);
    idx.rf_.assign(names.size(), {});
    idx.rb_.assign(names.size(), {});
    auto fill = [&](const auto& lines, std::vector<std::vector<int>>& table) {
      for (const auto& [node, members] : lines) {
        auto it = local.find(node);
        if (it == local.end()) sum_fail(lineno_, "node '" + node + "' not in any bag");
        std::vector<int>& row = table[it->second];
        for (const std::string& m : members) {
          auto mi = local.find(m);
          if (mi == local.end()) sum_fail(lineno_, "node '" + m + "' not in any bag");
          row.push_back(mi->second);
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
      }
    };
    fill(rf_lines, idx.rf_);
    fill(rb_lines, idx.rb_);
    for (const auto& [x, y] : summary_edges)
      idx.applied_updates_.push_back(
          {resolve_.node_or_throw(x), resolve_.node_or_throw(y)});

    artifact.node_names[method] = names;
    artifact.indexes.emplace(method, std::move(idx));
  }

  std::istringstream in_;
  const LabeledGraph& resolve_;
  int lineno_ = 0;
};

SummaryArtifact read_summary(const std::string& text,
                             const LabeledGraph& resolve) {
  return SummaryReader(text, resolve).read();
}

void write_summary_file(const SummaryArtifact& artifact,
                        const LabeledGraph& library_graph,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot open '" + path + "' for writing");
  out << write_summary(artifact, library_graph);
}

SummaryArtifact read_summary_file(const std::string& path,
                                  const LabeledGraph& resolve) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return read_summary(buf.str(), resolve);
}

} // namespace dyck
