#include "dyck/cli.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyck/bidirected.hpp"
#include "dyck/format.hpp"
#include "dyck/gen.hpp"
#include "dyck/libclient.hpp"
#include "dyck/oracle.hpp"
#include "dyck/reductions.hpp"
#include "dyck/summary_io.hpp"

namespace dyck {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;
constexpr int kExitModeMismatch = 3;
constexpr int kExitStaleSummary = 4;

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::StaleSummary ? kExitStaleSummary : kExitInput;
}

DsccPartition compute_dsccs(const LabeledGraph& g, const std::string& algo,
                            RunStats* stats) {
  if (algo == "fast") {
    auto result = bidirected_reach(g);
    if (stats) *stats = result.stats;
    return std::move(result.partition);
  }
  auto rel = dyck_closure(g);
  if (stats) {
    *stats = RunStats{};
    stats->n = g.node_count();
    stats->m = g.edge_count();
    stats->k = g.alphabet_size();
  }
  auto partition = dsccs_from_closure(rel);
  if (stats) stats->classes = partition.class_count();
  return partition;
}

std::string dscc_listing(const LabeledGraph& g, const DsccPartition& p) {
  std::ostringstream out;
  for (int c = 0; c < p.class_count(); c++) {
    out << "class " << g.name(p.representative(c)) << ":";
    for (NodeId u : p.members(c)) out << " " << g.name(u);
    out << "\n";
  }
  return out.str();
}

std::string stats_json(const RunStats& s) {
  nlohmann::json j{{"n", s.n},
                   {"m", s.m},
                   {"k", s.k},
                   {"classes", s.classes},
                   {"iterations", s.iterations},
                   {"sum_sprime", s.sum_sprime},
                   {"unions", s.unions},
                   {"finds", s.finds}};
  return j.dump();
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) fail(ErrorKind::ParseError, "cannot open '" + out_path + "' for writing");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double median_ms(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  size_t n = samples.size();
  return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

struct BenchCell {
  std::string family;
  int n = 0, m = 0, k = 0;
  std::string algo;
  double ms = 0;
  uint64_t iterations = 0, sum_sprime = 0;

  LabeledGraph graph;
  std::vector<double> samples;

  std::pair<double, RunStats> run_once() const {
    auto start = std::chrono::steady_clock::now();
    RunStats stats{};
    if (algo == "fast") {
      auto result = bidirected_reach(graph);
      stats = result.stats;
    } else {
      auto rel = dyck_closure(graph);
      auto partition = dsccs_from_closure(rel);
      stats.classes = partition.class_count();
    }
    auto stop = std::chrono::steady_clock::now();
    double elapsed =
        std::chrono::duration<double, std::milli>(stop - start).count();
    return {elapsed, stats};
  }
};

BenchCell make_bench_cell(const std::string& family, int n,
                          const std::string& algo, uint64_t seed) {
  BidirectedGenSpec spec;
  spec.n = n;
  spec.m = 2 * n;  // sparse
  spec.k = 3;
  spec.eps_frac = 0.1;
  spec.seed = seed;
  BenchCell cell;
  cell.family = family;
  cell.algo = algo;
  cell.graph = gen_bidirected(spec);
  cell.n = cell.graph.node_count();
  cell.m = cell.graph.edge_count();
  cell.k = cell.graph.alphabet_size();
  return cell;
}

// 3 warmup rounds then 5 measured rounds, interleaved across the cells so
// a transient host slowdown shifts all sizes together instead of skewing
// one cell's whole sample; the per-cell median is reported.
void run_bench_cells(std::vector<BenchCell>& cells, bool parallel) {
  auto round = [&](bool measured) {
    auto work = [&](BenchCell& cell) {
      auto [elapsed, stats] = cell.run_once();
      if (measured) {
        cell.samples.push_back(elapsed);
        cell.iterations = stats.iterations;
        cell.sum_sprime = stats.sum_sprime;
      }
    };
    if (parallel) {
      std::vector<std::future<void>> futures;
      for (BenchCell& cell : cells)
        futures.push_back(
            std::async(std::launch::async, [&work, &cell]() { work(cell); }));
      for (auto& f : futures) f.get();
    } else {
      for (BenchCell& cell : cells) work(cell);
    }
  };
  for (int warm = 0; warm < 3; warm++) round(false);
  for (int rep = 0; rep < 5; rep++) round(true);
  for (BenchCell& cell : cells) cell.ms = median_ms(cell.samples);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_dscc(const std::string& file, const std::string& algo, bool want_stats,
             const std::string& out_path, std::ostream& out) {
  LabeledGraph g = read_graph_file(file);
  if (algo == "fast" && g.mode() != GraphMode::Bidirected) return kExitModeMismatch;
  RunStats stats;
  DsccPartition p = compute_dsccs(g, algo, &stats);
  std::string text = dscc_listing(g, p);
  if (want_stats) text += stats_json(stats) + "\n";
  emit(text, out_path, out);
  return kExitOk;
}

int cmd_query(const std::string& file, const std::string& u_name,
              const std::string& v_name, const std::string& algo,
              std::ostream& out) {
  LabeledGraph g = read_graph_file(file);
  if (algo == "fast" && g.mode() != GraphMode::Bidirected) return kExitModeMismatch;
  NodeId u = g.node_or_throw(u_name), v = g.node_or_throw(v_name);
  DsccPartition p = compute_dsccs(g, algo, nullptr);
  bool same = dscc_query(p, u, v);
  out << (same ? "true" : "false") << "\n";
  return same ? kExitOk : kExitFalse;
}

int cmd_summarize(const std::string& libfile, const std::string& out_path,
                  bool dump_tds, std::ostream& out) {
  LabeledGraph g = read_graph_file(libfile);
  ProgramValidGraph pvg = ProgramValidGraph::validate(std::move(g));
  SummaryArtifact artifact = preprocess_library(pvg);
  if (dump_tds)
    for (const auto& [method, idx] : artifact.indexes) {
      out << "# method " << method << "\n";
      std::vector<std::string> names = artifact.node_names.at(method);
      out << dump_td(idx.td(), &names);
    }
  emit(write_summary(artifact, pvg.base()), out_path, out);
  return kExitOk;
}

int cmd_analyze(const std::string& summary_path, const std::string& clientfile,
                const std::string& queries_path, bool dump_tds,
                std::ostream& out) {
  LabeledGraph g = read_graph_file(clientfile);
  ProgramValidGraph pvg = ProgramValidGraph::validate(std::move(g));
  SummaryArtifact artifact = read_summary(read_file(summary_path), pvg.base());
  ReachIndexMap indexes = analyze_client(artifact, pvg);
  if (dump_tds)
    for (const auto& [method, idx] : indexes) {
      out << "# method " << method << "\n";
      out << dump_td(idx.td());
    }

  std::istringstream qs(read_file(queries_path));
  std::string line;
  int lineno = 0;
  while (std::getline(qs, line)) {
    lineno++;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) {
      if (a.empty()) continue;
      fail(ErrorKind::ParseError,
           "queries line " + std::to_string(lineno) + ": expected '<u> <v>'");
    }
    NodeId u = pvg.base().node_or_throw(a), v = pvg.base().node_or_throw(b);
    int mu = pvg.method_of(u), mv = pvg.method_of(v);
    if (mu != mv)
      fail(ErrorKind::PreconditionViolated,
           "query nodes " + a + ", " + b + " must share a method");
    bool reachable = indexes.at(mu).query(u, v);
    out << a << " " << b << " " << (reachable ? "true" : "false") << "\n";
  }
  return kExitOk;
}

int cmd_parse(const std::string& grammarfile, const std::string& input,
              std::ostream& out) {
  CnfGrammar g = CnfGrammar::parse(read_file(grammarfile));
  bool accepted = cfl_parse_via_dyck(g, input);
  out << (accepted ? "accept" : "reject") << "\n";
  return accepted ? kExitOk : kExitFalse;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Dyck reachability toolkit"};
  app.require_subcommand(1);

  std::string file, algo = "fast", out_path, u_name, v_name;
  bool want_stats = false, dump_tds = false, parallel = false;

  auto* dscc = app.add_subcommand("dscc", "List Dyck SCCs of a graph");
  dscc->add_option("file", file)->required();
  dscc->add_option("--algo", algo)->check(CLI::IsMember({"fast", "naive"}));
  dscc->add_flag("--stats-json", want_stats);
  dscc->add_option("--out", out_path);

  auto* query = app.add_subcommand("query", "Same-DSCC pair query");
  query->add_option("file", file)->required();
  query->add_option("u", u_name)->required();
  query->add_option("v", v_name)->required();
  query->add_option("--algo", algo)->check(CLI::IsMember({"fast", "naive"}));

  std::string summary_path, clientfile, queries_path;
  auto* summarize = app.add_subcommand("summarize", "Preprocess a library graph");
  summarize->add_option("libfile", file)->required();
  summarize->add_option("--out", out_path);
  summarize->add_flag("--dump-td", dump_tds);

  auto* analyze = app.add_subcommand("analyze", "Analyze a client against a summary");
  analyze->add_option("summary", summary_path)->required();
  analyze->add_option("clientfile", clientfile)->required();
  analyze->add_option("--queries", queries_path)->required();
  analyze->add_flag("--dump-td", dump_tds);

  std::string input_string, grammarfile;
  auto* parse = app.add_subcommand("parse", "CNF membership via Dyck reachability");
  parse->add_option("grammarfile", grammarfile)->required();
  parse->add_option("string", input_string);

  std::string family;
  uint64_t seed = 1;
  int n = 20, m = 40, k = 2, methods = 6, nodes_per_method = 12, call_sites = 6,
      b = 2, treewidth_target = 3, ops = 60, nonterminals = 4, terminals = 2;
  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--family", family)
      ->required()
      ->check(CLI::IsMember({"bidirected-random", "program-valid-random",
                             "union-seq-random", "ktree", "cnf-random"}));
  gen->add_option("--seed", seed);
  gen->add_option("-n", n);
  gen->add_option("-m", m);
  gen->add_option("-k", k);
  gen->add_option("--methods", methods);
  gen->add_option("--nodes-per-method", nodes_per_method);
  gen->add_option("--call-sites", call_sites);
  gen->add_option("-b", b);
  gen->add_option("--treewidth-target", treewidth_target);
  gen->add_option("--ops", ops);
  gen->add_option("--nonterminals", nonterminals);
  gen->add_option("--terminals", terminals);
  gen->add_option("--out", out_path);

  std::string sizes_csv = "20000,40000,80000,160000", algos_csv = "fast";
  auto* bench = app.add_subcommand("bench", "Timing runs over generated graphs");
  bench->add_option("--family", family)->default_val("sparse-bidirected");
  bench->add_option("--sizes", sizes_csv);
  bench->add_option("--algos", algos_csv);
  bench->add_option("--seed", seed);
  bench->add_flag("--parallel", parallel);

  std::vector<std::string> argv = args;
  try {
    std::vector<const char*> cargs{"dyckreach"};
    for (const auto& a : argv) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (dscc->parsed()) return cmd_dscc(file, algo, want_stats, out_path, out);
    if (query->parsed()) return cmd_query(file, u_name, v_name, algo, out);
    if (summarize->parsed()) return cmd_summarize(file, out_path, dump_tds, out);
    if (analyze->parsed())
      return cmd_analyze(summary_path, clientfile, queries_path, dump_tds, out);
    if (parse->parsed()) return cmd_parse(grammarfile, input_string, out);

    if (gen->parsed()) {
      std::string text;
      std::string header = "# family " + family + " seed " + std::to_string(seed) + "\n";
      if (family == "bidirected-random") {
        text = write_graph(gen_bidirected({n, m, k, 0.15, seed}));
      } else if (family == "program-valid-random") {
        text = write_graph(gen_program_valid(
            {methods, nodes_per_method, call_sites, b, treewidth_target, seed}));
      } else if (family == "union-seq-random") {
        text = write_union_sequence(gen_union_sequence({n, ops, seed}));
      } else if (family == "ktree") {
        text = write_graph(gen_ktree_labeled({n, treewidth_target, 0.2, seed}));
      } else {
        text = gen_cnf({nonterminals, terminals, seed}).write();
      }
      emit(header + text, out_path, out);
      return kExitOk;
    }

    if (bench->parsed()) {
      std::vector<int> sizes;
      for (const std::string& s : split_list(sizes_csv)) sizes.push_back(std::stoi(s));
      std::vector<std::string> algos = split_list(algos_csv);

      std::vector<BenchCell> cells;
      for (size_t si = 0; si < sizes.size(); si++)
        for (const std::string& a : algos)
          cells.push_back(make_bench_cell(family, sizes[si], a, seed + si));
      run_bench_cells(cells, parallel);

      out << "family,n,m,k,algo,ms,iterations,sum_sprime\n";
      for (const BenchCell& c : cells)
        out << c.family << "," << c.n << "," << c.m << "," << c.k << ","
            << c.algo << "," << c.ms << "," << c.iterations << ","
            << c.sum_sprime << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

} // namespace dyck
