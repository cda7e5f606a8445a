#pragma once

#include <string>
#include <vector>

#include "dyck/graph.hpp"

namespace dyck {

/// A union sequence over a fixed universe: the Union-operations prefix of a
/// separated union-find sequence. Every operation must join two currently
/// distinct sets (checked; InvalidSequence otherwise).
class UnionSequence {
public:
  UnionSequence(int universe, std::vector<std::pair<int, int>> ops,
                std::vector<std::string> element_names = {});

  int universe() const { return universe_; }
  const std::vector<std::pair<int, int>>& ops() const { return ops_; }
  const std::string& element_name(int e) const { return names_[e]; }

  /// same-set relation after all unions, as a class key per element.
  std::vector<int> final_sets() const;

private:
  int universe_;
  std::vector<std::pair<int, int>> ops_;
  std::vector<std::string> names_;
};

/// The Sigma_1 bidirected graph encoding a union sequence: one node per
/// element plus z_i per operation, with closing edges from z_i to both
/// operands (mirrors implied). Elements share a union-find set iff they
/// share a DSCC.
LabeledGraph union_graph(const UnionSequence& seq);

/// Context-free grammar in Chomsky normal form: rules A -> B C or A -> 'a'.
/// Terminals are single characters.
class CnfGrammar {
public:
  struct Rule {
    int head;       // nonterminal index
    bool terminal;
    int a = -1;     // nonterminal B, or terminal index
    int b = -1;     // nonterminal C (binary rules)
  };

  CnfGrammar(std::string start, const std::vector<std::string>& nonterminals,
             const std::string& terminals);
  void add_binary(const std::string& head, const std::string& b,
                  const std::string& c);
  void add_terminal(const std::string& head, char t);

  /// `cnf 1` format:
  ///   cnf 1
  ///   start <S>
  ///   rule <A> -> <B> <C>
  ///   rule <A> -> '<a>'
  static CnfGrammar parse(const std::string& text);
  std::string write() const;

  int nonterminal_count() const { return static_cast<int>(nonterminals_.size()); }
  int terminal_count() const { return static_cast<int>(terminals_.size()); }
  const std::string& nonterminal(int i) const { return nonterminals_[i]; }
  char terminal(int i) const { return terminals_[i]; }
  int start() const { return start_; }
  const std::vector<Rule>& rules() const { return rules_; }
  int terminal_index(char t) const;  // -1 if unknown

  /// Parenthesis index of nonterminal i / terminal i in the gadget
  /// alphabet: nonterminals first in declaration order, then terminals.
  int paren_of_nonterminal(int i) const { return i + 1; }
  int paren_of_terminal(int i) const { return nonterminal_count() + i + 1; }

private:
  int nt_index(const std::string& name) const;
  std::vector<std::string> nonterminals_;
  std::string terminals_;
  int start_ = 0;
  std::vector<Rule> rules_;
};

/// The rule-encoding gadget: node x fans out over closing edges (one per
/// rule, labeled by the head), terminal rules open their terminal towards
/// y, binary rules open C then B. Node names: x, y, r<i> per rule,
/// m<i> per binary rule.
LabeledGraph gadget_graph(const CnfGrammar& g);

struct ParseGraph {
  LabeledGraph graph;
  NodeId source;  // v
  NodeId sink;    // u_n
};

/// Line v -> u_0 -> ... -> u_n (opening the start symbol, then closing each
/// input character) with one gadget copy hanging off u_0..u_{n-1} through
/// eps edges. Throws UnknownTerminal. Requires a nonempty string.
ParseGraph parse_graph(const CnfGrammar& g, const std::string& s);

/// Single-pair Dyck reachability on the parse graph; equals cky(g, s).
/// The empty string is rejected (the initial opening is unmatchable).
bool cfl_parse_via_dyck(const CnfGrammar& g, const std::string& s);

/// Reference CKY membership test.
bool cky(const CnfGrammar& g, const std::string& s);

} // namespace dyck
