#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontocc/model.hpp"

// Tableau consistency and coherence checking for ALCHI with at-most-one
// restrictions, named-class disjointness, domain/range and an A-Box.
//
// Expansion is deterministic: nodes are visited in id order, label entries in
// interning order, and disjunctions are explored depth-first in the order the
// disjuncts were written. Termination comes from pairwise blocking.
namespace ontocc::tableau {

class UnsupportedAxiom : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownClass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Rule {
  Init,
  And,
  Unfold,
  Forall,
  Domain,
  Range,
  Exists,
  Choice,
  Merge,
  Clash,
};

std::string_view to_string(Rule rule);

// One rule application. `node` is the node whose label changed (or the new
// node for Exists, the merged-away node for Merge). `expr` is the display
// form of the added concept; `other` is the source node where relevant.
struct TraceStep {
  Rule rule;
  int node;
  std::string expr;
  int other = -1;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct ModelNode {
  int id;
  std::vector<std::string> individuals;
  std::vector<std::string> classes;  // positive named classes in the label
  bool blocked = false;
  friend bool operator==(const ModelNode&, const ModelNode&) = default;
};

struct ModelEdge {
  int from;
  int to;
  std::vector<std::string> roles;
  friend bool operator==(const ModelEdge&, const ModelEdge&) = default;
};

// Clash-free completion graph at quiescence.
struct CompletionModel {
  std::vector<ModelNode> nodes;
  std::vector<ModelEdge> edges;
  friend bool operator==(const CompletionModel&, const CompletionModel&) = default;
};

struct Stats {
  std::size_t nodes_created = 0;
  std::size_t branches = 0;
  std::size_t merges = 0;
};

struct Verdict {
  OntologyStatus status = OntologyStatus::consistent_coherent();
  std::optional<CompletionModel> model;  // set when consistent
  std::vector<TraceStep> clash_trace;    // set when inconsistent; last refuted branch
  Stats stats;
  bool consistent() const { return status.kind() != OntologyStatus::Kind::Inconsistent; }
};

struct Options {
  std::size_t max_nodes = 50000;
  std::size_t max_branches = 200000;
};

// Consistency of A-Box + T-Box. The status is ConsistentCoherent or
// Inconsistent; coherence is decided by classify_status.
Verdict check_consistency(const Ontology& o, const Options& options = {});

struct Satisfiability {
  bool satisfiable;
  Verdict witness;
};

// o plus a fresh individual asserted to be in `cls`.
Satisfiability is_class_satisfiable(const Ontology& o, const EntityName& cls,
                                    const Options& options = {});
Satisfiability is_satisfiable(const Ontology& o, const ClassExpression& expr,
                              const Options& options = {});

OntologyStatus classify_status(const Ontology& o, const Options& options = {});

// Re-runs the expansion following the branch choices recorded in `trace` and
// reports whether it reproduces the same steps ending in a clash.
bool replay(const Ontology& o, const std::vector<TraceStep>& trace, const Options& options = {});

// Throws UnsupportedAxiom when an axiom is outside the supported fragment.
void check_fragment(const Ontology& o);

}  // namespace ontocc::tableau
