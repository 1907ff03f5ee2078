#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontocc/model.hpp"

namespace ontocc::modularize {

class InsufficientConcepts : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConceptScore {
  EntityName cls;
  double score;
  friend bool operator==(const ConceptScore&, const ConceptScore&) = default;
};

// Weighted degree in the dependency graph over classes and individuals:
// subclass/equivalence edges (named left side to every named class on the
// right) weigh 2, the domain-to-range edge of a property weighs 1, and a class
// assertion links the individual to each named class of its type with
// weight 1. Sorted by descending score, ties by name.
std::vector<ConceptScore> rank_concepts(const Ontology& o);

// Top-k by score, skipping any class that is a direct (told) subclass of an
// already chosen head or has one as a direct subclass. Skipped classes are
// used in rank order if the scan runs out.
std::vector<EntityName> select_heads(const Ontology& o, const std::vector<ConceptScore>& scores, std::size_t k);

struct Partition {
  EntityName head;
  std::vector<EntityName> members;      // classes, sorted; includes head
  std::vector<EntityName> individuals;  // sorted
};

// heads must be in rank order; that order breaks membership ties.
std::vector<Partition> partition(const Ontology& o, const std::vector<EntityName>& heads);

struct ModuleResult {
  Ontology module;
  std::string source_id;
  EntityName head;
};

struct Extraction {
  std::vector<ModuleResult> modules;
  // Non-declaration source axioms that landed in no module, in source order.
  std::vector<Axiom> dropped;
  // Modules discarded for having fewer classes than requested.
  std::size_t skipped_small = 0;
};

Extraction extract_modules(const Ontology& o, const std::vector<Partition>& partitions,
                           std::size_t min_module_classes = 0);

// ceil(|classes| / 200), at least 1.
std::size_t default_k(const Ontology& o);

struct Options {
  std::optional<std::size_t> k;
  std::size_t min_module_classes = 0;
};

Extraction build_modules(const Ontology& o, const Options& options = {});

}  // namespace ontocc::modularize
