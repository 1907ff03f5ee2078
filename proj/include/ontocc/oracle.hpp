#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "ontocc/model.hpp"

// Finite-model oracle. Interpretations over domains {0..n-1} are searched by
// grounding the ontology into propositional clauses and running a complete
// DPLL search, so "no model" means no model of that size exists at all.
namespace ontocc::oracle {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interpretation {
  int domain_size = 0;
  std::map<EntityName, std::set<int>> classes;
  std::map<EntityName, std::set<std::pair<int, int>>> properties;
  std::map<EntityName, int> individuals;
};

// Direct semantic evaluation; names missing from the interpretation denote
// the empty set (or the empty relation).
std::set<int> extension(const Interpretation& m, const ClassExpression& expr);
std::set<std::pair<int, int>> extension(const Interpretation& m, const RoleExpression& role);
bool satisfies(const Interpretation& m, const Axiom& axiom);
bool is_model(const Interpretation& m, const Ontology& o);

struct SearchOptions {
  int max_domain = 3;
  // Upper bound on DPLL decisions summed over all domain sizes.
  std::uint64_t budget = 5'000'000;
};

// Smallest model with 1..max_domain elements, or none. max_domain <= 4.
std::optional<Interpretation> finite_model_search(const Ontology& o, const SearchOptions& options = {});
std::optional<Interpretation> finite_model_search(const Ontology& o, int max_domain);

// Status as decided by the oracle alone: inconsistent when o has no model up
// to max_domain; otherwise incoherent when some named class has no model in
// which it is non-empty.
OntologyStatus oracle_status(const Ontology& o, const SearchOptions& options = {});

}  // namespace ontocc::oracle
