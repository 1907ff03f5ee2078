#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontocc/antipattern.hpp"
#include "ontocc/model.hpp"

namespace ontocc::translate {

inline constexpr std::size_t kDefaultTokenBudget = 4096;

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class Label : std::uint8_t { Consistent = 0, Inconsistent = 1 };

struct TripleDoc {
  std::string id;
  std::vector<Triple> triples;
  std::size_t token_count = 0;
  std::optional<Label> label;
  std::optional<antipattern::PatternId> pattern;
};

// Maps the triples of a document to a token count.
using TokenEstimator = std::function<std::size_t(const std::vector<Triple>&)>;

// Whitespace-delimited words of subject and object, one token for the
// relation phrase (a closed vocabulary), plus 2 per triple for separators.
std::size_t word_count_estimate(const std::vector<Triple>& triples);
std::size_t estimate_tokens(const TripleDoc& doc, const TokenEstimator& estimator = word_count_estimate);

// English phrase for an expression: "some R C", "only R C", "at most 1 R",
// "A and B", "not A"; nested complex operands are parenthesised.
std::string render(const ClassExpression& expr);
std::string render(const RoleExpression& role);

std::vector<Triple> axiom_triples(const Axiom& axiom);

// One or more triples per axiom, in axiom order; names lose their prefixes.
TripleDoc to_triples(const Ontology& o, const TokenEstimator& estimator = word_count_estimate);

// "Subject relation object." per triple, first letter capitalised, joined by
// single spaces.
std::string to_text(const TripleDoc& doc);

struct LeviGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // indices into nodes
};

// Entity nodes are shared; each triple gets its own relation node "rel#k".
LeviGraph to_levi(const TripleDoc& doc);

struct BudgetFilter {
  std::vector<TripleDoc> kept;
  std::size_t excluded = 0;
};
BudgetFilter filter_by_budget(std::vector<TripleDoc> docs, std::size_t budget = kDefaultTokenBudget);

// {"id", "triples": [[s, r, o], ...], "text", "tokens", "label", "pattern"};
// label is 0/1 or null, pattern a name or null.
nlohmann::json to_json(const TripleDoc& doc);
TripleDoc doc_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LeviGraph& graph);

}  // namespace ontocc::translate
