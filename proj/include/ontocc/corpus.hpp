#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontocc/antipattern.hpp"
#include "ontocc/model.hpp"
#include "ontocc/translate.hpp"

namespace ontocc::corpus {

class GenerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class MissingPrediction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- synthesis

struct Range {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct SynthConfig {
  std::size_t n_ontologies = 10;
  Range classes{20, 60};
  Range properties{3, 8};
  Range individuals{4, 16};
  double disjointness_density = 0.3;  // chance that a sibling pair is disjoint
  std::uint64_t seed = 0;
  std::size_t max_retries = 20;  // per ontology
  void validate() const;         // throws std::invalid_argument
};

// Ontology `index` of the corpus, drawn from its own derived seed and
// re-drawn until the tableau reports it consistent and coherent.
Ontology generate_one(const SynthConfig& cfg, std::size_t index);
std::vector<Ontology> generate_synthetic(const SynthConfig& cfg);

// ---------------------------------------------------------------- records

struct DatasetRecord {
  std::string id;
  translate::TripleDoc doc;
  std::optional<std::vector<float>> embedding;
  translate::Label label = translate::Label::Consistent;
  std::optional<antipattern::PatternId> pattern;
  OntologyStatus status = OntologyStatus::consistent_coherent();
};

// Fields of the translated doc plus "label", "pattern", "status",
// "unsat_classes" and "embedding" (null when absent).
nlohmann::json to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const nlohmann::json& j);

// Dataset JSONL: a header line {"schema": "ontocc.dataset/1", "provenance"}
// followed by one record per line.
void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records, const nlohmann::json& provenance);
std::vector<DatasetRecord> read_dataset(std::istream& in);

// ---------------------------------------------------------------- balancing

// Patterns with many more instances than the rest. When the inconsistent
// side is too large these are subsampled in proportion; the others are kept.
inline constexpr std::array<antipattern::PatternId, 4> kOverRepresented = {
    antipattern::PatternId::EID, antipattern::PatternId::CSC, antipattern::PatternId::UE,
    antipattern::PatternId::AIO};

// Split `target` over `counts` in proportion, by largest remainder (ties to
// the larger count, then to the earlier key). Requires target <= sum.
template <class Key>
std::map<Key, std::size_t> apportion(const std::map<Key, std::size_t>& counts, std::size_t target) {
  std::size_t total = 0;
  for (const auto& [k, c] : counts) total += c;
  if (target > total) throw std::invalid_argument("apportion: target exceeds total");
  std::map<Key, std::size_t> out;
  if (total == 0) return out;
  struct Rest {
    Key key;
    unsigned __int128 remainder;
    std::size_t count;
  };
  std::vector<Rest> rest;
  std::size_t given = 0;
  for (const auto& [k, c] : counts) {
    unsigned __int128 scaled = static_cast<unsigned __int128>(c) * target;
    out[k] = static_cast<std::size_t>(scaled / total);
    given += out[k];
    rest.push_back({k, scaled % total, c});
  }
  std::stable_sort(rest.begin(), rest.end(), [](const Rest& a, const Rest& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return a.count > b.count;
  });
  for (std::size_t i = 0; given < target; ++i, ++given) ++out[rest[i].key];
  return out;
}

struct BalancePlan {
  std::size_t consistent = 0;
  std::map<antipattern::PatternId, std::size_t> per_pattern;
  std::size_t inconsistent() const;
};

// How many records of each kind a balanced dataset keeps, given the counts
// that survive the token filter.
BalancePlan plan_balance(std::size_t consistent, const std::map<antipattern::PatternId, std::size_t>& census);

struct BuildStats {
  std::size_t over_budget_consistent = 0;
  std::size_t over_budget_inconsistent = 0;
  BalancePlan plan;
};

// Token filter, then balance per plan_balance. Which records of a group are
// kept is a seeded choice; the output is consistent records then inconsistent
// ones, each sorted by id.
std::vector<DatasetRecord> build_dataset(std::vector<DatasetRecord> consistent,
                                         std::vector<DatasetRecord> inconsistent,
                                         std::size_t budget = translate::kDefaultTokenBudget, std::uint64_t seed = 0,
                                         BuildStats* stats = nullptr);

// ---------------------------------------------------------------- splits

enum class Split : std::uint8_t { Train, Validation, Test };
std::string_view to_string(Split s);

struct SplitManifest {
  std::array<unsigned, 3> ratios{70, 15, 15};
  std::uint64_t seed = 0;
  bool stratified = true;
  std::map<std::string, Split> assignment;
  std::optional<antipattern::Family> excluded_family;
  std::vector<std::string> excluded;  // ids dropped from train by leave_family_out

  std::size_t count(Split s) const;
  std::vector<std::string> ids(Split s) const;
};

// Split sizes for n records: slice boundaries at round(n * cumulative ratio),
// halves rounded up. 8338 at (70,15,15) gives 5837 / 1250 / 1251.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<unsigned, 3>& ratios);

// Seeded shuffle, then contiguous slicing. With stratification each label is
// shuffled on its own and the two are interleaved evenly before slicing, so
// every slice keeps the global label balance up to one record.
SplitManifest split(const std::vector<DatasetRecord>& records, const std::array<unsigned, 3>& ratios = {70, 15, 15},
                    std::uint64_t seed = 0, bool stratified = true);

// Base manifest with the train records of `family` moved to `excluded`.
// Validation and test are untouched.
SplitManifest leave_family_out(const std::vector<DatasetRecord>& records, const SplitManifest& base,
                               antipattern::Family family);
SplitManifest leave_family_out(const std::vector<DatasetRecord>& records, const SplitManifest& base,
                               std::string_view family);  // throws UnknownFamily

nlohmann::json to_json(const SplitManifest& m);
SplitManifest manifest_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- metrics

struct PatternRecall {
  std::size_t support = 0;
  std::size_t detected = 0;
  double recall() const { return support ? static_cast<double>(detected) / static_cast<double>(support) : 0.0; }
};

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0;
  std::optional<double> precision;  // none when nothing was predicted positive
  double recall = 0;
  std::map<antipattern::PatternId, PatternRecall> per_pattern;
};

// Inconsistent (label 1) is the positive class. Every record needs a
// prediction; extra predictions are ignored.
Metrics evaluate(const std::map<std::string, int>& predictions, const std::vector<DatasetRecord>& records);

nlohmann::json to_json(const Metrics& m);

// ---------------------------------------------------------------- timing

struct TimedItem {
  std::string id;
  double wall_ms = 0;
};

struct TimingReport {
  std::string checker;
  std::vector<TimedItem> items;
  double total_ms = 0;
};

template <class Item>
TimingReport time_harness(std::string checker, const std::function<void(const Item&)>& run,
                          const std::vector<Item>& items, const std::function<std::string(const Item&)>& id_of) {
  TimingReport report{std::move(checker), {}, 0};
  for (const auto& item : items) {
    auto start = std::chrono::steady_clock::now();
    run(item);
    std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    report.items.push_back({id_of(item), ms.count()});
    report.total_ms += ms.count();
  }
  return report;
}

// {"schema", "checkers": [{"checker", "total_ms", "records": [{"id", "wall_ms"}]}]}
nlohmann::json to_json(const std::vector<TimingReport>& reports);

}  // namespace ontocc::corpus
