#include "ontocc/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <set>

#include "ontocc/seed.hpp"

namespace ontocc::corpus {

using antipattern::PatternId;
using translate::Label;

// ---------------------------------------------------------------- records

nlohmann::json to_json(const DatasetRecord& r) {
  nlohmann::json j = translate::to_json(r.doc);
  j["id"] = r.id;
  j["label"] = static_cast<int>(r.label);
  j["pattern"] = r.pattern ? nlohmann::json(std::string(antipattern::to_string(*r.pattern))) : nlohmann::json(nullptr);
  j["status"] = std::string(to_string(r.status.kind()));
  nlohmann::json unsat = nlohmann::json::array();
  for (const auto& c : r.status.unsatisfiable()) unsat.push_back(c.iri());
  j["unsat_classes"] = std::move(unsat);
  if (r.status.kind() == OntologyStatus::Kind::Inconsistent) j["clash"] = r.status.clash();
  j["embedding"] = r.embedding ? nlohmann::json(*r.embedding) : nlohmann::json(nullptr);
  return j;
}

DatasetRecord record_from_json(const nlohmann::json& j) {
  DatasetRecord r;
  r.doc = translate::doc_from_json(j);
  r.id = j.at("id").get<std::string>();
  int label = j.at("label").get<int>();
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
  r.label = static_cast<Label>(label);
  r.pattern = r.doc.pattern;
  if (r.pattern.has_value() != (r.label == Label::Inconsistent))
    throw std::invalid_argument("record " + r.id + ": label 1 requires a pattern and label 0 forbids one");
  const auto status = j.at("status").get<std::string>();
  if (status == "consistent") {
    r.status = OntologyStatus::consistent_coherent();
  } else if (status == "incoherent") {
    std::vector<EntityName> unsat;
    for (const auto& c : j.at("unsat_classes")) unsat.push_back(class_name(c.get<std::string>()));
    r.status = OntologyStatus::incoherent(std::move(unsat));
  } else if (status == "inconsistent") {
    r.status = OntologyStatus::inconsistent(j.value("clash", std::string()));
  } else {
    throw std::invalid_argument("unknown status '" + status + "'");
  }
  if (j.contains("embedding") && !j["embedding"].is_null()) r.embedding = j["embedding"].get<std::vector<float>>();
  return r;
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records, const nlohmann::json& provenance) {
  out << nlohmann::json{{"schema", "ontocc.dataset/1"}, {"provenance", provenance}}.dump() << "\n";
  for (const auto& r : records) out << to_json(r).dump() << "\n";
}

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    if (n == 1 && j.contains("schema")) {
      if (j["schema"] != "ontocc.dataset/1") throw std::invalid_argument("not a dataset file: " + j["schema"].dump());
      continue;
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

// ---------------------------------------------------------------- balancing

std::size_t BalancePlan::inconsistent() const {
  std::size_t n = 0;
  for (const auto& [p, c] : per_pattern) n += c;
  return n;
}

namespace {

bool over_represented(PatternId id) {
  return std::find(kOverRepresented.begin(), kOverRepresented.end(), id) != kOverRepresented.end();
}

}  // namespace

BalancePlan plan_balance(std::size_t consistent, const std::map<PatternId, std::size_t>& census) {
  BalancePlan plan;
  std::size_t inconsistent = 0;
  for (const auto& [p, c] : census) inconsistent += c;
  const std::size_t target = std::min(consistent, inconsistent);
  plan.consistent = target;
  if (inconsistent == target) {
    plan.per_pattern = census;
    return plan;
  }
  std::map<PatternId, std::size_t> big;
  std::size_t rare = 0;
  for (const auto& [p, c] : census) {
    if (over_represented(p)) big[p] = c;
    else rare += c;
  }
  std::size_t big_total = inconsistent - rare;
  if (rare <= target && target - rare <= big_total) {
    plan.per_pattern = census;
    for (const auto& [p, c] : apportion(big, target - rare)) plan.per_pattern[p] = c;
  } else {
    // the rare patterns alone exceed the target: everything shrinks in proportion
    plan.per_pattern = apportion(census, target);
  }
  return plan;
}

namespace {

std::vector<DatasetRecord> sample(std::vector<DatasetRecord> group, std::size_t n, std::uint64_t seed) {
  std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  if (n < group.size()) {
    std::mt19937_64 rng(seed);
    portable_shuffle(group, rng);
    group.resize(n);
  }
  return group;
}

}  // namespace

std::vector<DatasetRecord> build_dataset(std::vector<DatasetRecord> consistent,
                                         std::vector<DatasetRecord> inconsistent, std::size_t budget,
                                         std::uint64_t seed, BuildStats* stats) {
  BuildStats local;
  BuildStats& st = stats ? *stats : local;
  st = {};
  auto over = [budget](const DatasetRecord& r) { return r.doc.token_count > budget; };
  st.over_budget_consistent = static_cast<std::size_t>(std::count_if(consistent.begin(), consistent.end(), over));
  st.over_budget_inconsistent =
      static_cast<std::size_t>(std::count_if(inconsistent.begin(), inconsistent.end(), over));
  std::erase_if(consistent, over);
  std::erase_if(inconsistent, over);

  std::map<PatternId, std::vector<DatasetRecord>> by_pattern;
  for (auto& r : inconsistent) {
    if (!r.pattern) throw std::invalid_argument("inconsistent record " + r.id + " has no pattern");
    by_pattern[*r.pattern].push_back(std::move(r));
  }
  std::map<PatternId, std::size_t> census;
  for (const auto& [p, rs] : by_pattern) census[p] = rs.size();
  st.plan = plan_balance(consistent.size(), census);

  std::vector<DatasetRecord> out = sample(std::move(consistent), st.plan.consistent, derive_seed(seed, "consistent"));
  for (auto& r : out) {
    r.label = Label::Consistent;
    r.pattern.reset();
  }
  std::vector<DatasetRecord> positives;
  for (auto& [p, rs] : by_pattern) {
    auto kept = sample(std::move(rs), st.plan.per_pattern.at(p),
                       derive_seed(seed, std::string("pattern/") + std::string(antipattern::to_string(p))));
    for (auto& r : kept) {
      r.label = Label::Inconsistent;
      positives.push_back(std::move(r));
    }
  }
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(out.begin(), out.end(), by_id);
  std::sort(positives.begin(), positives.end(), by_id);
  for (auto& r : positives) out.push_back(std::move(r));
  for (auto& r : out) {
    r.doc.label = r.label;
    r.doc.pattern = r.pattern;
  }
  return out;
}

// ---------------------------------------------------------------- splits

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "?";
}

namespace {

Split split_from_string(const std::string& s) {
  for (Split x : {Split::Train, Split::Validation, Split::Test})
    if (to_string(x) == s) return x;
  throw std::invalid_argument("unknown split '" + s + "'");
}

}  // namespace

std::size_t SplitManifest::count(Split s) const {
  return static_cast<std::size_t>(
      std::count_if(assignment.begin(), assignment.end(), [s](const auto& kv) { return kv.second == s; }));
}

std::vector<std::string> SplitManifest::ids(Split s) const {
  std::vector<std::string> out;
  for (const auto& [id, x] : assignment)
    if (x == s) out.push_back(id);
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<unsigned, 3>& ratios) {
  const unsigned total = ratios[0] + ratios[1] + ratios[2];
  if (total != 100) throw std::invalid_argument("split ratios must sum to 100");
  // boundary = floor(n * cum / 100 + 1/2)
  auto boundary = [&](unsigned cum) { return (2 * n * cum + 100) / 200; };
  std::size_t b1 = boundary(ratios[0]), b2 = boundary(ratios[0] + ratios[1]);
  return {b1, b2 - b1, n - b2};
}

SplitManifest split(const std::vector<DatasetRecord>& records, const std::array<unsigned, 3>& ratios,
                    std::uint64_t seed, bool stratified) {
  SplitManifest m;
  m.ratios = ratios;
  m.seed = seed;
  m.stratified = stratified;
  auto sizes = split_sizes(records.size(), ratios);

  std::vector<const DatasetRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (order[i]->id == order[i - 1]->id) throw std::invalid_argument("duplicate record id " + order[i]->id);

  if (!stratified) {
    std::mt19937_64 rng(seed);
    portable_shuffle(order, rng);
  } else {
    std::array<std::vector<const DatasetRecord*>, 2> groups;
    for (auto* r : order) groups[static_cast<int>(r->label)].push_back(r);
    for (int g = 0; g < 2; ++g) {
      std::mt19937_64 rng(derive_seed(seed, "label" + std::to_string(g)));
      portable_shuffle(groups[g], rng);
    }
    // element i of a group of size m sits at (2i+1)/(2m); merge by position
    order.clear();
    std::size_t i = 0, j = 0;
    const std::size_t m0 = groups[0].size(), m1 = groups[1].size();
    while (i < m0 || j < m1) {
      bool take0 = j == m1 || (i < m0 && (2 * i + 1) * m1 <= (2 * j + 1) * m0);
      order.push_back(take0 ? groups[0][i++] : groups[1][j++]);
    }
  }
  std::size_t at = 0;
  for (int s = 0; s < 3; ++s)
    for (std::size_t k = 0; k < sizes[s]; ++k) m.assignment[order[at++]->id] = static_cast<Split>(s);
  return m;
}

SplitManifest leave_family_out(const std::vector<DatasetRecord>& records, const SplitManifest& base,
                               antipattern::Family family) {
  SplitManifest m = base;
  m.excluded_family = family;
  for (const auto& r : records) {
    if (!r.pattern || antipattern::family_of(*r.pattern) != family) continue;
    auto it = m.assignment.find(r.id);
    if (it == m.assignment.end() || it->second != Split::Train) continue;
    m.assignment.erase(it);
    m.excluded.push_back(r.id);
  }
  std::sort(m.excluded.begin(), m.excluded.end());
  return m;
}

SplitManifest leave_family_out(const std::vector<DatasetRecord>& records, const SplitManifest& base,
                               std::string_view family) {
  auto f = antipattern::family_from_string(family);
  if (!f) throw UnknownFamily("unknown pattern family '" + std::string(family) + "'");
  return leave_family_out(records, base, *f);
}

nlohmann::json to_json(const SplitManifest& m) {
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [id, s] : m.assignment) assignment[id] = std::string(to_string(s));
  return {{"schema", "ontocc.split/1"},
          {"ratios", m.ratios},
          {"seed", m.seed},
          {"stratified", m.stratified},
          {"sizes",
           {{"train", m.count(Split::Train)},
            {"validation", m.count(Split::Validation)},
            {"test", m.count(Split::Test)}}},
          {"assignment", std::move(assignment)},
          {"excluded_family", m.excluded_family ? nlohmann::json(std::string(antipattern::to_string(*m.excluded_family)))
                                                : nlohmann::json(nullptr)},
          {"excluded", m.excluded}};
}

SplitManifest manifest_from_json(const nlohmann::json& j) {
  SplitManifest m;
  m.ratios = j.at("ratios").get<std::array<unsigned, 3>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.stratified = j.value("stratified", true);
  for (const auto& [id, s] : j.at("assignment").items()) m.assignment[id] = split_from_string(s.get<std::string>());
  if (j.contains("excluded_family") && !j["excluded_family"].is_null()) {
    auto name = j["excluded_family"].get<std::string>();
    auto f = antipattern::family_from_string(name);
    if (!f) throw UnknownFamily("unknown pattern family '" + name + "'");
    m.excluded_family = *f;
  }
  if (j.contains("excluded")) m.excluded = j["excluded"].get<std::vector<std::string>>();
  return m;
}

// ---------------------------------------------------------------- metrics

Metrics evaluate(const std::map<std::string, int>& predictions, const std::vector<DatasetRecord>& records) {
  Metrics m;
  for (const auto& r : records) {
    auto it = predictions.find(r.id);
    if (it == predictions.end()) throw MissingPrediction("no prediction for record " + r.id);
    if (it->second != 0 && it->second != 1) throw std::invalid_argument("prediction for " + r.id + " is not 0 or 1");
    const bool predicted = it->second == 1, actual = r.label == Label::Inconsistent;
    if (predicted && actual) ++m.tp;
    else if (predicted) ++m.fp;
    else if (actual) ++m.fn;
    else ++m.tn;
    if (r.pattern) {
      auto& pr = m.per_pattern[*r.pattern];
      ++pr.support;
      if (predicted) ++pr.detected;
    }
  }
  const std::size_t total = m.tp + m.fp + m.tn + m.fn;
  m.accuracy = total ? static_cast<double>(m.tp + m.tn) / static_cast<double>(total) : 0.0;
  if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  m.recall = m.tp + m.fn ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
  return m;
}

nlohmann::json to_json(const Metrics& m) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [p, r] : m.per_pattern)
    per[std::string(antipattern::to_string(p))] = {{"support", r.support}, {"detected", r.detected}, {"recall", r.recall()}};
  return {{"schema", "ontocc.metrics/1"},
          {"tp", m.tp},
          {"fp", m.fp},
          {"tn", m.tn},
          {"fn", m.fn},
          {"accuracy", m.accuracy},
          {"precision", m.precision ? nlohmann::json(*m.precision) : nlohmann::json(nullptr)},
          {"recall", m.recall},
          {"per_pattern", std::move(per)}};
}

// ---------------------------------------------------------------- timing

nlohmann::json to_json(const std::vector<TimingReport>& reports) {
  nlohmann::json checkers = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : r.items) items.push_back({{"id", it.id}, {"wall_ms", it.wall_ms}});
    checkers.push_back({{"checker", r.checker}, {"total_ms", r.total_ms}, {"records", std::move(items)}});
  }
  return {{"schema", "ontocc.timing/1"}, {"checkers", std::move(checkers)}};
}

}  // namespace ontocc::corpus
