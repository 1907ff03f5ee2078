#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "ontocc/corpus.hpp"
#include "ontocc/manchester.hpp"
#include "ontocc/tableau.hpp"

using namespace ontocc;
using namespace ontocc::corpus;
using antipattern::PatternId;
using translate::Label;

namespace {

DatasetRecord record(std::string id, std::optional<PatternId> pattern, std::size_t tokens = 10) {
  DatasetRecord r;
  r.id = std::move(id);
  r.doc.id = r.id;
  r.doc.triples = {{"a", "is a", "class"}};
  r.doc.token_count = tokens;
  r.pattern = pattern;
  r.label = pattern ? Label::Inconsistent : Label::Consistent;
  return r;
}

std::vector<DatasetRecord> consistent_records(std::size_t n, const std::string& prefix = "c") {
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(record(prefix + std::to_string(i), std::nullopt));
  return out;
}

std::vector<DatasetRecord> census_records(const std::map<PatternId, std::size_t>& census) {
  std::vector<DatasetRecord> out;
  for (const auto& [p, n] : census)
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(record(std::string(antipattern::to_string(p)) + "-" + std::to_string(i), p));
  return out;
}

std::vector<DatasetRecord> balanced(std::size_t per_side) {
  auto rs = consistent_records(per_side);
  for (std::size_t i = 0; i < per_side; ++i)
    rs.push_back(record("x" + std::to_string(i), antipattern::kAllPatterns[i % antipattern::kAllPatterns.size()]));
  return rs;
}

std::map<PatternId, std::size_t> reference_census() {
  return {{PatternId::AIO, 1338}, {PatternId::EID, 3656},   {PatternId::OIL, 1},      {PatternId::OILWI, 1},
          {PatternId::OILWPI, 0}, {PatternId::UE, 1357},    {PatternId::UEWI_1, 63},  {PatternId::UEWI_2, 62},
          {PatternId::UEWPI, 4},  {PatternId::UEWIP, 20},   {PatternId::SOSINETO, 6}, {PatternId::OOR, 27},
          {PatternId::OOD, 24},   {PatternId::CSC, 3520}};
}

}  // namespace

TEST_CASE("synthetic generation") {
  SynthConfig cfg;
  cfg.n_ontologies = 1;
  cfg.seed = 17;
  auto a = generate_synthetic(cfg), b = generate_synthetic(cfg);
  REQUIRE(a.size() == 1);
  CHECK(manchester::serialize(a[0]) == manchester::serialize(b[0]));
  cfg.seed = 18;
  CHECK(manchester::serialize(generate_synthetic(cfg)[0]) != manchester::serialize(a[0]));

  cfg.n_ontologies = 30;
  cfg.seed = 3;
  for (const auto& o : generate_synthetic(cfg)) {
    CAPTURE(o.id());
    CHECK(tableau::classify_status(o).is_consistent_coherent());
    CHECK(same_axioms(manchester::parse(manchester::serialize(o)), o));
    auto cs = o.classes().size();
    CHECK(cs >= cfg.classes.min);
    CHECK(cs <= cfg.classes.max);
  }

  SynthConfig bad;
  bad.classes = {10, 5};
  CHECK_THROWS_AS(generate_synthetic(bad), std::invalid_argument);
  bad = {};
  bad.disjointness_density = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("a corpus of 200 admits at least 8 patterns") {
  SynthConfig cfg;
  cfg.n_ontologies = 200;
  cfg.classes = {8, 20};
  cfg.seed = 5;
  std::set<PatternId> injectable;
  for (const auto& o : generate_synthetic(cfg))
    for (auto id : antipattern::kAllPatterns)
      if (!injectable.contains(id) && !antipattern::find_injection_sites(o, id, 2, 1).empty()) injectable.insert(id);
  CHECK(injectable.size() >= 8);
}

TEST_CASE("retry budget") {
  SynthConfig cfg;
  cfg.max_retries = 0;
  CHECK_THROWS_AS(generate_one(cfg, 0), std::invalid_argument);
}

TEST_CASE("largest remainder apportionment") {
  std::map<char, std::size_t> counts{{'a', 1}, {'b', 1}, {'c', 1}};
  auto two = apportion(counts, 2);
  CHECK(two['a'] + two['b'] + two['c'] == 2);
  CHECK(two['a'] == 1);  // ties go to the earlier key
  CHECK(two['b'] == 1);
  CHECK(apportion(counts, 3) == counts);
  CHECK_THROWS(apportion(counts, 4));
  CHECK(apportion(std::map<char, std::size_t>{}, 0).empty());
}

TEST_CASE("balance plan at full scale") {
  auto plan = plan_balance(4169, reference_census());
  CHECK(plan.consistent == 4169);
  CHECK(plan.inconsistent() == 4169);
  // rarer patterns are kept whole
  for (auto id : {PatternId::OIL, PatternId::OILWI, PatternId::OILWPI, PatternId::UEWI_1, PatternId::UEWI_2,
                  PatternId::UEWPI, PatternId::UEWIP, PatternId::SOSINETO, PatternId::OOR, PatternId::OOD})
    CHECK(plan.per_pattern.at(id) == reference_census().at(id));
  // the four large ones share 3961 places in proportion: every count is
  // within one of its exact quota
  const double quota_scale = 3961.0 / 9871.0;
  for (auto id : kOverRepresented) {
    double quota = static_cast<double>(reference_census().at(id)) * quota_scale;
    CHECK(std::abs(static_cast<double>(plan.per_pattern.at(id)) - quota) < 1.0);
  }
  CHECK(plan.per_pattern.at(PatternId::EID) == 1467);
  CHECK(plan.per_pattern.at(PatternId::CSC) == 1412);
}

TEST_CASE("build dataset") {
  SUBCASE("equal inputs are not downsampled") {
    auto out = build_dataset(consistent_records(5), census_records({{PatternId::EID, 3}, {PatternId::OOD, 2}}));
    CHECK(out.size() == 10);
  }
  SUBCASE("300 against 500 keeps the large-pattern ratios") {
    std::map<PatternId, std::size_t> census{{PatternId::EID, 150}, {PatternId::CSC, 140}, {PatternId::UE, 70},
                                            {PatternId::AIO, 60},  {PatternId::OOD, 30},  {PatternId::UEWI_2, 50}};
    BuildStats st;
    auto out = build_dataset(consistent_records(300), census_records(census), 4096, 1, &st);
    std::map<PatternId, std::size_t> got;
    std::size_t zeros = 0;
    for (const auto& r : out) {
      CHECK((r.label == Label::Inconsistent) == r.pattern.has_value());
      if (r.pattern) ++got[*r.pattern];
      else ++zeros;
    }
    CHECK(zeros == 300);
    CHECK(out.size() == 600);
    CHECK(got[PatternId::OOD] == 30);
    CHECK(got[PatternId::UEWI_2] == 50);
    const double scale = 220.0 / 420.0;
    for (auto id : kOverRepresented) CHECK(std::abs(static_cast<double>(got[id]) - census[id] * scale) <= 1.0);
  }
  SUBCASE("token budget filters both sides first") {
    auto cons = consistent_records(4);
    cons[0].doc.token_count = 5000;
    auto inc = census_records({{PatternId::EID, 6}});
    inc[1].doc.token_count = 4097;
    BuildStats st;
    auto out = build_dataset(cons, inc, 4096, 0, &st);
    CHECK(st.over_budget_consistent == 1);
    CHECK(st.over_budget_inconsistent == 1);
    CHECK(out.size() == 6);
    for (const auto& r : out) CHECK(r.doc.token_count <= 4096);
  }
  SUBCASE("more consistent than inconsistent") {
    auto out = build_dataset(consistent_records(20), census_records({{PatternId::CSC, 7}}));
    CHECK(std::count_if(out.begin(), out.end(), [](auto& r) { return r.label == Label::Consistent; }) == 7);
    CHECK(out.size() == 14);
  }
  SUBCASE("rare patterns alone exceed the target") {
    auto out = build_dataset(consistent_records(4), census_records({{PatternId::OOD, 6}, {PatternId::OOR, 2}}));
    CHECK(out.size() == 8);
  }
  SUBCASE("seeded and order independent") {
    auto inc = census_records({{PatternId::EID, 40}, {PatternId::AIO, 30}});
    auto a = build_dataset(consistent_records(25), inc, 4096, 9);
    std::reverse(inc.begin(), inc.end());
    auto b = build_dataset(consistent_records(25), inc, 4096, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
    auto c = build_dataset(consistent_records(25), inc, 4096, 10);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].id != c[i].id;
    CHECK(differs);
  }
}

TEST_CASE("split sizes") {
  CHECK(split_sizes(8338, {70, 15, 15}) == std::array<std::size_t, 3>{5837, 1250, 1251});
  auto ten = split_sizes(10, {70, 15, 15});
  CHECK(ten[0] == 7);
  CHECK(((ten[1] == 1 && ten[2] == 2) || (ten[1] == 2 && ten[2] == 1)));
  CHECK(split_sizes(0, {70, 15, 15}) == std::array<std::size_t, 3>{0, 0, 0});
  CHECK_THROWS(split_sizes(10, {70, 20, 15}));
  // no split is more than one record away from its exact share
  for (std::size_t n = 0; n < 2000; n += 7) {
    auto s = split_sizes(n, {70, 15, 15});
    CHECK(s[0] + s[1] + s[2] == n);
    CHECK(std::abs(static_cast<double>(s[0]) - 0.70 * n) <= 1.0);
    CHECK(std::abs(static_cast<double>(s[1]) - 0.15 * n) <= 1.0);
    CHECK(std::abs(static_cast<double>(s[2]) - 0.15 * n) <= 1.0);
  }
}

TEST_CASE("split manifests") {
  auto rs = balanced(500);
  auto m = split(rs, {70, 15, 15}, 4);
  CHECK(m.assignment.size() == rs.size());
  CHECK(m.count(Split::Train) == 700);
  CHECK(m.count(Split::Validation) == 150);
  CHECK(m.count(Split::Test) == 150);
  CHECK(to_json(split(rs, {70, 15, 15}, 4)).dump() == to_json(m).dump());
  CHECK(to_json(split(rs, {70, 15, 15}, 5)).dump() != to_json(m).dump());

  // label balance per split within 2% of the global balance
  for (Split s : {Split::Train, Split::Validation, Split::Test}) {
    std::size_t pos = 0, n = 0;
    for (const auto& r : rs)
      if (m.assignment.at(r.id) == s) {
        ++n;
        pos += r.label == Label::Inconsistent;
      }
    CHECK(std::abs(static_cast<double>(pos) / n - 0.5) <= 0.02);
  }

  auto round_trip = manifest_from_json(nlohmann::json::parse(to_json(m).dump()));
  CHECK(round_trip.assignment == m.assignment);
  CHECK(round_trip.seed == m.seed);

  auto plain = split(rs, {70, 15, 15}, 4, false);
  CHECK_FALSE(plain.stratified);
  CHECK(plain.count(Split::Train) == 700);

  std::vector<DatasetRecord> dup = {record("a", std::nullopt), record("a", std::nullopt)};
  CHECK_THROWS(split(dup));
}

TEST_CASE("leave one family out") {
  auto rs = balanced(700);
  auto base = split(rs, {70, 15, 15}, 1);
  auto oil = leave_family_out(rs, base, "OIL*");
  for (const auto& r : rs) {
    if (r.pattern && antipattern::family_of(*r.pattern) == antipattern::Family::OIL) {
      auto it = oil.assignment.find(r.id);
      CHECK((it == oil.assignment.end() || it->second != Split::Train));
    }
  }
  CHECK_FALSE(oil.excluded.empty());

  auto csc = leave_family_out(rs, base, antipattern::Family::CSC);
  auto test_csc = [&](const SplitManifest& m) {
    std::size_t n = 0;
    for (const auto& r : rs)
      if (r.pattern == PatternId::CSC && m.assignment.contains(r.id) && m.assignment.at(r.id) == Split::Test) ++n;
    return n;
  };
  CHECK(test_csc(csc) == test_csc(base));
  CHECK(csc.ids(Split::Validation) == base.ids(Split::Validation));

  auto only_consistent = consistent_records(20);
  auto b2 = split(only_consistent, {70, 15, 15}, 1);
  CHECK(leave_family_out(only_consistent, b2, "CSC").assignment == b2.assignment);

  CHECK_THROWS_AS(leave_family_out(rs, base, "OIL"), UnknownFamily);
  CHECK(manifest_from_json(to_json(oil)).excluded_family == antipattern::Family::OIL);
}

TEST_CASE("evaluation metrics") {
  auto rs = balanced(10);
  std::map<std::string, int> truth, all_pos, all_neg;
  for (const auto& r : rs) {
    truth[r.id] = static_cast<int>(r.label);
    all_pos[r.id] = 1;
    all_neg[r.id] = 0;
  }
  auto perfect = evaluate(truth, rs);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);

  auto pos = evaluate(all_pos, rs);
  CHECK(pos.accuracy == 0.5);
  CHECK(pos.recall == 1.0);
  CHECK(pos.tp == 10);
  CHECK(pos.fp == 10);

  auto neg = evaluate(all_neg, rs);
  CHECK_FALSE(neg.precision.has_value());
  CHECK(to_json(neg)["precision"].is_null());
  CHECK(neg.recall == 0.0);

  // accuracy recomputed from raw predictions matches bit for bit
  std::map<std::string, int> mixed;
  std::size_t correct = 0, i = 0;
  for (const auto& r : rs) {
    mixed[r.id] = (i++ % 3 == 0) ? 1 : 0;
    correct += mixed[r.id] == static_cast<int>(r.label);
  }
  auto mm = evaluate(mixed, rs);
  CHECK(mm.accuracy == static_cast<double>(correct) / static_cast<double>(rs.size()));
  CHECK(mm.tp + mm.fp + mm.tn + mm.fn == rs.size());

  std::size_t support = 0;
  for (const auto& [p, pr] : pos.per_pattern) {
    CHECK(pr.recall() == 1.0);
    support += pr.support;
  }
  CHECK(support == 10);

  auto missing = truth;
  missing.erase(rs.front().id);
  CHECK_THROWS_AS(evaluate(missing, rs), MissingPrediction);
  truth["not-a-record"] = 1;
  CHECK_NOTHROW(evaluate(truth, rs));
}

TEST_CASE("record json") {
  auto r = record("m1-EID", PatternId::EID);
  r.status = OntologyStatus::incoherent({class_name("http://x.org/o#A")});
  r.embedding = std::vector<float>{0.25f, -1.5f, 3.1415927f};
  r.doc.label = r.label;
  r.doc.pattern = r.pattern;
  auto j = to_json(r);
  CHECK(j["status"] == "incoherent");
  CHECK(j["label"] == 1);
  CHECK(j["pattern"] == "EID");
  auto back = record_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.embedding == r.embedding);
  CHECK(back.status == r.status);
  CHECK(to_json(back).dump() == j.dump());

  j["label"] = 0;
  CHECK_THROWS(record_from_json(j));
}

TEST_CASE("timing harness") {
  std::vector<int> none;
  auto empty = time_harness<int>("noop", [](const int&) {}, none, [](const int& i) { return std::to_string(i); });
  CHECK(empty.total_ms == 0);
  std::vector<int> items{1, 2, 3};
  auto a = time_harness<int>("noop", [](const int&) {}, items, [](const int& i) { return std::to_string(i); });
  auto b = time_harness<int>("other", [](const int&) {}, items, [](const int& i) { return std::to_string(i); });
  auto j = to_json(std::vector<TimingReport>{a, b});
  CHECK(j["checkers"].size() == 2);
  CHECK(j["checkers"][0]["records"].size() == 3);
  CHECK(j["checkers"][1]["checker"] == "other");
}
