#include <set>

#include "doctest.h"
#include "ontocc/parallel.hpp"
#include "ontocc/pipeline.hpp"
#include "ontocc/provenance.hpp"

using namespace ontocc;
using namespace ontocc::pipeline;

namespace {

Config small() {
  Config cfg;
  cfg.seed = 7;
  cfg.synth.n_ontologies = 6;
  cfg.synth.classes = {30, 60};
  cfg.train.dim = 8;
  cfg.train.epochs = 2;
  cfg.walks_per_node = 3;
  return cfg;
}

std::string dump(const Result& r) {
  std::string out;
  for (const auto& rec : r.dataset) out += corpus::to_json(rec).dump() + "\n";
  return out + corpus::to_json(r.manifest).dump();
}

}  // namespace

TEST_CASE("sha-256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  auto p = provenance(3, {{"a", 1}});
  CHECK(p["seed"] == 3);
  CHECK(p["tool"] == "ontocc");
  CHECK(p["config_hash"] == sha256_hex(nlohmann::json{{"a", 1}}.dump()));
}

TEST_CASE("parallel_for collects by index") {
  std::vector<std::size_t> out(100);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 4) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("pipeline end to end") {
  auto cfg = small();
  auto a = run(cfg);
  REQUIRE_FALSE(a.dataset.empty());
  CHECK(a.soundness_violations().empty());

  std::size_t zeros = 0;
  for (const auto& r : a.dataset) {
    zeros += r.label == translate::Label::Consistent;
    CHECK((r.label == translate::Label::Inconsistent) == r.pattern.has_value());
    REQUIRE(r.embedding.has_value());
    CHECK(r.embedding->size() == 8);
    const auto& m = a.module(r.id);
    CHECK(m.injection.has_value() == r.pattern.has_value());
    if (m.injection) {
      CHECK(m.injection->injected_axioms.size() <= 2);
      CHECK(antipattern::contains_pattern(m.ontology, *r.pattern));
    }
  }
  CHECK(zeros * 2 == a.dataset.size());
  CHECK(a.manifest.assignment.size() == a.dataset.size());

  SUBCASE("same seed, same bytes, whatever the worker count") {
    auto again = cfg;
    again.workers = 3;
    CHECK(dump(run(again)) == dump(a));
  }
  SUBCASE("another seed differs") {
    auto other = cfg;
    other.seed = 8;
    CHECK(dump(run(other)) != dump(a));
  }
}

TEST_CASE("injection seeds do not depend on the pattern list") {
  auto cfg = small();
  cfg.synth.n_ontologies = 1;
  cfg.embed = false;
  auto r = run(cfg);
  REQUIRE_FALSE(r.modules.empty());
  const auto& m = r.modules.front();
  auto all = inject_all(m, cfg.patterns, 11, 2);
  auto one = inject_all(m, {antipattern::PatternId::EID}, 11, 2);
  REQUIRE(one.size() == 1);
  auto it = std::find_if(all.begin(), all.end(), [](const Module& x) { return x.id == x.injection->source_module + "-EID"; });
  REQUIRE(it != all.end());
  CHECK(it->ontology.axioms() == one[0].ontology.axioms());
}

TEST_CASE("config json excludes workers") {
  auto a = small(), b = small();
  b.workers = 9;
  CHECK(a.to_json() == b.to_json());
  b.seed = 1;
  CHECK(a.to_json() != b.to_json());
}
