#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ontocc/manchester.hpp"
#include "ontocc/modularize.hpp"
#include "ontocc/tableau.hpp"

using namespace ontocc;
using namespace ontocc::modularize;

namespace {

Ontology omn(std::string_view text) { return manchester::parse(text); }
EntityName c(const std::string& local) { return class_name(std::string(manchester::kDefaultNamespace) + local); }

double score_of(const std::vector<ConceptScore>& scores, const EntityName& e) {
  for (const auto& s : scores)
    if (s.cls == e) return s.score;
  return -1;
}

const Partition& home_of(const std::vector<Partition>& parts, const EntityName& e) {
  for (const auto& p : parts)
    if (std::find(p.members.begin(), p.members.end(), e) != p.members.end()) return p;
  throw std::logic_error("unassigned");
}

// A forest of subclass trees plus some domain/range pairs and typed
// individuals. Nothing here can clash.
Ontology forest(std::uint64_t seed, int classes) {
  std::mt19937_64 rng(seed);
  std::vector<Axiom> axs;
  std::vector<EntityName> cs;
  for (int k = 0; k < classes; ++k) {
    cs.push_back(c("K" + std::to_string(k)));
    axs.push_back(Axiom::declaration(cs.back()));
    if (k > 0 && rng() % 6 != 0) {
      auto parent = cs[rng() % k];
      axs.push_back(Axiom::subclass_of(ClassExpression::named(cs.back()), ClassExpression::named(parent)));
    }
  }
  for (int k = 0; k < classes / 4; ++k) {
    auto p = property_name(std::string(manchester::kDefaultNamespace) + "p" + std::to_string(k % 5));
    axs.push_back(Axiom::domain(p, cs[rng() % cs.size()]));
    axs.push_back(Axiom::range(p, cs[rng() % cs.size()]));
    auto a = individual_name(std::string(manchester::kDefaultNamespace) + "i" + std::to_string(k));
    axs.push_back(Axiom::class_assertion(a, ClassExpression::named(cs[rng() % cs.size()])));
  }
  return Ontology("http://example.org/forest/" + std::to_string(seed), std::move(axs));
}

}  // namespace

TEST_CASE("ranking") {
  SUBCASE("single subclass axiom") {
    auto scores = rank_concepts(omn("Class: A\n SubClassOf: B"));
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].score == 2);
    CHECK(scores[1].score == 2);
    CHECK(scores[0].cls == c("A"));  // tie broken by name
  }
  SUBCASE("isolated class") {
    auto scores = rank_concepts(omn("Class: Lonely\nClass: A\n SubClassOf: B"));
    CHECK(score_of(scores, c("Lonely")) == 0);
    CHECK(scores.back().cls == c("Lonely"));
  }
  SUBCASE("university") {
    auto o = manchester::read_file(testing::fixture_dir() / "university.omn");
    auto scores = rank_concepts(o);
    auto course = class_name("http://example.org/university#Course");
    auto student = class_name("http://example.org/university#Student");
    CHECK(score_of(scores, course) >= score_of(scores, student));
    CHECK(score_of(scores, course) == 3);
    CHECK(score_of(scores, student) == 2);
  }
}

TEST_CASE("head selection") {
  auto o = omn(R"(
Class: B
    SubClassOf: A
Class: C
)");
  std::vector<ConceptScore> scores{{c("A"), 5}, {c("B"), 5}, {c("C"), 3}};
  CHECK(select_heads(o, scores, 1) == std::vector<EntityName>{c("A")});
  CHECK(select_heads(o, scores, 2) == std::vector<EntityName>{c("A"), c("C")});
  auto all = select_heads(o, scores, 3);
  CHECK(all.size() == 3);
  CHECK(std::set<EntityName>(all.begin(), all.end()) == std::set<EntityName>{c("A"), c("B"), c("C")});
  CHECK_THROWS_AS(select_heads(o, scores, 4), InsufficientConcepts);
}

TEST_CASE("partitioning") {
  SUBCASE("chain under one head") {
    auto o = omn("Class: A\n SubClassOf: B");
    auto parts = partition(o, {c("B")});
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].members == std::vector<EntityName>{c("A"), c("B")});
  }
  SUBCASE("two subtrees") {
    auto o = omn(R"(
Class: A1
    SubClassOf: A
Class: A2
    SubClassOf: A1
Class: B1
    SubClassOf: B
Class: B2
    SubClassOf: B1
)");
    auto parts = partition(o, {c("A"), c("B")});
    CHECK(parts[0].members == std::vector<EntityName>{c("A"), c("A1"), c("A2")});
    CHECK(parts[1].members == std::vector<EntityName>{c("B"), c("B1"), c("B2")});
  }
  SUBCASE("orphan goes to the best-ranked head") {
    auto o = omn(R"(
Class: A1
    SubClassOf: A
Class: B1
    SubClassOf: B
Class: Orphan
)");
    auto parts = partition(o, {c("B"), c("A")});
    CHECK(home_of(parts, c("Orphan")).head == c("B"));
  }
  SUBCASE("membership follows shared edges") {
    auto o = omn(R"(
Class: A1
    SubClassOf: A
Class: X
    SubClassOf: A1, B1
Class: X
    EquivalentTo: A1
Class: B1
    SubClassOf: B
)");
    auto parts = partition(o, {c("A"), c("B")});
    CHECK(home_of(parts, c("X")).head == c("A"));
  }
}

TEST_CASE("one partition keeps the whole source") {
  auto o = testing::pattern_fixture("oilwi");
  auto parts = partition(o, {rank_concepts(o).front().cls});
  auto ex = extract_modules(o, parts);
  REQUIRE(ex.modules.size() == 1);
  CHECK(ex.dropped.empty());
  std::vector<Axiom> content;
  for (const auto& ax : ex.modules[0].module.axioms())
    if (ax.kind() != AxiomKind::Declaration) content.push_back(ax);
  std::vector<Axiom> source;
  for (const auto& ax : o.axioms())
    if (ax.kind() != AxiomKind::Declaration) source.push_back(ax);
  CHECK(content == source);
}

TEST_CASE("spanning axioms are dropped and reported") {
  auto o = omn(R"(
Class: A1
    SubClassOf: A
Class: B1
    SubClassOf: B
Class: A1
    DisjointWith: B1
)");
  auto ex = extract_modules(o, partition(o, {c("A"), c("B")}));
  REQUIRE(ex.modules.size() == 2);
  REQUIRE(ex.dropped.size() == 1);
  CHECK(ex.dropped[0] == Axiom::disjoint(c("A1"), c("B1")));
}

TEST_CASE("property axioms follow their users") {
  auto o = omn(R"(
ObjectProperty: r
    SubPropertyOf: s
ObjectProperty: t
    SubPropertyOf: u
Class: A1
    SubClassOf: A, r some A
)");
  auto ex = build_modules(o, {1, 0});
  REQUIRE(ex.modules.size() == 1);
  const auto& m = ex.modules[0].module;
  CHECK(m.contains(Axiom::subproperty_of(RoleExpression(property_name(std::string(manchester::kDefaultNamespace) + "r")),
                                         RoleExpression(property_name(std::string(manchester::kDefaultNamespace) + "s")))));
  CHECK(ex.dropped.size() == 1);  // t SubPropertyOf u is used by nobody
}

TEST_CASE("module invariants on random forests") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto o = forest(seed, 60 + static_cast<int>(seed * 7));
    CAPTURE(seed);
    Options opt;
    opt.k = 1 + seed % 4;
    auto ex = build_modules(o, opt);
    CHECK(ex.modules.size() == *opt.k);

    std::set<Axiom> covered;
    std::set<EntityName> seen_members;
    for (const auto& m : ex.modules) {
      std::set<EntityName> declared;
      for (const auto& ax : m.module.axioms())
        if (auto d = ax.get_if<axioms::Declaration>()) declared.insert(d->entity);
        else covered.insert(ax);
      for (const auto& e : signature_of(m.module)) CHECK(declared.contains(e));
      for (const auto& cl : m.module.classes()) CHECK(seen_members.insert(cl).second);
      CHECK(m.source_id == o.id());
    }
    std::set<Axiom> source_axioms;
    for (const auto& ax : o.axioms())
      if (ax.kind() != AxiomKind::Declaration) {
        source_axioms.insert(ax);
        bool in_module = covered.contains(ax);
        bool dropped = std::find(ex.dropped.begin(), ex.dropped.end(), ax) != ex.dropped.end();
        CHECK(in_module != dropped);
      }
    CHECK(source_axioms.size() == covered.size() + std::set<Axiom>(ex.dropped.begin(), ex.dropped.end()).size());
    CHECK(seen_members.size() == o.classes().size());

    auto again = build_modules(o, opt);
    REQUIRE(again.modules.size() == ex.modules.size());
    for (std::size_t k = 0; k < ex.modules.size(); ++k)
      CHECK(manchester::serialize(again.modules[k].module) == manchester::serialize(ex.modules[k].module));
  }
}

TEST_CASE("modules of a coherent source stay coherent") {
  auto o = forest(99, 120);
  REQUIRE(tableau::classify_status(o).is_consistent_coherent());
  Options opt;
  opt.k = 3;
  for (const auto& m : build_modules(o, opt).modules) CHECK(tableau::classify_status(m.module).is_consistent_coherent());
}

TEST_CASE("default k and module size") {
  CHECK(default_k(Ontology{}) == 1);
  auto big = forest(5, 450);
  CHECK(default_k(big) == 3);
  auto ex = build_modules(big);
  std::vector<std::size_t> sizes;
  for (const auto& m : ex.modules) sizes.push_back(m.module.classes().size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes[sizes.size() / 2] < big.classes().size());
  Options strict;
  strict.min_module_classes = 10000;
  auto none = build_modules(big, strict);
  CHECK(none.modules.empty());
  CHECK(none.skipped_small == 3);
}
