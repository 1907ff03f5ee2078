#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "ontocc/antipattern.hpp"
#include "ontocc/manchester.hpp"
#include "ontocc/oracle.hpp"
#include "ontocc/tableau.hpp"

using namespace ontocc;
using namespace ontocc::antipattern;

namespace {

Ontology omn(std::string_view text) { return manchester::parse(text); }

EntityName c(const std::string& local) { return class_name(std::string(manchester::kDefaultNamespace) + local); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

Axiom canonical(const Axiom& ax) {
  if (auto d = ax.get_if<axioms::DisjointClasses>(); d && d->second < d->first)
    return Axiom::disjoint(d->second, d->first);
  if (auto e = ax.get_if<axioms::EquivalentClasses>(); e && e->second < e->first)
    return Axiom::equivalent(e->second, e->first);
  return ax;
}

// Every substitution over the signature, checked by instantiating the whole
// template. Returns the sets of ontology axioms that form an instance.
std::set<std::set<Axiom>> brute_force(const Ontology& o, const PatternTemplate& t) {
  std::set<std::string> vars;
  std::map<std::string, EntityKind> kinds;
  for (const auto& ax : t.schemata)
    for (const auto& e : entities_of(ax))
      if (is_variable(e)) {
        vars.insert(e.local());
        kinds[e.local()] = e.kind();
      }
  std::vector<std::string> order(vars.begin(), vars.end());
  std::set<Axiom> present;
  for (const auto& ax : o.axioms()) present.insert(canonical(ax));
  std::set<std::set<Axiom>> out;
  Substitution s;
  auto rec = [&](auto&& self, std::size_t d) -> void {
    if (d == order.size()) {
      for (const auto& [a, b] : t.distinct) {
        if (s.entities.contains(a) && s.entities.at(a) == s.entities.at(b)) return;
        if (s.roles.contains(a) && s.roles.at(a).property() == s.roles.at(b).property()) return;
      }
      std::set<Axiom> inst;
      for (const auto& schema : t.schemata) {
        Axiom ax = Axiom::declaration(c("x"));
        try {
          ax = canonical(instantiate(schema, s));
        } catch (const std::exception&) {
          return;
        }
        if (!present.contains(ax)) return;
        inst.insert(ax);
      }
      if (inst.size() == t.arity()) out.insert(inst);
      return;
    }
    const std::string& v = order[d];
    if (kinds[v] == EntityKind::ObjectProperty) {
      for (const auto& p : o.properties())
        for (bool inv : {false, true}) {
          s.roles.insert_or_assign(v, RoleExpression(p, inv));
          self(self, d + 1);
        }
      s.roles.erase(v);
    } else {
      auto pool = kinds[v] == EntityKind::Class ? o.classes() : o.individuals();
      for (const auto& e : pool) {
        s.entities.insert_or_assign(v, e);
        self(self, d + 1);
      }
      s.entities.erase(v);
    }
  };
  rec(rec, 0);
  return out;
}

std::set<std::set<Axiom>> detected_sets(const Ontology& o, PatternId id) {
  std::set<std::set<Axiom>> out;
  for (const auto& m : detect(o, id)) {
    std::set<Axiom> s;
    for (const auto& ax : m.binding.matched) s.insert(canonical(ax));
    out.insert(s);
  }
  return out;
}

// Random small ontology built from instantiated schemata over a tiny
// vocabulary, so complete and partial instances both occur.
Ontology random_pattern_soup(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<EntityName> cs{c("A"), c("B"), c("C"), c("D")};
  std::vector<EntityName> ps{property_name(std::string(manchester::kDefaultNamespace) + "r"),
                             property_name(std::string(manchester::kDefaultNamespace) + "s")};
  std::vector<EntityName> is{individual_name(std::string(manchester::kDefaultNamespace) + "i"),
                             individual_name(std::string(manchester::kDefaultNamespace) + "j")};
  std::vector<Axiom> axs;
  std::set<Axiom> seen;
  std::size_t target = 3 + rng() % 8;
  int guard = 0;
  while (axs.size() < target && ++guard < 200) {
    const auto& t = templates()[rng() % templates().size()];
    const Axiom& schema = t.schemata[rng() % t.arity()];
    Substitution s;
    for (const auto& e : entities_of(schema)) {
      if (!is_variable(e)) continue;
      if (e.kind() == EntityKind::Class) s.entities.insert_or_assign(e.local(), cs[rng() % cs.size()]);
      else if (e.kind() == EntityKind::Individual) s.entities.insert_or_assign(e.local(), is[rng() % is.size()]);
      else s.roles.insert_or_assign(e.local(), RoleExpression(ps[rng() % ps.size()], rng() % 5 == 0));
    }
    try {
      Axiom ax = instantiate(schema, s);
      if (seen.insert(canonical(ax)).second) axs.push_back(ax);
    } catch (const std::exception&) {
    }
  }
  return Ontology("soup-" + std::to_string(seed), std::move(axs));
}

}  // namespace

TEST_CASE("templates transcribe the fourteen patterns") {
  REQUIRE(templates().size() == 14);
  CHECK(template_of(PatternId::EID).arity() == 2);
  CHECK(template_of(PatternId::OILWI).arity() == 4);
  CHECK(template_of(PatternId::CSC).arity() == 3);
  for (const auto& t : templates()) {
    CHECK(t.arity() >= 2);
    CHECK(t.arity() <= 4);
  }
  const auto& aio = template_of(PatternId::AIO).schemata;
  CHECK(display(aio[0]) == "c1 SubClassOf R some (c2 and c3)");
  CHECK(display(aio[1]) == "c2 DisjointWith c3");
  const auto& sos = template_of(PatternId::SOSINETO).schemata;
  CHECK(display(sos[2]) == "c1 SubClassOf R max 1 Thing");
  CHECK(display(template_of(PatternId::UEWIP).schemata[0]) == "c2 SubClassOf inverse R some c1");
}

TEST_CASE("pattern names and families") {
  for (PatternId id : kAllPatterns) CHECK(pattern_from_string(to_string(id)) == id);
  CHECK_FALSE(pattern_from_string("XYZ"));
  CHECK(family_of(PatternId::OILWPI) == Family::OIL);
  CHECK(family_of(PatternId::UEWI_1) == Family::UE);
  CHECK(family_of(PatternId::OOR) == Family::OO);
  CHECK(family_of(PatternId::SOSINETO) == Family::SOSINETO);
  CHECK(to_string(Family::OIL) == "OIL*");
  CHECK(family_from_string("UE*") == Family::UE);
  CHECK_FALSE(family_from_string("UE"));
}

TEST_CASE("every fixture contains its own pattern") {
  for (PatternId id : kAllPatterns) {
    CAPTURE(to_string(id));
    auto o = testing::pattern_fixture(lower(to_string(id)));
    auto found = detect(o, id);
    REQUIRE(found.size() == 1);
    CHECK(found[0].binding.missing.empty());
    CHECK(found[0].binding.matched.size() == template_of(id).arity());
  }
}

TEST_CASE("EID binding") {
  auto o = testing::pattern_fixture("eid");
  auto all = detect(o);
  REQUIRE(all.size() == 1);
  CHECK(all[0].id == PatternId::EID);
  const auto& s = all[0].binding.substitution.entities;
  CHECK(s.at("c1") == testing::cls("eid", "c1"));
  CHECK(s.at("c2") == testing::cls("eid", "c2"));
}

TEST_CASE("empty ontology has no instances") { CHECK(detect(Ontology{}).empty()); }

TEST_CASE("symmetric OIL bindings collapse") {
  auto o = omn(R"(
ObjectProperty: r
Class: A
    SubClassOf: r only B, r only C, r only D
Class: B
    DisjointWith: C, D
)");
  auto found = detect(o, PatternId::OIL);
  // {B,C} and {B,D}; each axiom set is reported once
  REQUIRE(found.size() == 2);
  CHECK(found[0].binding.substitution.entities.at("c2") == c("B"));
  CHECK(found[0].binding.substitution.entities.at("c3") == c("C"));
  CHECK(found[1].binding.substitution.entities.at("c3") == c("D"));
  CHECK(detected_sets(o, PatternId::OIL) == brute_force(o, template_of(PatternId::OIL)));
}

TEST_CASE("CSC requires three distinct classes") {
  auto o = omn(R"(
Class: A
    SubClassOf: B
Class: B
    SubClassOf: A
)");
  CHECK(detect(o, PatternId::CSC).empty());
}

TEST_CASE("detection is complete against brute-force enumeration") {
  int with_matches = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto o = random_pattern_soup(seed);
    REQUIRE(o.axioms().size() <= 10);
    for (PatternId id : kAllPatterns) {
      CAPTURE(seed);
      CAPTURE(to_string(id));
      auto expected = brute_force(o, template_of(id));
      auto got = detected_sets(o, id);
      CHECK(got == expected);
      if (!got.empty()) ++with_matches;
    }
  }
  CHECK(with_matches > 30);
}

TEST_CASE("detect output is deterministic") {
  auto o = random_pattern_soup(17);
  auto a = detect(o);
  auto b = detect(manchester::parse(manchester::serialize(o)));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].binding.substitution == b[i].binding.substitution);
  }
}

TEST_CASE("injection sites") {
  SUBCASE("UE with one axiom missing") {
    auto o = omn(R"(
ObjectProperty: R
Class: c1
    SubClassOf: R only c2
Class: c2
    DisjointWith: c3
)");
    auto sites = find_injection_sites(o, PatternId::UE, 1);
    REQUIRE(sites.size() == 1);
    REQUIRE(sites[0].missing.size() == 1);
    CHECK(display(sites[0].missing[0]) == "c1 SubClassOf R some c3");
  }
  SUBCASE("UE with both subclass axioms missing") {
    auto o = omn(R"(
ObjectProperty: R
Class: c1
Class: c2
    DisjointWith: c3
)");
    CHECK(find_injection_sites(o, PatternId::UE, 1).empty());
    auto sites = find_injection_sites(o, PatternId::UE, 2);
    REQUIRE_FALSE(sites.empty());
    bool found = false;
    for (const auto& s : sites) {
      if (s.missing.size() != 2) continue;
      std::vector<std::string> shown;
      for (const auto& ax : s.missing) shown.push_back(display(ax));
      if (shown == std::vector<std::string>{"c1 SubClassOf R only c2", "c1 SubClassOf R some c3"}) found = true;
    }
    CHECK(found);
  }
  SUBCASE("EID needs a disjointness to start from") {
    auto o = omn(R"(
Class: A
    SubClassOf: B
)");
    CHECK(find_injection_sites(o, PatternId::EID, 1).empty());
    CHECK_FALSE(find_injection_sites(o, PatternId::EID, 2).empty());
  }
  SUBCASE("complete instances are not sites") {
    auto o = testing::pattern_fixture("ue");
    for (const auto& s : find_injection_sites(o, PatternId::UE, 1)) {
      auto done = o.with_axioms(s.missing);
      CHECK(detect(done, PatternId::UE).size() > detect(o, PatternId::UE).size());
    }
  }
  SUBCASE("limit caps the enumeration") {
    auto o = omn(R"(
Class: A
Class: B
Class: C
Class: D
)");
    CHECK(find_injection_sites(o, PatternId::EID, 2, 3).size() == 3);
  }
}

TEST_CASE("inject completes the pattern") {
  auto o = omn(R"(
ObjectProperty: R
Class: c1
    SubClassOf: R only c2
Class: c2
    DisjointWith: c3
)");
  auto [out, report] = inject(o, PatternId::UE, 42);
  CHECK(report.injected_axioms.size() == 1);
  CHECK(report.pattern == PatternId::UE);
  CHECK(report.injected_axioms == report.binding.missing);
  CHECK(contains_pattern(out, PatternId::UE));
  // original axioms are kept in place
  REQUIRE(out.axioms().size() == o.axioms().size() + 1);
  for (std::size_t i = 0; i < o.axioms().size(); ++i) CHECK(out.axioms()[i] == o.axioms()[i]);
  auto [again, report2] = inject(o, PatternId::UE, 42);
  CHECK(again.axioms() == out.axioms());
  CHECK_THROWS_AS(inject(Ontology{}, PatternId::UE, 1), NoSite);
}

TEST_CASE("CSC closes an existing chain with one axiom") {
  auto o = omn(R"(
Class: A
    SubClassOf: B
Class: B
    SubClassOf: C
)");
  auto [out, report] = inject(o, PatternId::CSC, 3);
  REQUIRE(report.injected_axioms.size() == 1);
  CHECK(display(report.injected_axioms[0]) == "C SubClassOf A");
}

TEST_CASE("injection duality and minimality on random ontologies") {
  int injected = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto o = random_pattern_soup(seed + 1000);
    for (PatternId id : kAllPatterns) {
      if (find_injection_sites(o, id, 2, 1).empty()) continue;
      auto [out, report] = inject(o, id, seed);
      CAPTURE(seed);
      CAPTURE(to_string(id));
      CHECK(report.injected_axioms.size() >= 1);
      CHECK(report.injected_axioms.size() <= 2);
      CHECK(contains_pattern(out, id));
      // the new instance uses the injected axioms, so it is absent from o
      std::set<Axiom> instance;
      for (const auto& ax : report.binding.matched) instance.insert(canonical(ax));
      for (const auto& ax : report.injected_axioms) instance.insert(canonical(ax));
      CHECK(detected_sets(out, id).contains(instance));
      CHECK_FALSE(detected_sets(o, id).contains(instance));
      ++injected;
    }
  }
  CHECK(injected > 200);
}

TEST_CASE("semantic status table agrees with the oracle") {
  for (PatternId id : kAllPatterns) {
    CAPTURE(to_string(id));
    auto o = testing::pattern_fixture(lower(to_string(id)));
    auto oracle_kind = oracle::oracle_status(o).kind();
    CHECK(oracle_kind == expected_status(id));
    CHECK(tableau::classify_status(o).kind() == expected_status(id));
    CHECK(is_semantic(id) == (expected_status(id) != OntologyStatus::Kind::ConsistentCoherent));
  }
}
