#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ontocc/manchester.hpp"
#include "ontocc/oracle.hpp"
#include "ontocc/tableau.hpp"

using namespace ontocc;

namespace {

EntityName c(const std::string& local) { return class_name(std::string(manchester::kDefaultNamespace) + local); }
EntityName p(const std::string& local) {
  return property_name(std::string(manchester::kDefaultNamespace) + local);
}
EntityName ind(const std::string& local) {
  return individual_name(std::string(manchester::kDefaultNamespace) + local);
}

// Plain enumeration of every interpretation over one or two elements. Slow,
// but shares no code with the grounded search.
bool brute_force_has_model(const Ontology& o, int max_domain) {
  auto classes = o.classes();
  auto props = o.properties();
  auto inds = o.individuals();
  for (int n = 1; n <= max_domain; ++n) {
    const int class_bits = static_cast<int>(classes.size()) * n;
    const int prop_bits = static_cast<int>(props.size()) * n * n;
    std::uint64_t ind_combos = 1;
    for (std::size_t i = 0; i < inds.size(); ++i) ind_combos *= n;
    for (std::uint64_t cb = 0; cb < (1ULL << class_bits); ++cb)
      for (std::uint64_t pb = 0; pb < (1ULL << prop_bits); ++pb)
        for (std::uint64_t ib = 0; ib < ind_combos; ++ib) {
          oracle::Interpretation m;
          m.domain_size = n;
          for (std::size_t k = 0; k < classes.size(); ++k) {
            auto& ext = m.classes[classes[k]];
            for (int x = 0; x < n; ++x)
              if (cb >> (k * n + x) & 1) ext.insert(x);
          }
          for (std::size_t k = 0; k < props.size(); ++k) {
            auto& ext = m.properties[props[k]];
            for (int x = 0; x < n; ++x)
              for (int y = 0; y < n; ++y)
                if (pb >> (k * n * n + x * n + y) & 1) ext.emplace(x, y);
          }
          std::uint64_t rest = ib;
          for (const auto& i : inds) {
            m.individuals[i] = static_cast<int>(rest % n);
            rest /= n;
          }
          if (oracle::is_model(m, o)) return true;
        }
  }
  return false;
}

ClassExpression random_expr(std::mt19937_64& rng, const std::vector<EntityName>& cs, const EntityName& r, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 1);
  auto leaf = [&] { return ClassExpression::named(cs[rng() % cs.size()]); };
  switch (pick(rng)) {
    case 0: return leaf();
    case 1: return ClassExpression::negation(leaf());
    case 2: return ClassExpression::conjunction({random_expr(rng, cs, r, depth - 1), leaf()});
    case 3: return ClassExpression::disjunction({random_expr(rng, cs, r, depth - 1), leaf()});
    case 4: return ClassExpression::some(RoleExpression(r, rng() % 2), random_expr(rng, cs, r, depth - 1));
    case 5: return ClassExpression::only(RoleExpression(r, rng() % 2), random_expr(rng, cs, r, depth - 1));
    case 6: return ClassExpression::at_most(rng() % 2, RoleExpression(r), ClassExpression::top());
    default: return ClassExpression::negation(random_expr(rng, cs, r, depth - 1));
  }
}

// Small random ontologies in the tableau fragment over <= 6 symbols.
Ontology random_small(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<EntityName> cs{c("A"), c("B"), c("C")};
  EntityName r = p("r");
  std::vector<EntityName> is{ind("a"), ind("b")};
  std::vector<Axiom> axs;
  int n = 1 + static_cast<int>(rng() % 4);
  for (int k = 0; k < n; ++k) {
    switch (rng() % 6) {
      case 0:
      case 1:
        axs.push_back(Axiom::subclass_of(ClassExpression::named(cs[rng() % 3]), random_expr(rng, cs, r, 2)));
        break;
      case 2: {
        auto x = cs[rng() % 3], y = cs[rng() % 3];
        if (x != y) axs.push_back(Axiom::disjoint(x, y));
        break;
      }
      case 3:
        axs.push_back(Axiom::class_assertion(is[rng() % 2], random_expr(rng, cs, r, 1)));
        break;
      case 4:
        axs.push_back(Axiom::property_assertion(r, is[rng() % 2], is[rng() % 2]));
        break;
      default:
        axs.push_back(rng() % 2 ? Axiom::domain(r, cs[rng() % 3]) : Axiom::range(r, cs[rng() % 3]));
        break;
    }
  }
  return Ontology("random", std::move(axs));
}

}  // namespace

TEST_CASE("empty ontology has a one-element model with empty extensions") {
  auto m = oracle::finite_model_search(Ontology{}, 1);
  REQUIRE(m);
  CHECK(m->domain_size == 1);
  CHECK(m->classes.empty());
}

TEST_CASE("EID with an instance of c1 has no small model") {
  auto o = testing::pattern_fixture("eid");
  Axiom a = Axiom::class_assertion(ind("a"), ClassExpression::named(testing::cls("eid", "c1")));
  CHECK_FALSE(oracle::finite_model_search(o.with_axioms(std::span<const Axiom>(&a, 1)), 3));
}

TEST_CASE("UE without assertions has a model where c1 is empty") {
  auto o = testing::pattern_fixture("ue");
  auto m = oracle::finite_model_search(o, 3);
  REQUIRE(m);
  CHECK(oracle::extension(*m, ClassExpression::named(testing::cls("ue", "c1"))).empty());
}

TEST_CASE("direct evaluator") {
  oracle::Interpretation m;
  m.domain_size = 3;
  m.classes[c("A")] = {0, 1};
  m.classes[c("B")] = {1};
  m.properties[p("r")] = {{0, 1}, {0, 2}, {2, 2}};
  auto A = ClassExpression::named(c("A"));
  auto B = ClassExpression::named(c("B"));
  RoleExpression r(p("r"));
  CHECK(oracle::extension(m, ClassExpression::some(r, B)) == std::set<int>{0});
  CHECK(oracle::extension(m, ClassExpression::only(r, B)) == std::set<int>{1});
  CHECK(oracle::extension(m, ClassExpression::at_most(1, r, ClassExpression::top())) == std::set<int>{1, 2});
  CHECK(oracle::extension(m, ClassExpression::some(r.inverse(), A)) == std::set<int>{1, 2});
  CHECK(oracle::extension(m, ClassExpression::negation(A)) == std::set<int>{2});
  CHECK(oracle::satisfies(m, Axiom::subclass_of(B, A)));
  CHECK_FALSE(oracle::satisfies(m, Axiom::disjoint(c("A"), c("B"))));
  CHECK_FALSE(oracle::satisfies(m, Axiom::domain(p("r"), c("A"))));
}

TEST_CASE("budget is enforced") {
  auto o = testing::pattern_fixture("sosineto");
  oracle::SearchOptions tiny;
  tiny.budget = 0;
  tiny.max_domain = 3;
  Axiom a = Axiom::class_assertion(ind("x"), ClassExpression::named(testing::cls("sosineto", "c1")));
  CHECK_THROWS_AS(oracle::finite_model_search(o.with_axioms(std::span<const Axiom>(&a, 1)), tiny),
                  oracle::BudgetExceeded);
  CHECK_THROWS_AS(oracle::finite_model_search(o, 5), std::invalid_argument);
}

TEST_CASE("grounded search agrees with plain enumeration") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 120; ++seed) {
    auto o = random_small(seed);
    if (o.classes().size() * 2 + o.properties().size() * 4 > 14) continue;
    CAPTURE(manchester::serialize(o));
    auto m = oracle::finite_model_search(o, 2);
    CHECK(m.has_value() == brute_force_has_model(o, 2));
    if (m) CHECK(oracle::is_model(*m, o));
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("oracle agrees with the tableau on small random ontologies") {
  for (std::uint64_t seed = 1000; seed < 1300; ++seed) {
    auto o = random_small(seed);
    CAPTURE(manchester::serialize(o));
    try {
      tableau::check_fragment(o);
    } catch (const tableau::UnsupportedAxiom&) {
      continue;
    }
    auto v = tableau::check_consistency(o);
    auto m = oracle::finite_model_search(o, 3);
    if (v.consistent()) {
      // the fragment has the finite model property but small models are not
      // guaranteed; every model found must still be genuine
      if (m) CHECK(oracle::is_model(*m, o));
    } else {
      CHECK_FALSE(m);
      CHECK(tableau::replay(o, v.clash_trace));
    }
    if (m) CHECK(v.consistent());
  }
}

TEST_CASE("nnf preserves extensions in oracle models") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<EntityName> cs{c("A"), c("B"), c("C")};
    auto e = random_expr(rng, cs, p("r"), 3);
    Ontology o("probe", {Axiom::class_assertion(ind("a"), e)});
    auto m = oracle::finite_model_search(o, 3);
    if (!m) continue;
    CHECK(oracle::extension(*m, e) == oracle::extension(*m, nnf(e)));
    CHECK(nnf(nnf(e)) == nnf(e));
  }
}

TEST_CASE("oracle status matches the tableau on every pattern fixture") {
  for (const char* stem : {"aio", "eid", "oil", "oilwi", "oilwpi", "ue", "uewi_1", "uewi_2", "uewpi", "uewip",
                           "sosineto", "ood", "oor", "csc"}) {
    CAPTURE(stem);
    auto o = testing::pattern_fixture(stem);
    CHECK(oracle::oracle_status(o).kind() == tableau::classify_status(o).kind());
    CHECK(oracle::oracle_status(o).unsatisfiable() == tableau::classify_status(o).unsatisfiable());
  }
}
