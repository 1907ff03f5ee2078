#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ontocc/manchester.hpp"

using namespace ontocc;
using manchester::ParseError;

namespace {

std::string ns(const std::string& local) { return std::string(manchester::kDefaultNamespace) + local; }
EntityName c(const std::string& n) { return class_name(ns(n)); }
EntityName p(const std::string& n) { return property_name(ns(n)); }
EntityName ind(const std::string& n) { return individual_name(ns(n)); }

std::vector<std::string> fixture_texts() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(testing::fixture_dir())) {
    if (entry.path().extension() != ".omn") continue;
    std::ifstream in(entry.path());
    out.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClassExpression random_expr(std::mt19937_64& rng, int depth) {
  auto leaf = [&] {
    switch (rng() % 8) {
      case 0: return ClassExpression::top();
      case 1: return ClassExpression::bottom();
      default: return ClassExpression::named(c("C" + std::to_string(rng() % 5)));
    }
  };
  if (depth == 0) return leaf();
  RoleExpression r(p("r" + std::to_string(rng() % 3)), rng() % 3 == 0);
  switch (rng() % 8) {
    case 0: return ClassExpression::negation(random_expr(rng, depth - 1));
    case 1: return ClassExpression::conjunction({random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 2:
      return ClassExpression::disjunction(
          {random_expr(rng, depth - 1), random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 3: return ClassExpression::some(r, random_expr(rng, depth - 1));
    case 4: return ClassExpression::only(r, random_expr(rng, depth - 1));
    case 5: return ClassExpression::at_most(static_cast<std::uint32_t>(rng() % 3), r, random_expr(rng, depth - 1));
    default: return leaf();
  }
}

Ontology random_ontology(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto C = [&] { return c("C" + std::to_string(rng() % 5)); };
  auto P = [&] { return p("r" + std::to_string(rng() % 3)); };
  auto I = [&] { return ind("i" + std::to_string(rng() % 3)); };
  std::vector<Axiom> axs;
  int n = static_cast<int>(rng() % 20);
  for (int k = 0; k < n; ++k) {
    switch (rng() % 10) {
      case 0: axs.push_back(Axiom::subclass_of(ClassExpression::named(C()), random_expr(rng, 3))); break;
      case 1: axs.push_back(Axiom::equivalent(ClassExpression::named(C()), random_expr(rng, 2))); break;
      case 2: {
        auto a = C(), b = C();
        if (a != b) axs.push_back(Axiom::disjoint(a, b));
        break;
      }
      case 3: axs.push_back(Axiom::subproperty_of(RoleExpression(P(), rng() % 2), RoleExpression(P(), rng() % 2))); break;
      case 4: axs.push_back(Axiom::inverse_properties(P(), P())); break;
      case 5: axs.push_back(Axiom::domain(P(), C())); break;
      case 6: axs.push_back(Axiom::range(P(), C())); break;
      case 7: axs.push_back(Axiom::class_assertion(I(), random_expr(rng, 2))); break;
      case 8: axs.push_back(Axiom::property_assertion(P(), I(), I())); break;
      default: {
        switch (rng() % 3) {
          case 0: axs.push_back(Axiom::declaration(C())); break;
          case 1: axs.push_back(Axiom::declaration(P())); break;
          default: axs.push_back(Axiom::declaration(I())); break;
        }
      }
    }
  }
  return Ontology("http://example.org/random/" + std::to_string(seed), std::move(axs));
}

std::pair<int, int> position_of(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < offset; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

TEST_CASE("frames from the introduction") {
  auto decl = manchester::parse("Class: Professor");
  REQUIRE(decl.axioms().size() == 1);
  CHECK(decl.axioms()[0] == Axiom::declaration(c("Professor")));

  auto typed = manchester::parse("Individual: Alice\n Types: Student");
  REQUIRE(typed.axioms().size() == 1);
  CHECK(typed.axioms()[0] == Axiom::class_assertion(ind("Alice"), ClassExpression::named(c("Student"))));
}

TEST_CASE("unbalanced parenthesis") {
  try {
    manchester::parse("Class: C1\n SubClassOf: r only (C2 and C3");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 20);
    CHECK(e.expected().find("')'") != std::string::npos);
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(manchester::parse("Class: A\n SubClasOf: B"), ParseError);
  CHECK_THROWS_AS(manchester::parse("Class: A\n SubClassOf: x:B"), ParseError);
  CHECK_THROWS_AS(manchester::parse("Class: A\n DisjointWith: A"), ParseError);
  CHECK_THROWS_AS(manchester::parse("Class: A\n SubClassOf: r max B"), ParseError);
  CHECK_THROWS_AS(manchester::parse("Bogus: A"), ParseError);
  CHECK_THROWS_AS(manchester::parse("AnnotationProperty: label"), ParseError);
  std::size_t dropped = 0;
  manchester::ParseOptions lenient{true, &dropped};
  auto o = manchester::parse("AnnotationProperty: label\nClass: A\n Annotations: label \"x\"\n SubClassOf: B", lenient);
  CHECK(o.axioms().size() == 1);
  CHECK(dropped == 2);
}

TEST_CASE("messages are reproducible") {
  std::string bad = "Class: A\n SubClassOf: (B or";
  std::string first, second;
  try { manchester::parse(bad); } catch (const ParseError& e) { first = e.what(); }
  try { manchester::parse(bad); } catch (const ParseError& e) { second = e.what(); }
  CHECK_FALSE(first.empty());
  CHECK(first == second);
}

TEST_CASE("prefixes and comments") {
  auto o = manchester::parse(R"(
Prefix: : <http://a.org/x#>
Prefix: b: <http://b.org/y#>
# a comment
Class: A   # trailing
    SubClassOf: b:A
)");
  REQUIRE(o.axioms().size() == 1);
  const auto& s = o.axioms()[0].as<axioms::SubClassOf>();
  CHECK(s.sub.name().iri() == "http://a.org/x#A");
  CHECK(s.sup.name().iri() == "http://b.org/y#A");
  CHECK(s.sub.name() != s.sup.name());
}

TEST_CASE("serializer layout") {
  CHECK(manchester::serialize(Ontology{}).find("Class:") == std::string::npos);
  CHECK(manchester::parse(manchester::serialize(Ontology{})).empty());
  Ontology d("", {Axiom::disjoint(c("c2"), c("c3"))});
  auto text = manchester::serialize(d);
  CHECK(text.find("Class: c2\n    DisjointWith: c3\n") != std::string::npos);
  Ontology sos("", {Axiom::subclass_of(ClassExpression::named(c("c1")),
                                       ClassExpression::at_most(1, RoleExpression(p("R")), ClassExpression::top()))});
  CHECK(manchester::serialize(sos).find("SubClassOf: R max 1 owl:Thing") != std::string::npos);
}

TEST_CASE("round trip on fixtures") {
  auto texts = fixture_texts();
  REQUIRE(texts.size() >= 15);
  for (const auto& text : texts) {
    auto o = manchester::parse(text);
    auto again = manchester::parse(manchester::serialize(o));
    CHECK(again.axioms() == o.axioms());
    CHECK(again.id() == o.id());
    CHECK(manchester::serialize(again) == manchester::serialize(o));
  }
}

TEST_CASE("round trip on random ontologies") {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto o = random_ontology(seed);
    auto text = manchester::serialize(o);
    CAPTURE(text);
    auto again = manchester::parse(text);
    REQUIRE(again.axioms() == o.axioms());
  }
}

TEST_CASE("a single typo is reported at or after its position") {
  auto texts = fixture_texts();
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    std::string text = texts[rng() % texts.size()];
    std::size_t at = rng() % text.size();
    if (text[at] == '#' || text[at] == '\n') continue;
    // skip positions inside comments, where anything is accepted
    auto line_start = text.rfind('\n', at);
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    if (text.find('#', line_start) < at && text.find('<', line_start) > at) continue;
    std::string mutated = text;
    mutated[at] = (rng() % 2) ? '$' : '(';
    try {
      manchester::parse(mutated);
    } catch (const ParseError& e) {
      auto [line, col] = position_of(mutated, at);
      CAPTURE(mutated);
      CHECK((e.line() > line || (e.line() == line && e.column() >= col)));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("fuzzed inputs yield an ontology or a parse error") {
  auto texts = fixture_texts();
  const std::string alphabet = "()<>:,# \n\tabcABC019_-.\"$@\x80\xff";
  const std::vector<std::string> words = {"some", "only",  "and",     "or",   "not",  "max",         "inverse",
                                          "Class:", "Types:", "Facts:", "1",   "Thing", "SubClassOf:", "Prefix:"};
  std::mt19937_64 rng(2024);
  int parsed = 0, rejected = 0;
  for (int k = 0; k < 10000; ++k) {
    std::string text = texts[rng() % texts.size()];
    int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      std::size_t at = text.empty() ? 0 : rng() % text.size();
      switch (rng() % 5) {
        case 0: if (!text.empty()) text.erase(at, 1 + rng() % 8); break;
        case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
        case 2: if (!text.empty()) text[at] = alphabet[rng() % alphabet.size()]; break;
        case 3: text.insert(at, " " + words[rng() % words.size()] + " "); break;
        default: {
          std::size_t len = std::min<std::size_t>(text.size() - std::min(at, text.size()), 1 + rng() % 30);
          text.insert(at, text.substr(at, len));
        }
      }
    }
    try {
      auto o = manchester::parse(text);
      ++parsed;
      // whatever parses must survive its own serialization
      auto again = manchester::parse(manchester::serialize(o));
      CHECK(again.axioms() == o.axioms());
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 10000);
  CHECK(rejected > 0);
  CHECK(parsed > 0);
}

TEST_CASE("deep nesting is rejected rather than overflowing") {
  std::string text = "Class: A\n SubClassOf: ";
  for (int k = 0; k < 100000; ++k) text += "(";
  text += "B";
  CHECK_THROWS_AS(manchester::parse(text), ParseError);
  std::string negs = "Class: A\n SubClassOf: ";
  for (int k = 0; k < 100000; ++k) negs += "not ";
  negs += "B";
  CHECK_THROWS_AS(manchester::parse(negs), ParseError);
}
