#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "ontocc/corpus.hpp"
#include "ontocc/seed.hpp"
#include "ontocc/tableau.hpp"

namespace ontocc::corpus {

void SynthConfig::validate() const {
  auto check = [](const Range& r, const char* what, std::size_t lo) {
    if (r.min < lo || r.max < r.min) throw std::invalid_argument(std::string("bad ") + what + " range");
  };
  check(classes, "classes", 2);
  check(properties, "properties", 1);
  check(individuals, "individuals", 1);
  if (disjointness_density < 0 || disjointness_density > 1)
    throw std::invalid_argument("disjointness density must lie in [0, 1]");
  if (max_retries == 0) throw std::invalid_argument("max_retries must be positive");
}

namespace {

const char* kSyllables[] = {"ka", "lo", "mi", "ren", "to", "sa", "vel", "dor", "qui", "na", "bri", "tex",
                            "mo", "fa", "zul", "pe", "ran", "go", "li", "ster", "cu", "ho", "ven", "di"};

class Namer {
 public:
  explicit Namer(std::mt19937_64& rng) : rng_(rng) {}
  // CamelCase pseudo-word, unique within this namer
  std::string next(bool capital, const std::string& prefix = "") {
    for (;;) {
      std::string w;
      std::size_t n = 2 + rng_() % 2;
      for (std::size_t i = 0; i < n; ++i) w += kSyllables[rng_() % std::size(kSyllables)];
      if (capital || !prefix.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      w = prefix + w;
      if (used_.insert(w).second) return w;
    }
  }

 private:
  std::mt19937_64& rng_;
  std::set<std::string> used_;
};

struct Draft {
  std::mt19937_64 rng;
  std::string ns;
  std::vector<Axiom> axioms;
  std::vector<EntityName> classes;
  std::vector<std::size_t> parent;  // npos for roots
  std::vector<std::vector<std::size_t>> children;

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
  bool coin(double p) { return unit_interval(rng()) < p; }

  std::vector<std::size_t> subtree(std::size_t c) const {
    std::vector<std::size_t> out{c};
    for (std::size_t i = 0; i < out.size(); ++i)
      out.insert(out.end(), children[out[i]].begin(), children[out[i]].end());
    return out;
  }
  std::vector<std::size_t> ancestors(std::size_t c) const {
    std::vector<std::size_t> out{c};
    while (parent[out.back()] != std::string::npos) out.push_back(parent[out.back()]);
    return out;
  }
  std::size_t pick_from(const std::vector<std::size_t>& v) { return v[pick(v.size())]; }
};

constexpr std::size_t kNone = std::string::npos;

// A subclass forest with disjoint siblings, properties with domain and range
// (some as sub-properties or inverses), existential and universal
// restrictions that agree with those ranges, occasional at-most-one
// restrictions and typed individuals linked along property ranges.
Ontology draw(const SynthConfig& cfg, std::size_t index, std::size_t attempt) {
  char id[64];
  std::snprintf(id, sizeof id, "synth%04zu", index);
  Draft d{std::mt19937_64(derive_seed(cfg.seed, std::string(id) + "/" + std::to_string(attempt))),
          std::string("http://example.org/ontocc/") + id + "#", {}, {}, {}, {}};
  Namer namer(d.rng);
  auto between = [&](const Range& r) { return r.min + d.pick(r.max - r.min + 1); };

  const std::size_t n = between(cfg.classes);
  for (std::size_t i = 0; i < n; ++i) {
    d.classes.push_back(class_name(d.ns + namer.next(true)));
    d.axioms.push_back(Axiom::declaration(d.classes.back()));
    d.parent.push_back(i > 0 && d.coin(0.85) ? d.pick(i) : kNone);
    d.children.emplace_back();
    if (d.parent[i] != kNone) {
      d.children[d.parent[i]].push_back(i);
      d.axioms.push_back(Axiom::subclass_of(ClassExpression::named(d.classes[i]),
                                            ClassExpression::named(d.classes[d.parent[i]])));
    }
  }

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i)
    if (d.parent[i] == kNone) roots.push_back(i);
  auto disjoin_siblings = [&](const std::vector<std::size_t>& group) {
    for (std::size_t a = 0; a < group.size() && a < 6; ++a)
      for (std::size_t b = a + 1; b < group.size() && b < 6; ++b)
        if (d.coin(cfg.disjointness_density)) d.axioms.push_back(Axiom::disjoint(d.classes[group[a]], d.classes[group[b]]));
  };
  disjoin_siblings(roots);
  for (const auto& ch : d.children) disjoin_siblings(ch);

  struct Prop {
    EntityName name;
    std::size_t domain, range;
  };
  std::vector<Prop> props;
  const std::size_t np = between(cfg.properties);
  for (std::size_t i = 0; i < np; ++i) {
    EntityName p = property_name(d.ns + namer.next(false, "has"));
    d.axioms.push_back(Axiom::declaration(p));
    if (i > 0 && d.coin(0.25)) {
      // a sub-property inherits its parent's domain and range
      const Prop& sup = props[d.pick(props.size())];
      d.axioms.push_back(Axiom::subproperty_of(RoleExpression(p), RoleExpression(sup.name)));
      props.push_back({p, sup.domain, sup.range});
    } else {
      Prop pr{p, d.pick(n), d.pick(n)};
      d.axioms.push_back(Axiom::domain(p, d.classes[pr.domain]));
      d.axioms.push_back(Axiom::range(p, d.classes[pr.range]));
      props.push_back(pr);
    }
  }
  for (std::size_t i = 0, m = props.size(); i < m; ++i) {
    if (!d.coin(0.2)) continue;
    EntityName q = property_name(d.ns + namer.next(false, "is"));
    d.axioms.push_back(Axiom::declaration(q));
    d.axioms.push_back(Axiom::inverse_properties(q, props[i].name));
  }

  std::set<std::pair<std::size_t, std::size_t>> has_some;  // (class, property)
  for (std::size_t i = 0; i < props.size(); ++i) {
    const Prop& p = props[i];
    RoleExpression r(p.name);
    for (int k = 0; k < 2; ++k) {
      if (!d.coin(0.6)) continue;
      std::size_t c = d.pick_from(d.subtree(p.domain));
      if (!has_some.insert({c, i}).second) continue;
      std::size_t e = d.pick_from(d.subtree(p.range));
      d.axioms.push_back(Axiom::subclass_of(ClassExpression::named(d.classes[c]),
                                            ClassExpression::some(r, ClassExpression::named(d.classes[e]))));
      if (d.coin(0.15))
        d.axioms.push_back(Axiom::subclass_of(ClassExpression::named(d.classes[c]),
                                              ClassExpression::at_most(1, r, ClassExpression::top())));
    }
    if (d.coin(0.4)) {
      std::size_t c = d.pick_from(d.subtree(p.domain));
      std::size_t up = d.pick_from(d.ancestors(p.range));
      d.axioms.push_back(Axiom::subclass_of(ClassExpression::named(d.classes[c]),
                                            ClassExpression::only(r, ClassExpression::named(d.classes[up]))));
    }
  }

  const std::size_t ni = between(cfg.individuals);
  std::vector<EntityName> inds;
  std::vector<std::size_t> type;
  for (std::size_t i = 0; i < ni; ++i) {
    inds.push_back(individual_name(d.ns + namer.next(false, "the")));
    type.push_back(d.pick(n));
    d.axioms.push_back(Axiom::declaration(inds.back()));
    d.axioms.push_back(Axiom::class_assertion(inds.back(), ClassExpression::named(d.classes[type.back()])));
  }
  for (std::size_t k = 0; k < ni; ++k) {
    const Prop& p = props[d.pick(props.size())];
    auto dom = d.subtree(p.domain), rng = d.subtree(p.range);
    std::vector<std::size_t> subjects, objects;
    for (std::size_t i = 0; i < ni; ++i) {
      if (std::find(dom.begin(), dom.end(), type[i]) != dom.end()) subjects.push_back(i);
      if (std::find(rng.begin(), rng.end(), type[i]) != rng.end()) objects.push_back(i);
    }
    if (subjects.empty() || objects.empty()) continue;
    d.axioms.push_back(Axiom::property_assertion(p.name, inds[d.pick_from(subjects)], inds[d.pick_from(objects)]));
  }

  // drop exact duplicates, keep first occurrence order
  std::set<Axiom> seen;
  std::vector<Axiom> unique;
  for (auto& ax : d.axioms)
    if (seen.insert(ax).second) unique.push_back(std::move(ax));
  return Ontology(std::string("http://example.org/ontocc/") + id, std::move(unique), {{"", d.ns}});
}

}  // namespace

Ontology generate_one(const SynthConfig& cfg, std::size_t index) {
  cfg.validate();
  for (std::size_t attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Ontology o = draw(cfg, index, attempt);
    try {
      if (tableau::classify_status(o).is_consistent_coherent()) return o;
    } catch (const tableau::ResourceLimit&) {
      // too hard to certify; draw again
    }
  }
  throw GenerationBudgetExceeded("ontology " + std::to_string(index) + " not consistent and coherent after " +
                                 std::to_string(cfg.max_retries) + " attempts");
}

std::vector<Ontology> generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<Ontology> out;
  out.reserve(cfg.n_ontologies);
  for (std::size_t i = 0; i < cfg.n_ontologies; ++i) out.push_back(generate_one(cfg, i));
  return out;
}

}  // namespace ontocc::corpus
