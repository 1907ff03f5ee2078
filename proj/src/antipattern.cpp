#include "ontocc/antipattern.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace ontocc::antipattern {

namespace {

constexpr std::array<std::string_view, 14> kPatternNames = {
    "AIO", "EID", "OIL", "OILWI", "OILWPI", "UE", "UEWI_1", "UEWI_2", "UEWPI", "UEWIP", "SOSINETO", "OOD", "OOR", "CSC",
};

constexpr std::array<std::string_view, 7> kFamilyNames = {"AIO", "EID", "OIL*", "UE*", "SOSINETO", "OO*", "CSC"};

}  // namespace

std::string_view to_string(PatternId id) { return kPatternNames[static_cast<std::size_t>(id)]; }

std::optional<PatternId> pattern_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kPatternNames.size(); ++i)
    if (kPatternNames[i] == name) return static_cast<PatternId>(i);
  return std::nullopt;
}

std::string_view to_string(Family family) { return kFamilyNames[static_cast<std::size_t>(family)]; }

std::optional<Family> family_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  return std::nullopt;
}

Family family_of(PatternId id) {
  switch (id) {
    case PatternId::AIO: return Family::AIO;
    case PatternId::EID: return Family::EID;
    case PatternId::OIL:
    case PatternId::OILWI:
    case PatternId::OILWPI: return Family::OIL;
    case PatternId::UE:
    case PatternId::UEWI_1:
    case PatternId::UEWI_2:
    case PatternId::UEWPI:
    case PatternId::UEWIP: return Family::UE;
    case PatternId::SOSINETO: return Family::SOSINETO;
    case PatternId::OOD:
    case PatternId::OOR: return Family::OO;
    case PatternId::CSC: return Family::CSC;
  }
  return Family::CSC;
}

OntologyStatus::Kind expected_status(PatternId id) {
  using K = OntologyStatus::Kind;
  switch (id) {
    case PatternId::OOD:
    case PatternId::OOR: return K::Inconsistent;
    case PatternId::OIL:
    case PatternId::OILWI:
    case PatternId::OILWPI:
    case PatternId::UEWI_1:
    case PatternId::CSC: return K::ConsistentCoherent;
    default: return K::Incoherent;
  }
}

bool is_semantic(PatternId id) { return expected_status(id) != OntologyStatus::Kind::ConsistentCoherent; }

bool is_variable(const EntityName& e) { return e.iri().starts_with(kVariableNamespace); }

EntityName variable(EntityKind kind, std::string_view name) {
  return EntityName(kind, std::string(kVariableNamespace) + std::string(name));
}

namespace {

ClassExpression C(std::string_view name) { return ClassExpression::named(variable(EntityKind::Class, name)); }
EntityName N(std::string_view name) { return variable(EntityKind::Class, name); }
RoleExpression R(std::string_view name, bool inverse = false) {
  return RoleExpression(variable(EntityKind::ObjectProperty, name), inverse);
}
EntityName P(std::string_view name) { return variable(EntityKind::ObjectProperty, name); }
EntityName I(std::string_view name) { return variable(EntityKind::Individual, name); }

Axiom sub(ClassExpression a, ClassExpression b) { return Axiom::subclass_of(std::move(a), std::move(b)); }
ClassExpression some(RoleExpression r, ClassExpression f) { return ClassExpression::some(std::move(r), std::move(f)); }
ClassExpression only(RoleExpression r, ClassExpression f) { return ClassExpression::only(std::move(r), std::move(f)); }
Axiom disj(std::string_view a, std::string_view b) { return Axiom::disjoint(N(a), N(b)); }

void collect_distinct(const Axiom& ax, std::vector<std::pair<std::string, std::string>>& out) {
  auto add = [&](const std::string& a, const std::string& b) {
    std::pair<std::string, std::string> p = a < b ? std::pair{a, b} : std::pair{b, a};
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  if (auto d = ax.get_if<axioms::DisjointClasses>()) add(d->first.local(), d->second.local());
  if (auto s = ax.get_if<axioms::SubClassOf>(); s && s->sub.is_named() && s->sup.is_named())
    add(s->sub.name().local(), s->sup.name().local());
  if (auto e = ax.get_if<axioms::EquivalentClasses>(); e && e->first.is_named() && e->second.is_named())
    add(e->first.name().local(), e->second.name().local());
  if (auto s = ax.get_if<axioms::SubPropertyOf>()) add(s->sub.property().local(), s->sup.property().local());
}

PatternTemplate make(PatternId id, std::vector<Axiom> schemata) {
  PatternTemplate t{id, std::move(schemata), {}};
  for (const auto& ax : t.schemata) collect_distinct(ax, t.distinct);
  return t;
}

std::vector<PatternTemplate> build_templates() {
  using enum PatternId;
  std::vector<PatternTemplate> t;
  t.push_back(make(AIO, {sub(C("c1"), some(R("R"), ClassExpression::conjunction({C("c2"), C("c3")}))),
                         disj("c2", "c3")}));
  t.push_back(make(EID, {Axiom::equivalent(C("c1"), C("c2")), disj("c1", "c2")}));
  t.push_back(make(OIL, {sub(C("c1"), only(R("R"), C("c2"))), sub(C("c1"), only(R("R"), C("c3"))),
                         disj("c2", "c3")}));
  t.push_back(make(OILWI, {sub(C("c1"), only(R("R"), C("c3"))), sub(C("c2"), only(R("R"), C("c4"))),
                           sub(C("c1"), C("c2")), disj("c3", "c4")}));
  t.push_back(make(OILWPI, {sub(C("c1"), only(R("R2"), C("c3"))), sub(C("c1"), only(R("R1"), C("c2"))),
                            Axiom::subproperty_of(R("R1"), R("R2")), disj("c2", "c3")}));
  t.push_back(make(UE, {sub(C("c1"), only(R("R"), C("c2"))), sub(C("c1"), some(R("R"), C("c3"))),
                        disj("c2", "c3")}));
  t.push_back(make(UEWI_1, {sub(C("c3"), only(R("R"), C("c4"))), sub(C("c1"), some(R("R"), C("c3"))),
                            sub(C("c1"), C("c2")), disj("c3", "c4")}));
  t.push_back(make(UEWI_2, {sub(C("c2"), some(R("R"), C("c4"))), sub(C("c1"), only(R("R"), C("c3"))),
                            sub(C("c1"), C("c2")), disj("c3", "c4")}));
  t.push_back(make(UEWPI, {sub(C("c1"), only(R("R2"), C("c3"))), sub(C("c1"), some(R("R1"), C("c2"))),
                           Axiom::subproperty_of(R("R1"), R("R2")), disj("c2", "c3")}));
  t.push_back(make(UEWIP, {sub(C("c2"), some(R("R", true), C("c1"))), sub(C("c1"), only(R("R"), C("c3"))),
                           disj("c2", "c3")}));
  t.push_back(make(SOSINETO, {sub(C("c1"), some(R("R"), C("c2"))), sub(C("c1"), some(R("R"), C("c3"))),
                              sub(C("c1"), ClassExpression::at_most(1, R("R"), ClassExpression::top())),
                              disj("c2", "c3")}));
  t.push_back(make(OOD, {Axiom::domain(P("p"), N("c1")), Axiom::property_assertion(P("p"), I("a"), I("b")),
                         Axiom::class_assertion(I("a"), C("c2")), disj("c1", "c2")}));
  t.push_back(make(OOR, {Axiom::range(P("p"), N("c1")), Axiom::property_assertion(P("p"), I("a"), I("b")),
                         Axiom::class_assertion(I("b"), C("c2")), disj("c1", "c2")}));
  t.push_back(make(CSC, {sub(C("c1"), C("c2")), sub(C("c2"), C("c3")), sub(C("c3"), C("c1"))}));
  return t;
}

}  // namespace

const std::vector<PatternTemplate>& templates() {
  static const std::vector<PatternTemplate> all = build_templates();
  return all;
}

const PatternTemplate& template_of(PatternId id) { return templates()[static_cast<std::size_t>(id)]; }

namespace {

ClassExpression substitute(const ClassExpression& e, const Substitution& s);

RoleExpression substitute(const RoleExpression& r, const Substitution& s) {
  if (!is_variable(r.property())) return r;
  const RoleExpression& bound = s.roles.at(r.property().local());
  return r.is_inverse() ? bound.inverse() : bound;
}

EntityName substitute(const EntityName& e, const Substitution& s) {
  if (!is_variable(e)) return e;
  if (e.kind() == EntityKind::ObjectProperty) {
    RoleExpression r = s.roles.at(e.local());
    if (r.is_inverse()) throw std::logic_error("role variable bound to an inverse where a name is required");
    return r.property();
  }
  return s.entities.at(e.local());
}

ClassExpression substitute(const ClassExpression& e, const Substitution& s) {
  switch (e.kind()) {
    case ExprKind::Named: return ClassExpression::named(substitute(e.name(), s));
    case ExprKind::Top:
    case ExprKind::Bottom: return e;
    case ExprKind::Not: return ClassExpression::negation(substitute(e.operand(), s));
    case ExprKind::And:
    case ExprKind::Or: {
      std::vector<ClassExpression> ops;
      for (const auto& op : e.operands()) ops.push_back(substitute(op, s));
      return e.kind() == ExprKind::And ? ClassExpression::conjunction(std::move(ops))
                                       : ClassExpression::disjunction(std::move(ops));
    }
    case ExprKind::Some: return ClassExpression::some(substitute(e.role(), s), substitute(e.operand(), s));
    case ExprKind::Only: return ClassExpression::only(substitute(e.role(), s), substitute(e.operand(), s));
    case ExprKind::AtMost:
      return ClassExpression::at_most(e.cardinality(), substitute(e.role(), s), substitute(e.operand(), s));
  }
  return e;
}

}  // namespace

Axiom instantiate(const Axiom& schema, const Substitution& s) {
  return std::visit(
      [&](const auto& a) -> Axiom {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          return Axiom::subclass_of(substitute(a.sub, s), substitute(a.sup, s));
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          return Axiom::equivalent(substitute(a.first, s), substitute(a.second, s));
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
          return Axiom::disjoint(substitute(a.first, s), substitute(a.second, s));
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          return Axiom::subproperty_of(substitute(a.sub, s), substitute(a.sup, s));
        } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
          return Axiom::inverse_properties(substitute(a.first, s), substitute(a.second, s));
        } else if constexpr (std::is_same_v<T, axioms::Domain>) {
          return Axiom::domain(substitute(a.property, s), substitute(a.cls, s));
        } else if constexpr (std::is_same_v<T, axioms::Range>) {
          return Axiom::range(substitute(a.property, s), substitute(a.cls, s));
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          return Axiom::class_assertion(substitute(a.individual, s), substitute(a.type, s));
        } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
          return Axiom::property_assertion(substitute(a.property, s), substitute(a.subject, s),
                                           substitute(a.object, s));
        } else {
          return Axiom::declaration(substitute(a.entity, s));
        }
      },
      schema.data());
}

namespace {

// Disjointness and equivalence are symmetric; compare them with ordered
// arguments.
Axiom canonical(const Axiom& ax) {
  if (auto d = ax.get_if<axioms::DisjointClasses>(); d && d->second < d->first)
    return Axiom::disjoint(d->second, d->first);
  if (auto e = ax.get_if<axioms::EquivalentClasses>(); e && e->second < e->first)
    return Axiom::equivalent(e->second, e->first);
  return ax;
}

struct Index {
  explicit Index(const Ontology& o) : onto(o) {
    const auto& axs = o.axioms();
    for (std::size_t i = 0; i < axs.size(); ++i) {
      const Axiom& ax = axs[i];
      by_kind[static_cast<std::size_t>(ax.kind())].push_back(i);
      if (auto s = ax.get_if<axioms::SubClassOf>(); s && s->sub.is_named()) by_lhs[s->sub.name()].push_back(i);
      present.insert(canonical(ax));
    }
  }
  const Ontology& onto;
  std::array<std::vector<std::size_t>, 10> by_kind;
  std::map<EntityName, std::vector<std::size_t>> by_lhs;
  std::set<Axiom> present;
};

class Unifier {
 public:
  explicit Unifier(Substitution& s) : s_(s) {}

  bool entity(const EntityName& p, const EntityName& c) {
    if (p.kind() != c.kind()) return false;
    if (!is_variable(p)) return p == c;
    if (p.kind() == EntityKind::ObjectProperty) return role(RoleExpression(p), RoleExpression(c));
    auto [it, inserted] = s_.entities.try_emplace(p.local(), c);
    return inserted || it->second == c;
  }

  bool role(const RoleExpression& p, const RoleExpression& c) {
    if (!is_variable(p.property())) return p == c;
    RoleExpression want = p.is_inverse() ? c.inverse() : c;
    auto [it, inserted] = s_.roles.try_emplace(p.property().local(), want);
    return inserted || it->second == want;
  }

  bool expr(const ClassExpression& p, const ClassExpression& c) {
    if (p.kind() != c.kind()) return false;
    switch (p.kind()) {
      case ExprKind::Named: return entity(p.name(), c.name());
      case ExprKind::Top:
      case ExprKind::Bottom: return true;
      case ExprKind::Not: return expr(p.operand(), c.operand());
      case ExprKind::Some:
      case ExprKind::Only:
      case ExprKind::AtMost:
        return p.cardinality() == c.cardinality() && role(p.role(), c.role()) && expr(p.operand(), c.operand());
      case ExprKind::And:
      case ExprKind::Or: {
        auto po = p.operands();
        auto co = c.operands();
        if (po.size() != co.size()) return false;
        // operand order is irrelevant; try every arrangement of small lists
        std::vector<std::size_t> perm(co.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        if (perm.size() > 4) return ordered(po, co, perm);
        Substitution saved = s_;
        do {
          if (ordered(po, co, perm)) return true;
          s_ = saved;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
      }
    }
    return false;
  }

  bool axiom(const Axiom& p, const Axiom& c) {
    if (p.kind() != c.kind()) return false;
    return std::visit(
        [&](const auto& pa) -> bool {
          using T = std::decay_t<decltype(pa)>;
          const T& ca = c.as<T>();
          if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
            return expr(pa.sub, ca.sub) && expr(pa.sup, ca.sup);
          } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
            return symmetric([&] { return expr(pa.first, ca.first) && expr(pa.second, ca.second); },
                             [&] { return expr(pa.first, ca.second) && expr(pa.second, ca.first); });
          } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
            return symmetric([&] { return entity(pa.first, ca.first) && entity(pa.second, ca.second); },
                             [&] { return entity(pa.first, ca.second) && entity(pa.second, ca.first); });
          } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
            // r SubPropertyOf s says the same as inverse r SubPropertyOf inverse s
            return symmetric([&] { return role(pa.sub, ca.sub) && role(pa.sup, ca.sup); },
                             [&] { return role(pa.sub, ca.sub.inverse()) && role(pa.sup, ca.sup.inverse()); });
          } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
            return entity(pa.first, ca.first) && entity(pa.second, ca.second);
          } else if constexpr (std::is_same_v<T, axioms::Domain> || std::is_same_v<T, axioms::Range>) {
            return entity(pa.property, ca.property) && entity(pa.cls, ca.cls);
          } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
            return entity(pa.individual, ca.individual) && expr(pa.type, ca.type);
          } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
            return entity(pa.property, ca.property) && entity(pa.subject, ca.subject) &&
                   entity(pa.object, ca.object);
          } else {
            return entity(pa.entity, ca.entity);
          }
        },
        p.data());
  }

 private:
  bool ordered(std::span<const ClassExpression> po, std::span<const ClassExpression> co,
               const std::vector<std::size_t>& perm) {
    for (std::size_t i = 0; i < po.size(); ++i)
      if (!expr(po[i], co[perm[i]])) return false;
    return true;
  }

  template <class F, class G>
  bool symmetric(F&& straight, G&& swapped) {
    Substitution saved = s_;
    if (straight()) return true;
    s_ = saved;
    return swapped();
  }

  Substitution& s_;
};

void variables_of(const ClassExpression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Named:
      if (is_variable(e.name())) out.insert(e.name().local());
      break;
    case ExprKind::Top:
    case ExprKind::Bottom: break;
    case ExprKind::Some:
    case ExprKind::Only:
    case ExprKind::AtMost:
      if (is_variable(e.role().property())) out.insert(e.role().property().local());
      [[fallthrough]];
    default:
      for (const auto& op : e.operands()) variables_of(op, out);
  }
}

std::set<std::string> variables_of(const Axiom& ax) {
  std::set<std::string> out;
  for (const auto& e : entities_of(ax))
    if (is_variable(e)) out.insert(e.local());
  return out;
}

bool bound(const Substitution& s, const std::string& var) {
  return s.entities.contains(var) || s.roles.contains(var);
}

bool violates_distinct(const PatternTemplate& t, const Substitution& s) {
  for (const auto& [a, b] : t.distinct) {
    if (auto x = s.entities.find(a), y = s.entities.find(b); x != s.entities.end() && y != s.entities.end()) {
      if (x->second == y->second) return true;
    } else if (auto u = s.roles.find(a), v = s.roles.find(b); u != s.roles.end() && v != s.roles.end()) {
      if (u->second.property() == v->second.property()) return true;
    }
  }
  return false;
}

// Backtracking search for assignments of ontology axioms to a subset of a
// template's schemata.
class Matcher {
 public:
  Matcher(const Index& index, const PatternTemplate& t) : index_(index), t_(t) {
    for (const auto& ax : t.schemata) vars_.push_back(variables_of(ax));
  }

  // f(substitution, axiom index per schema in `which`) returns false to stop.
  template <class F>
  void run(const std::vector<std::size_t>& which, F&& f) {
    Substitution s;
    std::vector<std::size_t> chosen(which.size(), SIZE_MAX);
    stop_ = false;
    step(which, chosen, s, f);
  }

 private:
  template <class F>
  void step(const std::vector<std::size_t>& which, std::vector<std::size_t>& chosen, Substitution& s, F& f) {
    // the open schema with the most bound variables goes next
    std::size_t best = SIZE_MAX;
    int best_bound = -1;
    for (std::size_t k = 0; k < which.size(); ++k) {
      if (chosen[k] != SIZE_MAX) continue;
      int b = 0;
      for (const auto& v : vars_[which[k]]) b += bound(s, v) ? 1 : 0;
      if (b > best_bound) {
        best_bound = b;
        best = k;
      }
    }
    if (best == SIZE_MAX) {
      if (!f(s, chosen)) stop_ = true;
      return;
    }
    const Axiom& schema = t_.schemata[which[best]];
    for (std::size_t idx : candidates(schema, s)) {
      if (std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) continue;
      Substitution next = s;
      Unifier u(next);
      if (!u.axiom(schema, index_.onto.axioms()[idx])) continue;
      if (violates_distinct(t_, next)) continue;
      chosen[best] = idx;
      step(which, chosen, next, f);
      chosen[best] = SIZE_MAX;
      if (stop_) return;
    }
  }

  const std::vector<std::size_t>& candidates(const Axiom& schema, const Substitution& s) const {
    static const std::vector<std::size_t> none;
    if (auto sc = schema.get_if<axioms::SubClassOf>(); sc && sc->sub.is_named()) {
      const EntityName& lhs = sc->sub.name();
      EntityName key = lhs;
      if (is_variable(lhs)) {
        auto it = s.entities.find(lhs.local());
        if (it == s.entities.end()) return index_.by_kind[static_cast<std::size_t>(schema.kind())];
        key = it->second;
      }
      auto it = index_.by_lhs.find(key);
      return it == index_.by_lhs.end() ? none : it->second;
    }
    return index_.by_kind[static_cast<std::size_t>(schema.kind())];
  }

  const Index& index_;
  const PatternTemplate& t_;
  std::vector<std::set<std::string>> vars_;
  bool stop_ = false;
};

using SubKey = std::vector<std::pair<std::string, std::string>>;

SubKey key_of(const Substitution& s) {
  SubKey k;
  for (const auto& [v, e] : s.entities) k.emplace_back(v, e.iri());
  for (const auto& [v, r] : s.roles) k.emplace_back(v, (r.is_inverse() ? "^" : "") + r.property().iri());
  std::sort(k.begin(), k.end());
  return k;
}

std::vector<Match> detect_one(const Index& index, const PatternTemplate& t, bool first_only) {
  std::vector<std::size_t> all(t.arity());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::map<std::vector<std::size_t>, std::pair<SubKey, MatchBinding>> found;
  Matcher m(index, t);
  m.run(all, [&](const Substitution& s, const std::vector<std::size_t>& chosen) {
    std::vector<std::size_t> axiom_set = chosen;
    std::sort(axiom_set.begin(), axiom_set.end());
    SubKey key = key_of(s);
    auto it = found.find(axiom_set);
    if (it == found.end() || key < it->second.first) {
      MatchBinding b;
      b.substitution = s;
      b.matched_schemata = all;
      for (std::size_t idx : chosen) b.matched.push_back(index.onto.axioms()[idx]);
      found[axiom_set] = {std::move(key), std::move(b)};
    }
    return !first_only;
  });
  std::vector<std::pair<SubKey, MatchBinding>> ordered;
  for (auto& [_, v] : found) ordered.push_back(std::move(v));
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Match> out;
  for (auto& [_, b] : ordered) out.push_back(Match{t.id, std::move(b)});
  return out;
}

std::vector<EntityName> candidates_for(const Ontology& o, const std::string& var, const PatternTemplate& t) {
  for (const auto& ax : t.schemata)
    for (const auto& e : entities_of(ax))
      if (is_variable(e) && e.local() == var) {
        if (e.kind() == EntityKind::Class) return o.classes();
        if (e.kind() == EntityKind::ObjectProperty) return o.properties();
        return o.individuals();
      }
  return {};
}

template <class F>
void combinations(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    if (pick.size() == k) return f(pick);
    for (std::size_t i = start; i < n; ++i) {
      pick.push_back(i);
      if (!self(self, i + 1)) return false;
      pick.pop_back();
    }
    return true;
  };
  rec(rec, 0);
}

}  // namespace

std::vector<Match> detect(const Ontology& o, PatternId id) {
  Index index(o);
  return detect_one(index, template_of(id), false);
}

std::vector<Match> detect(const Ontology& o) {
  Index index(o);
  std::vector<Match> out;
  for (const auto& t : templates()) {
    auto found = detect_one(index, t, false);
    std::move(found.begin(), found.end(), std::back_inserter(out));
  }
  return out;
}

bool contains_pattern(const Ontology& o, PatternId id) {
  Index index(o);
  return !detect_one(index, template_of(id), true).empty();
}

std::vector<MatchBinding> find_injection_sites(const Ontology& o, PatternId id, std::size_t max_missing,
                                               std::size_t limit) {
  const PatternTemplate& t = template_of(id);
  Index index(o);
  Matcher matcher(index, t);
  std::vector<MatchBinding> sites;
  std::set<std::pair<std::vector<Axiom>, std::vector<std::size_t>>> seen;
  bool full = false;
  const std::size_t n = t.arity();
  for (std::size_t k = 1; k <= std::min(max_missing, n) && !full; ++k) {
    combinations(n, n - k, [&](const std::vector<std::size_t>& which) {
      std::vector<std::size_t> missing_idx;
      for (std::size_t i = 0; i < n; ++i)
        if (std::find(which.begin(), which.end(), i) == which.end()) missing_idx.push_back(i);
      matcher.run(which, [&](const Substitution& partial, const std::vector<std::size_t>& chosen) {
        std::vector<std::string> open;
        for (std::size_t mi : missing_idx)
          for (const auto& v : variables_of(t.schemata[mi]))
            if (!bound(partial, v) && std::find(open.begin(), open.end(), v) == open.end()) open.push_back(v);
        std::vector<std::vector<EntityName>> pools;
        for (const auto& v : open) pools.push_back(candidates_for(o, v, t));
        Substitution s = partial;
        auto assign = [&](auto&& self, std::size_t depth) -> bool {
          if (depth == open.size()) {
            std::vector<Axiom> missing;
            std::vector<Axiom> canon;
            for (std::size_t mi : missing_idx) {
              Axiom ax = instantiate(t.schemata[mi], s);
              Axiom c = canonical(ax);
              if (index.present.contains(c) || std::find(canon.begin(), canon.end(), c) != canon.end()) return true;
              canon.push_back(std::move(c));
              missing.push_back(std::move(ax));
            }
            std::vector<std::size_t> used = chosen;
            std::sort(used.begin(), used.end());
            std::sort(canon.begin(), canon.end());
            if (!seen.emplace(canon, used).second) return true;
            MatchBinding b;
            b.substitution = s;
            b.matched_schemata = which;
            for (std::size_t idx : chosen) b.matched.push_back(o.axioms()[idx]);
            b.missing_schemata = missing_idx;
            b.missing = std::move(missing);
            sites.push_back(std::move(b));
            if (limit && sites.size() >= limit) {
              full = true;
              return false;
            }
            return true;
          }
          const std::string& v = open[depth];
          for (const auto& e : pools[depth]) {
            if (e.kind() == EntityKind::ObjectProperty) s.roles.insert_or_assign(v, RoleExpression(e));
            else s.entities.insert_or_assign(v, e);
            if (!violates_distinct(t, s) && !self(self, depth + 1)) return false;
          }
          s.roles.erase(v);
          s.entities.erase(v);
          return true;
        };
        return assign(assign, 0);
      });
      return !full;
    });
  }
  std::stable_sort(sites.begin(), sites.end(), [](const MatchBinding& a, const MatchBinding& b) {
    if (a.missing.size() != b.missing.size()) return a.missing.size() < b.missing.size();
    if (a.missing != b.missing) return a.missing < b.missing;
    return a.matched < b.matched;
  });
  return sites;
}

std::pair<Ontology, InjectionReport> inject(const Ontology& o, PatternId id, std::uint64_t seed,
                                            const InjectOptions& options) {
  std::vector<MatchBinding> sites = find_injection_sites(o, id, 1);
  if (sites.empty() && options.max_missing >= 2) {
    sites = find_injection_sites(o, id, std::min<std::size_t>(options.max_missing, 2),
                                 options.two_axiom_site_limit);
  }
  if (sites.empty())
    throw NoSite("no injection site for " + std::string(to_string(id)) + " in '" + o.id() + "'");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  MatchBinding chosen = std::move(sites[pick(rng)]);
  InjectionReport report{id, chosen.missing, chosen, o.id()};
  return {o.with_axioms(chosen.missing), std::move(report)};
}

}  // namespace ontocc::antipattern
