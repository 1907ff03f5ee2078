#include "ontocc/oracle.hpp"

#include <algorithm>
#include <vector>

namespace ontocc::oracle {

std::set<std::pair<int, int>> extension(const Interpretation& m, const RoleExpression& role) {
  auto it = m.properties.find(role.property());
  if (it == m.properties.end()) return {};
  if (!role.is_inverse()) return it->second;
  std::set<std::pair<int, int>> out;
  for (auto [a, b] : it->second) out.emplace(b, a);
  return out;
}

std::set<int> extension(const Interpretation& m, const ClassExpression& e) {
  std::set<int> all;
  for (int x = 0; x < m.domain_size; ++x) all.insert(x);
  switch (e.kind()) {
    case ExprKind::Named: {
      auto it = m.classes.find(e.name());
      return it == m.classes.end() ? std::set<int>{} : it->second;
    }
    case ExprKind::Top:
      return all;
    case ExprKind::Bottom:
      return {};
    case ExprKind::Not: {
      std::set<int> inner = extension(m, e.operand());
      std::set<int> out;
      std::set_difference(all.begin(), all.end(), inner.begin(), inner.end(), std::inserter(out, out.end()));
      return out;
    }
    case ExprKind::And: {
      std::set<int> out = all;
      for (const auto& op : e.operands()) {
        std::set<int> ext = extension(m, op);
        std::set<int> next;
        std::set_intersection(out.begin(), out.end(), ext.begin(), ext.end(), std::inserter(next, next.end()));
        out = std::move(next);
      }
      return out;
    }
    case ExprKind::Or: {
      std::set<int> out;
      for (const auto& op : e.operands()) {
        std::set<int> ext = extension(m, op);
        out.insert(ext.begin(), ext.end());
      }
      return out;
    }
    case ExprKind::Some:
    case ExprKind::Only:
    case ExprKind::AtMost: {
      auto rel = extension(m, e.role());
      std::set<int> filler = extension(m, e.operand());
      std::set<int> out;
      for (int x = 0; x < m.domain_size; ++x) {
        std::uint32_t hits = 0;
        bool all_in = true;
        for (auto [a, b] : rel) {
          if (a != x) continue;
          if (filler.contains(b)) ++hits;
          else all_in = false;
        }
        bool member = e.kind() == ExprKind::Some   ? hits > 0
                      : e.kind() == ExprKind::Only ? all_in
                                                   : hits <= e.cardinality();
        if (member) out.insert(x);
      }
      return out;
    }
  }
  return {};
}

namespace {

bool subset(const std::set<int>& a, const std::set<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

int individual_of(const Interpretation& m, const EntityName& i) {
  auto it = m.individuals.find(i);
  return it == m.individuals.end() ? -1 : it->second;
}

}  // namespace

bool satisfies(const Interpretation& m, const Axiom& axiom) {
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          return subset(extension(m, a.sub), extension(m, a.sup));
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          return extension(m, a.first) == extension(m, a.second);
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
          auto x = extension(m, ClassExpression::named(a.first));
          auto y = extension(m, ClassExpression::named(a.second));
          return std::none_of(x.begin(), x.end(), [&](int v) { return y.contains(v); });
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          auto sub = extension(m, a.sub);
          auto sup = extension(m, a.sup);
          return std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
        } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
          return extension(m, RoleExpression(a.first)) == extension(m, RoleExpression(a.second, true));
        } else if constexpr (std::is_same_v<T, axioms::Domain>) {
          auto cls = extension(m, ClassExpression::named(a.cls));
          for (auto [x, y] : extension(m, RoleExpression(a.property)))
            if (!cls.contains(x)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, axioms::Range>) {
          auto cls = extension(m, ClassExpression::named(a.cls));
          for (auto [x, y] : extension(m, RoleExpression(a.property)))
            if (!cls.contains(y)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          int x = individual_of(m, a.individual);
          return x >= 0 && extension(m, a.type).contains(x);
        } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
          int x = individual_of(m, a.subject);
          int y = individual_of(m, a.object);
          return x >= 0 && y >= 0 && extension(m, RoleExpression(a.property)).contains({x, y});
        } else {
          return a.entity.kind() != EntityKind::Individual || individual_of(m, a.entity) >= 0;
        }
      },
      axiom.data());
}

bool is_model(const Interpretation& m, const Ontology& o) {
  return std::all_of(o.axioms().begin(), o.axioms().end(), [&](const Axiom& a) { return satisfies(m, a); });
}

namespace {

// Literal encoding: 2*var for positive, 2*var+1 for negated.
using Lit = int;
inline Lit pos(int v) { return 2 * v; }
inline Lit neg(Lit l) { return l ^ 1; }

// DPLL with two watched literals and chronological backtracking.
class Solver {
 public:
  int new_var() {
    value_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    return static_cast<int>(value_.size()) - 1;
  }

  void add_clause(std::vector<Lit> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i + 1] == neg(c[i]) && (c[i] & 1) == 0) return;  // tautology
    if (c.empty()) {
      trivially_unsat_ = true;
      return;
    }
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return;
    }
    int id = static_cast<int>(clauses_.size());
    watches_[c[0]].push_back(id);
    watches_[c[1]].push_back(id);
    clauses_.push_back(std::move(c));
  }

  // true = satisfiable; throws BudgetExceeded when decisions run out.
  bool solve(std::uint64_t& budget) {
    if (trivially_unsat_) return false;
    for (Lit u : units_) {
      int v = lit_value(u);
      if (v == 0) return false;
      if (v < 0) assign(u);
    }
    if (!propagate()) return false;
    std::size_t next_var = 0;
    for (;;) {
      while (next_var < value_.size() && value_[next_var] >= 0) ++next_var;
      if (next_var == value_.size()) return true;
      if (budget == 0) throw BudgetExceeded("finite model search budget exhausted");
      --budget;
      levels_.push_back(Level{trail_.size(), pos(static_cast<int>(next_var)) + 1, false});
      assign(levels_.back().decision);
      while (!propagate()) {
        while (!levels_.empty() && levels_.back().flipped) {
          undo_to(levels_.back().trail_start);
          levels_.pop_back();
        }
        if (levels_.empty()) return false;
        Level& top = levels_.back();
        undo_to(top.trail_start);
        top.decision = neg(top.decision);
        top.flipped = true;
        assign(top.decision);
      }
      next_var = 0;
    }
  }

  bool value_of(int var) const { return value_[var] == 1; }

 private:
  struct Level {
    std::size_t trail_start;
    Lit decision;
    bool flipped;
  };

  int lit_value(Lit l) const {
    int v = value_[l >> 1];
    if (v < 0) return -1;
    return (l & 1) ? 1 - v : v;
  }

  void assign(Lit l) {
    value_[l >> 1] = (l & 1) ? 0 : 1;
    trail_.push_back(l);
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      value_[trail_.back() >> 1] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, size);
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      Lit false_lit = neg(trail_[qhead_++]);
      std::vector<int>& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int id = ws[i];
        std::vector<Lit>& c = clauses_[id];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) {
          ++i;
          continue;
        }
        ws[j++] = ws[i++];
        if (lit_value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          return false;
        }
        assign(c[0]);
      }
      ws.resize(j);
    }
    return true;
  }

  std::vector<int> value_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::vector<Level> levels_;
  std::size_t qhead_ = 0;
  bool trivially_unsat_ = false;
};

// Grounds an ontology over a fixed domain size.
class Grounder {
 public:
  Grounder(Solver& s, int n) : s_(s), n_(n) {
    truth_ = s_.new_var();
    s_.add_clause({pos(truth_)});
  }

  Lit class_lit(const EntityName& c, int x) {
    auto [it, inserted] = class_vars_.try_emplace(c);
    if (inserted)
      for (int i = 0; i < n_; ++i) it->second.push_back(s_.new_var());
    return pos(it->second[x]);
  }

  Lit role_lit(const RoleExpression& r, int x, int y) {
    if (r.is_inverse()) std::swap(x, y);
    auto [it, inserted] = property_vars_.try_emplace(r.property());
    if (inserted)
      for (int i = 0; i < n_ * n_; ++i) it->second.push_back(s_.new_var());
    return pos(it->second[x * n_ + y]);
  }

  Lit individual_lit(const EntityName& a, int x) {
    auto [it, inserted] = individual_vars_.try_emplace(a);
    if (inserted) {
      for (int i = 0; i < n_; ++i) it->second.push_back(s_.new_var());
      std::vector<Lit> some;
      for (int i = 0; i < n_; ++i) {
        some.push_back(pos(it->second[i]));
        for (int j = i + 1; j < n_; ++j) s_.add_clause({neg(pos(it->second[i])), neg(pos(it->second[j]))});
      }
      s_.add_clause(some);
    }
    return pos(it->second[x]);
  }

  Lit expr(const ClassExpression& e, int x) {
    switch (e.kind()) {
      case ExprKind::Named:
        return class_lit(e.name(), x);
      case ExprKind::Top:
        return pos(truth_);
      case ExprKind::Bottom:
        return neg(pos(truth_));
      case ExprKind::Not:
        return neg(expr(e.operand(), x));
      default:
        break;
    }
    auto key = std::make_pair(e, x);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Lit v = pos(s_.new_var());
    switch (e.kind()) {
      case ExprKind::And:
      case ExprKind::Or: {
        std::vector<Lit> kids;
        for (const auto& op : e.operands()) kids.push_back(expr(op, x));
        define(v, kids, e.kind() == ExprKind::And);
        break;
      }
      case ExprKind::Some:
      case ExprKind::Only: {
        // only R F == not (some R (not F))
        bool some = e.kind() == ExprKind::Some;
        std::vector<Lit> pairs;
        for (int y = 0; y < n_; ++y) {
          Lit f = expr(e.operand(), y);
          Lit p = pos(s_.new_var());
          define(p, {role_lit(e.role(), x, y), some ? f : neg(f)}, true);
          pairs.push_back(p);
        }
        define(some ? v : neg(v), pairs, false);
        break;
      }
      case ExprKind::AtMost: {
        std::vector<Lit> hits;
        for (int y = 0; y < n_; ++y) {
          Lit p = pos(s_.new_var());
          define(p, {role_lit(e.role(), x, y), expr(e.operand(), y)}, true);
          hits.push_back(p);
        }
        // v <-> no subset of size k+1 is fully hit
        std::uint32_t k = e.cardinality() + 1;
        std::vector<Lit> witnesses;
        if (k <= static_cast<std::uint32_t>(n_)) {
          for_each_subset(n_, static_cast<int>(k), [&](const std::vector<int>& sub) {
            std::vector<Lit> members;
            for (int i : sub) members.push_back(hits[i]);
            Lit w = pos(s_.new_var());
            define(w, members, true);
            witnesses.push_back(w);
          });
        }
        define(neg(v), witnesses, false);
        break;
      }
      default:
        break;
    }
    cache_.emplace(key, v);
    return v;
  }

  // out <-> AND(kids) when conj, out <-> OR(kids) otherwise.
  void define(Lit out, const std::vector<Lit>& kids, bool conj) {
    if (conj) {
      std::vector<Lit> back{out};
      for (Lit k : kids) {
        s_.add_clause({neg(out), k});
        back.push_back(neg(k));
      }
      s_.add_clause(back);
    } else {
      std::vector<Lit> fwd{neg(out)};
      for (Lit k : kids) {
        s_.add_clause({out, neg(k)});
        fwd.push_back(k);
      }
      s_.add_clause(fwd);
    }
  }

  void axiom(const Axiom& ax) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
            for (int x = 0; x < n_; ++x) s_.add_clause({neg(expr(a.sub, x)), expr(a.sup, x)});
          } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
            for (int x = 0; x < n_; ++x) {
              Lit l = expr(a.first, x), r = expr(a.second, x);
              s_.add_clause({neg(l), r});
              s_.add_clause({l, neg(r)});
            }
          } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
            for (int x = 0; x < n_; ++x)
              s_.add_clause({neg(class_lit(a.first, x)), neg(class_lit(a.second, x))});
          } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
            for (int x = 0; x < n_; ++x)
              for (int y = 0; y < n_; ++y) s_.add_clause({neg(role_lit(a.sub, x, y)), role_lit(a.sup, x, y)});
          } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
            RoleExpression p(a.first), q(a.second, true);
            for (int x = 0; x < n_; ++x)
              for (int y = 0; y < n_; ++y) {
                s_.add_clause({neg(role_lit(p, x, y)), role_lit(q, x, y)});
                s_.add_clause({role_lit(p, x, y), neg(role_lit(q, x, y))});
              }
          } else if constexpr (std::is_same_v<T, axioms::Domain> || std::is_same_v<T, axioms::Range>) {
            constexpr bool dom = std::is_same_v<T, axioms::Domain>;
            RoleExpression r(a.property);
            for (int x = 0; x < n_; ++x)
              for (int y = 0; y < n_; ++y)
                s_.add_clause({neg(role_lit(r, x, y)), class_lit(a.cls, dom ? x : y)});
          } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
            for (int x = 0; x < n_; ++x)
              s_.add_clause({neg(individual_lit(a.individual, x)), expr(a.type, x)});
          } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
            RoleExpression r(a.property);
            for (int x = 0; x < n_; ++x)
              for (int y = 0; y < n_; ++y)
                s_.add_clause({neg(individual_lit(a.subject, x)), neg(individual_lit(a.object, y)),
                               role_lit(r, x, y)});
          } else {
            const EntityName& e = a.entity;
            if (e.kind() == EntityKind::Class) class_lit(e, 0);
            else if (e.kind() == EntityKind::ObjectProperty) role_lit(RoleExpression(e), 0, 0);
            else individual_lit(e, 0);
          }
        },
        ax.data());
  }

  Interpretation read(const Solver& s) const {
    Interpretation m;
    m.domain_size = n_;
    for (const auto& [c, vars] : class_vars_) {
      auto& ext = m.classes[c];
      for (int x = 0; x < n_; ++x)
        if (s.value_of(vars[x])) ext.insert(x);
    }
    for (const auto& [p, vars] : property_vars_) {
      auto& ext = m.properties[p];
      for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
          if (s.value_of(vars[x * n_ + y])) ext.emplace(x, y);
    }
    for (const auto& [a, vars] : individual_vars_)
      for (int x = 0; x < n_; ++x)
        if (s.value_of(vars[x])) m.individuals[a] = x;
    return m;
  }

 private:
  template <class F>
  static void for_each_subset(int n, int k, F&& f) {
    std::vector<int> sub;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(sub.size()) == k) {
        f(sub);
        return;
      }
      for (int i = start; i < n; ++i) {
        sub.push_back(i);
        self(self, i + 1);
        sub.pop_back();
      }
    };
    rec(rec, 0);
  }

  Solver& s_;
  int n_;
  int truth_;
  std::map<EntityName, std::vector<int>> class_vars_, property_vars_, individual_vars_;
  std::map<std::pair<ClassExpression, int>, Lit> cache_;
};

std::optional<Interpretation> search(const Ontology& o, const SearchOptions& options, std::uint64_t& budget) {
  if (options.max_domain < 1 || options.max_domain > 4)
    throw std::invalid_argument("max_domain must be between 1 and 4");
  for (int n = 1; n <= options.max_domain; ++n) {
    Solver solver;
    Grounder g(solver, n);
    for (const auto& e : o.signature()) {
      if (e.kind() == EntityKind::Class) g.class_lit(e, 0);
      else if (e.kind() == EntityKind::ObjectProperty) g.role_lit(RoleExpression(e), 0, 0);
      else g.individual_lit(e, 0);
    }
    for (const auto& ax : o.axioms()) g.axiom(ax);
    if (solver.solve(budget)) return g.read(solver);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Interpretation> finite_model_search(const Ontology& o, const SearchOptions& options) {
  std::uint64_t budget = options.budget;
  return search(o, options, budget);
}

std::optional<Interpretation> finite_model_search(const Ontology& o, int max_domain) {
  SearchOptions options;
  options.max_domain = max_domain;
  return finite_model_search(o, options);
}

OntologyStatus oracle_status(const Ontology& o, const SearchOptions& options) {
  std::uint64_t budget = options.budget;
  auto base = search(o, options, budget);
  if (!base) return OntologyStatus::inconsistent("no model with at most " + std::to_string(options.max_domain) +
                                                 " elements");
  std::vector<EntityName> unsat;
  EntityName probe = individual_name("urn:ontocc:oracle#probe");
  for (const auto& cls : o.classes()) {
    if (!base->classes[cls].empty()) continue;
    Axiom extra = Axiom::class_assertion(probe, ClassExpression::named(cls));
    if (!search(o.with_axioms(std::span<const Axiom>(&extra, 1)), options, budget)) unsat.push_back(cls);
  }
  if (unsat.empty()) return OntologyStatus::consistent_coherent();
  return OntologyStatus::incoherent(std::move(unsat));
}

}  // namespace ontocc::oracle
