#include "ontocc/modularize.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace ontocc::modularize {

namespace {

struct Graph {
  std::vector<EntityName> nodes;  // classes then individuals, each sorted
  std::map<EntityName, std::size_t> index;
  std::vector<std::map<std::size_t, double>> adj;

  explicit Graph(const Ontology& o) {
    for (const auto& c : o.classes()) add_node(c);
    for (const auto& i : o.individuals()) add_node(i);
    adj.resize(nodes.size());

    std::map<EntityName, std::vector<EntityName>> domains, ranges;
    for (const auto& ax : o.axioms()) {
      if (auto s = ax.get_if<axioms::SubClassOf>()) {
        link_all(named_classes_in(s->sub), named_classes_in(s->sup), 2);
      } else if (auto e = ax.get_if<axioms::EquivalentClasses>()) {
        link_all(named_classes_in(e->first), named_classes_in(e->second), 2);
      } else if (auto d = ax.get_if<axioms::Domain>()) {
        domains[d->property].push_back(d->cls);
      } else if (auto r = ax.get_if<axioms::Range>()) {
        ranges[r->property].push_back(r->cls);
      } else if (auto a = ax.get_if<axioms::ClassAssertion>()) {
        link_all({a->individual}, named_classes_in(a->type), 1);
      } else if (auto f = ax.get_if<axioms::PropertyAssertion>()) {
        link(f->subject, f->object, 1);
      }
    }
    for (const auto& [p, ds] : domains) {
      auto it = ranges.find(p);
      if (it != ranges.end()) link_all(ds, it->second, 1);
    }
  }

  void add_node(const EntityName& e) {
    index.emplace(e, nodes.size());
    nodes.push_back(e);
  }

  void link(const EntityName& a, const EntityName& b, double w) {
    if (a == b) return;
    std::size_t x = index.at(a), y = index.at(b);
    adj[x][y] += w;
    adj[y][x] += w;
  }

  void link_all(const std::vector<EntityName>& as, const std::vector<EntityName>& bs, double w) {
    for (const auto& a : as)
      for (const auto& b : bs) link(a, b, w);
  }

  double degree(std::size_t n) const {
    double total = 0;
    for (const auto& [m, w] : adj[n]) total += w;
    return total;
  }
};

// Told named-to-named subclass pairs.
std::set<std::pair<EntityName, EntityName>> direct_subclasses(const Ontology& o) {
  std::set<std::pair<EntityName, EntityName>> out;
  for (const auto& ax : o.axioms())
    if (auto s = ax.get_if<axioms::SubClassOf>(); s && s->sub.is_named() && s->sup.is_named())
      out.emplace(s->sub.name(), s->sup.name());
  return out;
}

}  // namespace

std::vector<ConceptScore> rank_concepts(const Ontology& o) {
  Graph g(o);
  std::vector<ConceptScore> out;
  for (std::size_t n = 0; n < g.nodes.size(); ++n)
    if (g.nodes[n].kind() == EntityKind::Class) out.push_back({g.nodes[n], g.degree(n)});
  std::stable_sort(out.begin(), out.end(), [](const ConceptScore& a, const ConceptScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.cls < b.cls;
  });
  return out;
}

std::vector<EntityName> select_heads(const Ontology& o, const std::vector<ConceptScore>& scores, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (scores.size() < k)
    throw InsufficientConcepts("requested " + std::to_string(k) + " heads from " + std::to_string(scores.size()) +
                               " classes");
  auto sub = direct_subclasses(o);
  std::vector<EntityName> heads, skipped;
  for (const auto& s : scores) {
    if (heads.size() == k) break;
    bool related = std::any_of(heads.begin(), heads.end(), [&](const EntityName& h) {
      return sub.contains({s.cls, h}) || sub.contains({h, s.cls});
    });
    (related ? skipped : heads).push_back(s.cls);
  }
  for (std::size_t i = 0; heads.size() < k; ++i) heads.push_back(skipped[i]);
  return heads;
}

std::vector<Partition> partition(const Ontology& o, const std::vector<EntityName>& heads) {
  if (heads.empty()) throw std::invalid_argument("partition needs at least one head");
  Graph g(o);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(g.nodes.size(), kNone);
  for (std::size_t h = 0; h < heads.size(); ++h) {
    auto it = g.index.find(heads[h]);
    if (it == g.index.end() || heads[h].kind() != EntityKind::Class)
      throw std::invalid_argument("head '" + heads[h].iri() + "' is not a class of the ontology");
    owner[it->second] = h;
  }
  // direct children go to their (highest-ranked) head
  for (const auto& [child, parent] : direct_subclasses(o)) {
    std::size_t c = g.index.at(child);
    if (owner[c] != kNone && std::find(heads.begin(), heads.end(), child) != heads.end()) continue;
    auto h = std::find(heads.begin(), heads.end(), parent);
    if (h == heads.end()) continue;
    std::size_t hi = static_cast<std::size_t>(h - heads.begin());
    if (owner[c] == kNone || hi < owner[c]) owner[c] = hi;
  }
  // membership = shared edge weight / (1 + degree), until nothing moves
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
      if (owner[n] != kNone) continue;
      std::map<std::size_t, double> shared;
      for (const auto& [m, w] : g.adj[n])
        if (owner[m] != kNone) shared[owner[m]] += w;
      if (shared.empty()) continue;
      const double denom = 1 + g.degree(n);
      std::size_t best = kNone;
      double best_score = 0;
      for (const auto& [p, w] : shared) {  // ascending p, so ties keep the better-ranked head
        double m = w / denom;
        if (m > best_score) {
          best = p;
          best_score = m;
        }
      }
      if (best != kNone) {
        owner[n] = best;
        changed = true;
      }
    }
  }
  std::vector<Partition> out;
  for (const auto& h : heads) out.push_back({h, {}, {}});
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    std::size_t p = owner[n] == kNone ? 0 : owner[n];
    if (g.nodes[n].kind() == EntityKind::Class) out[p].members.push_back(g.nodes[n]);
    else out[p].individuals.push_back(g.nodes[n]);
  }
  return out;
}

Extraction extract_modules(const Ontology& o, const std::vector<Partition>& partitions,
                           std::size_t min_module_classes) {
  std::map<EntityName, std::size_t> owner;
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    for (const auto& c : partitions[p].members) owner.emplace(c, p);
    for (const auto& i : partitions[p].individuals) owner.emplace(i, p);
  }
  const auto& axs = o.axioms();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> picked(partitions.size());
  std::vector<std::set<EntityName>> props(partitions.size());
  std::vector<std::size_t> role_axioms;

  for (std::size_t k = 0; k < axs.size(); ++k) {
    if (axs[k].kind() == AxiomKind::Declaration) continue;
    std::size_t home = kNone;
    bool spans = false, any = false;
    for (const auto& e : entities_of(axs[k])) {
      if (e.kind() == EntityKind::ObjectProperty) continue;
      any = true;
      auto it = owner.find(e);
      std::size_t p = it == owner.end() ? kNone : it->second;
      if (p == kNone || (home != kNone && p != home)) spans = true;
      home = p;
    }
    if (!any) {
      role_axioms.push_back(k);
      continue;
    }
    if (spans || home == kNone) continue;
    picked[home].push_back(k);
    for (const auto& e : entities_of(axs[k]))
      if (e.kind() == EntityKind::ObjectProperty) props[home].insert(e);
  }
  // property-only axioms follow the properties a module already uses
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    std::set<std::size_t> taken;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t k : role_axioms) {
        if (taken.contains(k)) continue;
        auto names = entities_of(axs[k]);
        if (std::none_of(names.begin(), names.end(), [&](const EntityName& e) { return props[p].contains(e); }))
          continue;
        taken.insert(k);
        for (const auto& e : names) props[p].insert(e);
        grew = true;
      }
    }
    picked[p].insert(picked[p].end(), taken.begin(), taken.end());
    std::sort(picked[p].begin(), picked[p].end());
  }

  Extraction out;
  const std::string source = o.id().empty() ? "ontology" : o.id();
  for (std::size_t p = 0; p < partitions.size(); ++p) {
    const auto& part = partitions[p];
    if (part.members.size() < min_module_classes) {
      ++out.skipped_small;
      continue;
    }
    std::vector<Axiom> module;
    std::set<EntityName> used;
    for (std::size_t k : picked[p])
      for (const auto& e : entities_of(axs[k])) used.insert(e);
    for (const auto& c : part.members) module.push_back(Axiom::declaration(c));
    for (const auto& e : used)
      if (e.kind() == EntityKind::ObjectProperty) module.push_back(Axiom::declaration(e));
    for (const auto& i : part.individuals) module.push_back(Axiom::declaration(i));
    for (std::size_t k : picked[p]) module.push_back(axs[k]);
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "-m%03zu", p);
    out.modules.push_back({Ontology(source + suffix, std::move(module), o.prefixes()), source, part.head});
  }
  // skipped modules do not count as placing their axioms
  std::vector<bool> kept(axs.size(), false);
  for (std::size_t p = 0; p < partitions.size(); ++p)
    if (partitions[p].members.size() >= min_module_classes)
      for (std::size_t k : picked[p]) kept[k] = true;
  for (std::size_t k = 0; k < axs.size(); ++k)
    if (axs[k].kind() != AxiomKind::Declaration && !kept[k]) out.dropped.push_back(axs[k]);
  return out;
}

std::size_t default_k(const Ontology& o) {
  std::size_t n = o.classes().size();
  return std::max<std::size_t>(1, (n + 199) / 200);
}

Extraction build_modules(const Ontology& o, const Options& options) {
  auto scores = rank_concepts(o);
  std::size_t k = options.k.value_or(default_k(o));
  auto heads = select_heads(o, scores, k);
  return extract_modules(o, partition(o, heads), options.min_module_classes);
}

}  // namespace ontocc::modularize
