#include "ontocc/tableau.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace ontocc::tableau {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Init: return "init";
    case Rule::And: return "and";
    case Rule::Unfold: return "unfold";
    case Rule::Forall: return "forall";
    case Rule::Domain: return "domain";
    case Rule::Range: return "range";
    case Rule::Exists: return "exists";
    case Rule::Choice: return "choice";
    case Rule::Merge: return "merge";
    case Rule::Clash: return "clash";
  }
  return "?";
}

namespace {

enum class CKind : std::uint8_t { Top, Bottom, Atom, NegAtom, And, Or, Some, Only, AtMostOne };

struct Concept {
  CKind kind;
  int atom = -1;
  int role = -1;
  std::vector<int> kids;
};

int inv(int role) { return role ^ 1; }

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

// Interned knowledge base: concepts, role hierarchy and absorbed T-Box.
class Kb {
 public:
  explicit Kb(const Ontology& o) {
    for (const auto& e : o.signature()) {
      if (e.kind() == EntityKind::Class) class_id(e);
      else if (e.kind() == EntityKind::ObjectProperty) property_id(e);
      else individual_id(e);
    }
    top = intern_key(CKind::Top, -1, -1, {}, ClassExpression::top());
    bottom = intern_key(CKind::Bottom, -1, -1, {}, ClassExpression::bottom());
    std::vector<std::pair<int, int>> role_edges;
    for (const auto& ax : o.axioms()) load(ax, role_edges);
    close_roles(role_edges);
  }

  int class_id(const EntityName& e) {
    auto [it, inserted] = class_index.emplace(e, static_cast<int>(classes.size()));
    if (inserted) {
      classes.push_back(e);
      unfold.emplace_back();
      int pos = intern_key(CKind::Atom, it->second, -1, {}, ClassExpression::named(e));
      int neg = intern_key(CKind::NegAtom, it->second, -1, {},
                           ClassExpression::negation(ClassExpression::named(e)));
      atom_pos.push_back(pos);
      atom_neg.push_back(neg);
    }
    return it->second;
  }

  int property_id(const EntityName& e) {
    auto [it, inserted] = property_index.emplace(e, static_cast<int>(properties.size()));
    if (inserted) {
      properties.push_back(e);
      domain.emplace_back();
      range.emplace_back();
    }
    return it->second;
  }

  int individual_id(const EntityName& e) {
    auto [it, inserted] = individual_index.emplace(e, static_cast<int>(individuals.size()));
    if (inserted) individuals.push_back(e);
    return it->second;
  }

  int role_id(const RoleExpression& r) { return 2 * property_id(r.property()) + (r.is_inverse() ? 1 : 0); }
  int role_count() const { return static_cast<int>(2 * properties.size()); }
  bool is_sub(int r, int s) const { return sub[r][s] != 0; }

  std::string role_display(int r) const {
    const std::string& name = properties[r / 2].local();
    return (r & 1) ? "inverse " + name : name;
  }

  // `e` must already be in NNF.
  int intern(const ClassExpression& e) {
    switch (e.kind()) {
      case ExprKind::Named:
        return atom_pos[class_id(e.name())];
      case ExprKind::Top:
        return top;
      case ExprKind::Bottom:
        return bottom;
      case ExprKind::Not:
        if (e.operand().kind() != ExprKind::Named)
          throw UnsupportedAxiom("negated cardinality restriction '" + display(e) + "'");
        return atom_neg[class_id(e.operand().name())];
      case ExprKind::And:
      case ExprKind::Or: {
        std::vector<int> kids;
        for (const auto& op : e.operands()) kids.push_back(intern(op));
        return intern_key(e.kind() == ExprKind::And ? CKind::And : CKind::Or, -1, -1, std::move(kids), e);
      }
      case ExprKind::Some:
      case ExprKind::Only: {
        int kid = intern(e.operand());
        return intern_key(e.kind() == ExprKind::Some ? CKind::Some : CKind::Only, -1, role_id(e.role()),
                          {kid}, e);
      }
      case ExprKind::AtMost:
        if (e.cardinality() == 0)
          return intern(ClassExpression::only(e.role(), nnf(ClassExpression::negation(e.operand()))));
        if (e.cardinality() == 1 && e.operand().kind() == ExprKind::Top)
          return intern_key(CKind::AtMostOne, -1, role_id(e.role()), {}, e);
        throw UnsupportedAxiom("cardinality restriction '" + display(e) +
                               "' (only max 0 and max 1 Thing are supported)");
    }
    throw UnsupportedAxiom("unknown class expression");
  }

  std::string concept_display(int c) const { return display(source[c]); }

  std::vector<Concept> concepts;
  std::vector<ClassExpression> source;
  std::vector<EntityName> classes, properties, individuals;
  std::map<EntityName, int> class_index, property_index, individual_index;
  std::vector<int> atom_pos, atom_neg;
  std::vector<std::vector<int>> unfold;        // per class
  std::vector<std::vector<int>> domain, range;  // per property, cid ids
  std::vector<int> gcis;
  std::vector<std::vector<char>> sub;  // sub[r][s]: r is a sub-role of s (reflexive)
  std::vector<std::vector<int>> supers;
  std::vector<std::pair<int, int>> class_assertions;       // individual, cid
  std::vector<std::tuple<int, int, int>> role_assertions;  // role, subject, object
  int top = -1;
  int bottom = -1;

 private:
  using Key = std::tuple<int, int, int, std::vector<int>>;

  int intern_key(CKind kind, int atom, int role, std::vector<int> kids, const ClassExpression& src) {
    Key key{static_cast<int>(kind), atom, role, kids};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(concepts.size());
    concepts.push_back(Concept{kind, atom, role, std::move(kids)});
    source.push_back(src);
    index_.emplace(std::move(key), id);
    return id;
  }

  void add_unfold(int cls, int cid) { push_unique(unfold[cls], cid); }

  // rhs subsumes `lhs_named`-rooted definitions: C <= A.
  void absorb_into(const ClassExpression& c, const EntityName& a) {
    if (c.kind() == ExprKind::Named) {
      add_unfold(class_id(c.name()), atom_pos[class_id(a)]);
      return;
    }
    if (c.kind() == ExprKind::And) {
      auto ops = c.operands();
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].kind() != ExprKind::Named) continue;
        std::vector<ClassExpression> rest;
        for (std::size_t j = 0; j < ops.size(); ++j)
          if (j != i) rest.push_back(ops[j]);
        ClassExpression rest_expr =
            rest.size() == 1 ? rest.front() : ClassExpression::conjunction(std::move(rest));
        ClassExpression implied = ClassExpression::disjunction(
            {nnf(ClassExpression::negation(rest_expr)), ClassExpression::named(a)});
        add_unfold(class_id(ops[i].name()), intern(implied));
        return;
      }
    }
    push_unique(gcis, intern(ClassExpression::disjunction(
                          {nnf(ClassExpression::negation(c)), ClassExpression::named(a)})));
  }

  void load(const Axiom& ax, std::vector<std::pair<int, int>>& role_edges) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
            if (a.sub.kind() == ExprKind::Named) {
              add_unfold(class_id(a.sub.name()), intern(nnf(a.sup)));
            } else if (a.sub.kind() == ExprKind::Top) {
              push_unique(gcis, intern(nnf(a.sup)));
            } else {
              throw UnsupportedAxiom("SubClassOf with complex left-hand side '" + display(a.sub) + "'");
            }
          } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
            const ClassExpression* named = &a.first;
            const ClassExpression* other = &a.second;
            if (!named->is_named()) std::swap(named, other);
            if (!named->is_named())
              throw UnsupportedAxiom("EquivalentClasses without a named side '" + display(a.first) + "'");
            add_unfold(class_id(named->name()), intern(nnf(*other)));
            absorb_into(*other, named->name());
          } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
            int x = class_id(a.first);
            int y = class_id(a.second);
            add_unfold(x, atom_neg[y]);
            add_unfold(y, atom_neg[x]);
          } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
            int r = role_id(a.sub);
            int s = role_id(a.sup);
            role_edges.emplace_back(r, s);
            role_edges.emplace_back(inv(r), inv(s));
          } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
            int p = 2 * property_id(a.first);
            int q = 2 * property_id(a.second);
            role_edges.emplace_back(p, inv(q));
            role_edges.emplace_back(inv(q), p);
            role_edges.emplace_back(q, inv(p));
            role_edges.emplace_back(inv(p), q);
          } else if constexpr (std::is_same_v<T, axioms::Domain>) {
            push_unique(domain[property_id(a.property)], atom_pos[class_id(a.cls)]);
          } else if constexpr (std::is_same_v<T, axioms::Range>) {
            push_unique(range[property_id(a.property)], atom_pos[class_id(a.cls)]);
          } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
            class_assertions.emplace_back(individual_id(a.individual), intern(nnf(a.type)));
          } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
            role_assertions.emplace_back(2 * property_id(a.property), individual_id(a.subject),
                                         individual_id(a.object));
          } else {
            // declarations carry no constraints
          }
        },
        ax.data());
  }

  void close_roles(const std::vector<std::pair<int, int>>& edges) {
    int n = role_count();
    sub.assign(n, std::vector<char>(n, 0));
    std::vector<std::vector<int>> out(n);
    for (auto [r, s] : edges) push_unique(out[r], s);
    supers.assign(n, {});
    for (int r = 0; r < n; ++r) {
      std::vector<int> stack{r};
      sub[r][r] = 1;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : out[x]) {
          if (!sub[r][y]) {
            sub[r][y] = 1;
            stack.push_back(y);
          }
        }
      }
      for (int s = 0; s < n; ++s)
        if (sub[r][s]) supers[r].push_back(s);
    }
  }

  std::map<Key, int> index_;
};

struct Step {
  Rule rule;
  int node;
  int cid;
  int other;
};

struct Node {
  std::vector<int> label;  // sorted cid ids
  std::vector<int> edges;
  std::vector<int> individuals;
  int parent = -1;
  int merged_into = -1;
  bool root = false;
  bool alive = true;
};

struct Edge {
  int from;
  int to;
  std::vector<int> roles;  // sorted, oriented from -> to
  bool alive = true;
};

struct State {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Step> trace;
  bool clash = false;
};

enum class Outcome { Clash, Complete, Branch };

class Engine {
 public:
  Engine(const Kb& kb, const Options& options) : kb_(kb), options_(options) {}

  struct Result {
    bool consistent = false;
    bool guide_failed = false;
    State state;
    std::vector<Step> trace;
    Stats stats;
  };

  Result run(const std::vector<int>* guide) {
    Result result;
    State initial = make_initial();
    struct Frame {
      State state;
      int node;
      int cid;
      std::size_t next_alt;
    };
    std::vector<Frame> stack;
    std::size_t guide_pos = 0;
    State current = std::move(initial);
    for (;;) {
      Outcome outcome = Outcome::Clash;
      int branch_node = -1;
      int branch_cid = -1;
      if (!current.clash) outcome = expand(current, branch_node, branch_cid);
      if (outcome == Outcome::Complete) {
        result.consistent = true;
        result.state = std::move(current);
        result.stats = stats_;
        return result;
      }
      if (outcome == Outcome::Branch) {
        ++stats_.branches;
        if (stats_.branches > options_.max_branches)
          throw ResourceLimit("tableau branch limit exceeded");
        if (guide) {
          if (guide_pos >= guide->size()) {
            result.guide_failed = true;
            return result;
          }
          int alt = (*guide)[guide_pos++];
          const auto& kids = kb_.concepts[branch_cid].kids;
          if (alt < 0 || alt >= static_cast<int>(kids.size())) {
            result.guide_failed = true;
            return result;
          }
          choose(current, branch_node, kids[alt], alt);
          continue;
        }
        stack.push_back(Frame{current, branch_node, branch_cid, 0});
      } else {
        // clash: remember this refutation and backtrack
        result.trace = current.trace;
        if (guide) {
          result.state = std::move(current);
          result.stats = stats_;
          return result;
        }
        while (!stack.empty() &&
               stack.back().next_alt >= kb_.concepts[stack.back().cid].kids.size())
          stack.pop_back();
        if (stack.empty()) {
          result.consistent = false;
          result.state = std::move(current);
          result.stats = stats_;
          return result;
        }
      }
      Frame& top = stack.back();
      std::size_t alt = top.next_alt++;
      current = top.state;
      choose(current, top.node, kb_.concepts[top.cid].kids[alt], static_cast<int>(alt));
    }
  }

  // 0 = not blocked, 1 = directly blocked, 2 = indirectly blocked.
  std::vector<int> blocking(const State& s) const {
    std::vector<int> status(s.nodes.size(), 0);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      const Node& x = s.nodes[i];
      if (!x.alive || x.root || x.parent < 0) continue;
      if (status[x.parent] != 0) {
        status[i] = 2;
        continue;
      }
      if (directly_blocked(s, static_cast<int>(i))) status[i] = 1;
    }
    return status;
  }

  std::vector<int> roles_between(const State& s, int a, int b) const {
    int e = find_edge(s, a, b);
    if (e < 0) return {};
    const Edge& edge = s.edges[e];
    if (edge.from == a) return edge.roles;
    std::vector<int> out;
    for (int r : edge.roles) out.push_back(inv(r));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  State make_initial() {
    State s;
    for (std::size_t i = 0; i < kb_.individuals.size(); ++i) {
      int id = new_node(s, -1, true);
      s.nodes[id].individuals.push_back(static_cast<int>(i));
    }
    if (s.nodes.empty()) new_node(s, -1, true);
    for (const auto& [ind, cid] : kb_.class_assertions) {
      add(s, ind, cid, Rule::Init, -1);
      if (s.clash) return s;
    }
    for (const auto& [role, a, b] : kb_.role_assertions) add_role(s, a, b, role);
    return s;
  }

  int new_node(State& s, int parent, bool root) {
    if (s.nodes.size() >= options_.max_nodes) throw ResourceLimit("tableau node limit exceeded");
    int id = static_cast<int>(s.nodes.size());
    Node n;
    n.parent = parent;
    n.root = root;
    s.nodes.push_back(std::move(n));
    ++stats_.nodes_created;
    for (int g : kb_.gcis) {
      add(s, id, g, Rule::Init, -1);
      if (s.clash) break;
    }
    return id;
  }

  static bool has(const Node& n, int c) { return std::binary_search(n.label.begin(), n.label.end(), c); }

  bool add(State& s, int x, int c, Rule rule, int other) {
    Node& n = s.nodes[x];
    auto it = std::lower_bound(n.label.begin(), n.label.end(), c);
    if (it != n.label.end() && *it == c) return false;
    n.label.insert(it, c);
    s.trace.push_back(Step{rule, x, c, other});
    const Concept& k = kb_.concepts[c];
    int clash_with = -1;
    if (k.kind == CKind::Bottom) clash_with = c;
    else if (k.kind == CKind::Atom && has(n, kb_.atom_neg[k.atom])) clash_with = kb_.atom_neg[k.atom];
    else if (k.kind == CKind::NegAtom && has(n, kb_.atom_pos[k.atom])) clash_with = kb_.atom_pos[k.atom];
    if (clash_with >= 0) {
      s.trace.push_back(Step{Rule::Clash, x, c, clash_with});
      s.clash = true;
    }
    return true;
  }

  void choose(State& s, int x, int disjunct, int alt) { add(s, x, disjunct, Rule::Choice, alt); }

  static int find_edge(const State& s, int a, int b) {
    for (int e : s.nodes[a].edges) {
      const Edge& edge = s.edges[e];
      if (!edge.alive) continue;
      if ((edge.from == a && edge.to == b) || (edge.from == b && edge.to == a)) return e;
    }
    return -1;
  }

  static bool add_role(State& s, int a, int b, int role) {
    int e = find_edge(s, a, b);
    if (e < 0) {
      e = static_cast<int>(s.edges.size());
      s.edges.push_back(Edge{a, b, {role}, true});
      s.nodes[a].edges.push_back(e);
      if (a != b) s.nodes[b].edges.push_back(e);
      return true;
    }
    Edge& edge = s.edges[e];
    int r = edge.from == a ? role : inv(role);
    auto it = std::lower_bound(edge.roles.begin(), edge.roles.end(), r);
    if (it != edge.roles.end() && *it == r) {
      if (a == b && edge.from == a) {
        // a self-loop also carries the inverse reading
      }
      return false;
    }
    edge.roles.insert(it, r);
    return true;
  }

  std::vector<int> neighbours(const State& s, int x, int role) const {
    std::vector<int> out;
    for (int e : s.nodes[x].edges) {
      const Edge& edge = s.edges[e];
      if (!edge.alive) continue;
      bool hit = false;
      if (edge.from == x) {
        for (int r : edge.roles)
          if (kb_.is_sub(r, role)) {
            hit = true;
            if (!s.nodes[edge.to].alive) hit = false;
            if (hit) push_unique(out, edge.to);
            break;
          }
      }
      if (edge.to == x) {
        hit = false;
        for (int r : edge.roles)
          if (kb_.is_sub(inv(r), role)) {
            hit = true;
            break;
          }
        if (hit && s.nodes[edge.from].alive) push_unique(out, edge.from);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool directly_blocked(const State& s, int x) const {
    const Node& nx = s.nodes[x];
    int xp = nx.parent;
    std::vector<int> x_roles = roles_between(s, xp, x);
    for (int y = xp; y >= 0 && !s.nodes[y].root && s.nodes[y].parent >= 0; y = s.nodes[y].parent) {
      const Node& ny = s.nodes[y];
      int yp = ny.parent;
      if (ny.label == nx.label && s.nodes[yp].label == s.nodes[xp].label &&
          roles_between(s, yp, y) == x_roles)
        return true;
    }
    return false;
  }

  bool apply_node(State& s, int x) {
    bool changed = false;
    std::vector<int> snapshot = s.nodes[x].label;
    for (int c : snapshot) {
      const Concept& k = kb_.concepts[c];
      switch (k.kind) {
        case CKind::And:
          for (int kid : k.kids) {
            changed |= add(s, x, kid, Rule::And, -1);
            if (s.clash) return true;
          }
          break;
        case CKind::Atom:
          for (int u : kb_.unfold[k.atom]) {
            changed |= add(s, x, u, Rule::Unfold, -1);
            if (s.clash) return true;
          }
          break;
        case CKind::Only:
          for (int y : neighbours(s, x, k.role)) {
            changed |= add(s, y, k.kids[0], Rule::Forall, x);
            if (s.clash) return true;
          }
          break;
        default:
          break;
      }
    }
    return changed;
  }

  bool apply_edge(State& s, int e, const std::vector<int>& status) {
    bool changed = false;
    const int from = s.edges[e].from;
    const int to = s.edges[e].to;
    if (status[from] == 2 || status[to] == 2) return false;
    std::vector<int> roles = s.edges[e].roles;
    for (int r : roles) {
      for (int sup : kb_.supers[r]) {
        int p = sup / 2;
        bool forward = (sup & 1) == 0;
        int subj = forward ? from : to;
        int obj = forward ? to : from;
        for (int c : kb_.domain[p]) {
          changed |= add(s, subj, c, Rule::Domain, obj);
          if (s.clash) return true;
        }
        for (int c : kb_.range[p]) {
          changed |= add(s, obj, c, Rule::Range, subj);
          if (s.clash) return true;
        }
      }
    }
    return changed;
  }

  bool saturate(State& s) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> status = blocking(s);
      for (std::size_t x = 0; x < s.nodes.size(); ++x) {
        if (!s.nodes[x].alive || status[x] == 2) continue;
        changed |= apply_node(s, static_cast<int>(x));
        if (s.clash) return false;
      }
      for (std::size_t e = 0; e < s.edges.size(); ++e) {
        if (!s.edges[e].alive) continue;
        changed |= apply_edge(s, static_cast<int>(e), status);
        if (s.clash) return false;
      }
    }
    return true;
  }

  void prune(State& s, int root_of_subtree) {
    std::vector<int> stack{root_of_subtree};
    while (!stack.empty()) {
      int w = stack.back();
      stack.pop_back();
      Node& n = s.nodes[w];
      if (!n.alive) continue;
      n.alive = false;
      for (int e : n.edges) {
        Edge& edge = s.edges[e];
        if (!edge.alive) continue;
        int other = edge.from == w ? edge.to : edge.from;
        if (other != w && s.nodes[other].parent == w && !s.nodes[other].root) stack.push_back(other);
        edge.alive = false;
      }
    }
  }

  void merge(State& s, int x, int z, int y) {
    ++stats_.merges;
    s.trace.push_back(Step{Rule::Merge, z, -1, y});
    std::vector<int> moved = s.nodes[z].label;
    for (int c : moved) {
      add(s, y, c, Rule::Merge, z);
      if (s.clash) return;
    }
    if (s.nodes[z].root) {
      for (int ind : s.nodes[z].individuals) push_unique(s.nodes[y].individuals, ind);
      std::vector<int> z_edges = s.nodes[z].edges;
      for (int e : z_edges) {
        Edge edge = s.edges[e];
        if (!edge.alive) continue;
        int other = edge.from == z ? edge.to : edge.from;
        if (other != z && !s.nodes[other].root && s.nodes[other].parent == z) {
          prune(s, other);
          continue;
        }
        s.edges[e].alive = false;
        for (int r : edge.roles) {
          int a = edge.from == z ? y : edge.from;
          int b = edge.to == z ? y : edge.to;
          add_role(s, a, b, r);
        }
      }
      s.nodes[z].alive = false;
    } else {
      for (int r : roles_between(s, x, z)) add_role(s, x, y, r);
      prune(s, z);
    }
    s.nodes[z].merged_into = y;
  }

  bool apply_merge(State& s, const std::vector<int>& status) {
    for (std::size_t xi = 0; xi < s.nodes.size(); ++xi) {
      int x = static_cast<int>(xi);
      if (!s.nodes[x].alive || status[x] == 2) continue;
      for (int c : s.nodes[x].label) {
        const Concept& k = kb_.concepts[c];
        if (k.kind != CKind::AtMostOne) continue;
        std::vector<int> nb = neighbours(s, x, k.role);
        if (nb.size() < 2) continue;
        // survivor: a root if any, else x's parent, else the oldest node
        int y = -1;
        for (int n : nb)
          if (s.nodes[n].root) {
            y = n;
            break;
          }
        if (y < 0 && std::find(nb.begin(), nb.end(), s.nodes[x].parent) != nb.end())
          y = s.nodes[x].parent;
        if (y < 0) y = nb[0];
        int z = -1;
        for (int n : nb)
          if (n != y) {
            z = n;
            break;
          }
        merge(s, x, z, y);
        return true;
      }
    }
    return false;
  }

  bool find_branch(const State& s, const std::vector<int>& status, int& node, int& cid) const {
    for (std::size_t x = 0; x < s.nodes.size(); ++x) {
      if (!s.nodes[x].alive || status[x] == 2) continue;
      for (int c : s.nodes[x].label) {
        const Concept& k = kb_.concepts[c];
        if (k.kind != CKind::Or) continue;
        bool satisfied = std::any_of(k.kids.begin(), k.kids.end(),
                                     [&](int kid) { return has(s.nodes[x], kid); });
        if (!satisfied) {
          node = static_cast<int>(x);
          cid = c;
          return true;
        }
      }
    }
    return false;
  }

  bool apply_exists(State& s, const std::vector<int>& status) {
    bool created = false;
    std::size_t count = s.nodes.size();
    for (std::size_t xi = 0; xi < count; ++xi) {
      int x = static_cast<int>(xi);
      if (!s.nodes[x].alive || status[x] != 0) continue;
      std::vector<int> snapshot = s.nodes[x].label;
      for (int c : snapshot) {
        const Concept& k = kb_.concepts[c];
        if (k.kind != CKind::Some) continue;
        bool witnessed = false;
        for (int y : neighbours(s, x, k.role))
          if (has(s.nodes[y], k.kids[0])) {
            witnessed = true;
            break;
          }
        if (witnessed) continue;
        int y = static_cast<int>(s.nodes.size());
        s.trace.push_back(Step{Rule::Exists, y, c, x});
        new_node(s, x, false);
        if (s.clash) return true;
        add_role(s, x, y, k.role);
        add(s, y, k.kids[0], Rule::Exists, x);
        created = true;
        if (s.clash) return true;
      }
    }
    return created;
  }

  Outcome expand(State& s, int& branch_node, int& branch_cid) {
    for (;;) {
      if (!saturate(s)) return Outcome::Clash;
      std::vector<int> status = blocking(s);
      if (apply_merge(s, status)) {
        if (s.clash) return Outcome::Clash;
        continue;
      }
      if (find_branch(s, status, branch_node, branch_cid)) return Outcome::Branch;
      if (apply_exists(s, status)) {
        if (s.clash) return Outcome::Clash;
        continue;
      }
      return Outcome::Complete;
    }
  }

  const Kb& kb_;
  const Options& options_;
  Stats stats_;
};

std::vector<TraceStep> render_trace(const Kb& kb, const std::vector<Step>& steps) {
  std::vector<TraceStep> out;
  out.reserve(steps.size());
  for (const auto& st : steps)
    out.push_back(TraceStep{st.rule, st.node, st.cid >= 0 ? kb.concept_display(st.cid) : "",
                            st.other});
  return out;
}

CompletionModel extract_model(const Kb& kb, const Engine& engine, const State& s) {
  CompletionModel m;
  std::vector<int> status = engine.blocking(s);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const Node& n = s.nodes[i];
    if (!n.alive || status[i] == 2) continue;
    ModelNode mn;
    mn.id = static_cast<int>(i);
    for (int ind : n.individuals) mn.individuals.push_back(kb.individuals[ind].local());
    for (int c : n.label)
      if (kb.concepts[c].kind == CKind::Atom) mn.classes.push_back(kb.classes[kb.concepts[c].atom].local());
    std::sort(mn.classes.begin(), mn.classes.end());
    mn.blocked = status[i] == 1;
    m.nodes.push_back(std::move(mn));
  }
  for (const auto& e : s.edges) {
    if (!e.alive || status[e.from] == 2 || status[e.to] == 2) continue;
    ModelEdge me{e.from, e.to, {}};
    for (int r : e.roles) me.roles.push_back(kb.role_display(r));
    m.edges.push_back(std::move(me));
  }
  return m;
}

std::string describe_clash(const Kb& kb, const State& s) {
  if (s.trace.empty() || s.trace.back().rule != Rule::Clash) return "clash";
  const Step& st = s.trace.back();
  std::string where = "node " + std::to_string(st.node);
  const Node& n = s.nodes[st.node];
  if (!n.individuals.empty()) {
    where += " (";
    for (std::size_t i = 0; i < n.individuals.size(); ++i) {
      if (i) where += ", ";
      where += kb.individuals[n.individuals[i]].local();
    }
    where += ")";
  }
  std::string a = kb.concept_display(st.cid);
  std::string b = st.other >= 0 ? kb.concept_display(st.other) : a;
  if (kb.concepts[st.cid].kind == CKind::Bottom) return "Nothing at " + where;
  return a + " and " + b + " at " + where;
}

Verdict run_check(const Ontology& o, const Options& options) {
  Kb kb(o);
  Engine engine(kb, options);
  auto result = engine.run(nullptr);
  Verdict v;
  v.stats = result.stats;
  if (result.consistent) {
    v.status = OntologyStatus::consistent_coherent();
    v.model = extract_model(kb, engine, result.state);
  } else {
    v.status = OntologyStatus::inconsistent(describe_clash(kb, result.state));
    v.clash_trace = render_trace(kb, result.trace);
  }
  return v;
}

EntityName fresh_individual(const Ontology& o) {
  for (int i = 0;; ++i) {
    EntityName e = individual_name("urn:ontocc:probe#probe" + (i ? std::to_string(i) : std::string()));
    if (!o.signature().contains(e)) return e;
  }
}

}  // namespace

void check_fragment(const Ontology& o) { Kb kb(o); }

Verdict check_consistency(const Ontology& o, const Options& options) { return run_check(o, options); }

Satisfiability is_satisfiable(const Ontology& o, const ClassExpression& expr, const Options& options) {
  Axiom probe = Axiom::class_assertion(fresh_individual(o), expr);
  Verdict v = run_check(o.with_axioms(std::span<const Axiom>(&probe, 1)), options);
  bool sat = v.consistent();
  return {sat, std::move(v)};
}

Satisfiability is_class_satisfiable(const Ontology& o, const EntityName& cls, const Options& options) {
  if (cls.kind() != EntityKind::Class || !o.signature().contains(cls))
    throw UnknownClass("class '" + cls.iri() + "' is not in the signature");
  return is_satisfiable(o, ClassExpression::named(cls), options);
}

OntologyStatus classify_status(const Ontology& o, const Options& options) {
  Verdict base = check_consistency(o, options);
  if (!base.consistent()) return base.status;
  std::vector<EntityName> unsat;
  // classes occurring in the base model are satisfiable already
  std::set<std::string> witnessed;
  for (const auto& n : base.model->nodes)
    for (const auto& c : n.classes) witnessed.insert(c);
  const auto classes = o.classes();
  // local names can collide across namespaces; only trust unique ones
  std::map<std::string, int> local_count;
  for (const auto& cls : classes) ++local_count[cls.local()];
  for (const auto& cls : classes) {
    if (witnessed.contains(cls.local()) && local_count[cls.local()] == 1) continue;
    if (!is_class_satisfiable(o, cls, options).satisfiable) unsat.push_back(cls);
  }
  if (unsat.empty()) return OntologyStatus::consistent_coherent();
  return OntologyStatus::incoherent(std::move(unsat));
}

bool replay(const Ontology& o, const std::vector<TraceStep>& trace, const Options& options) {
  if (trace.empty() || trace.back().rule != Rule::Clash) return false;
  std::vector<int> guide;
  for (const auto& st : trace)
    if (st.rule == Rule::Choice) guide.push_back(st.other);
  Kb kb(o);
  Engine engine(kb, options);
  auto result = engine.run(&guide);
  if (result.consistent || result.guide_failed) return false;
  return render_trace(kb, result.trace) == trace;
}

}  // namespace ontocc::tableau
