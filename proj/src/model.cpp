#include "ontocc/model.hpp"

#include <algorithm>
#include <optional>

namespace ontocc {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Class: return "Class";
    case EntityKind::ObjectProperty: return "ObjectProperty";
    case EntityKind::Individual: return "Individual";
  }
  return "?";
}

std::string local_name_of(std::string_view iri) {
  auto pos = iri.find_last_of("#/:");
  if (pos == std::string_view::npos) return std::string(iri);
  return std::string(iri.substr(pos + 1));
}

namespace {

void check_local(const std::string& local, const std::string& iri) {
  if (local.empty()) throw ModelError("entity '" + iri + "' has an empty local name");
  if (local.find_first_of("#/:") != std::string::npos)
    throw ModelError("local name '" + local + "' contains a namespace separator");
}

}  // namespace

EntityName::EntityName(EntityKind kind, std::string iri)
    : kind_(kind), iri_(std::move(iri)), local_(local_name_of(iri_)) {
  check_local(local_, iri_);
}

EntityName::EntityName(EntityKind kind, std::string iri, std::string local)
    : kind_(kind), iri_(std::move(iri)), local_(std::move(local)) {
  check_local(local_, iri_);
}

EntityName class_name(std::string iri) { return {EntityKind::Class, std::move(iri)}; }
EntityName property_name(std::string iri) { return {EntityKind::ObjectProperty, std::move(iri)}; }
EntityName individual_name(std::string iri) { return {EntityKind::Individual, std::move(iri)}; }

RoleExpression::RoleExpression(EntityName property, bool inverse)
    : property_(std::move(property)), inverse_(inverse) {
  if (property_.kind() != EntityKind::ObjectProperty)
    throw ModelError("role over non-property '" + property_.iri() + "'");
}

// ---------------------------------------------------------------------------
// ClassExpression

struct ClassExpression::Node {
  ExprKind kind;
  std::optional<EntityName> name;
  std::optional<RoleExpression> role;
  std::uint32_t cardinality = 0;
  std::vector<ClassExpression> operands;
};

ClassExpression ClassExpression::named(EntityName cls) {
  if (cls.kind() != EntityKind::Class)
    throw ModelError("named class expression over non-class '" + cls.iri() + "'");
  return ClassExpression(std::make_shared<const Node>(Node{ExprKind::Named, std::move(cls), {}, 0, {}}));
}

ClassExpression ClassExpression::top() {
  static const ClassExpression t(std::make_shared<const Node>(Node{ExprKind::Top, {}, {}, 0, {}}));
  return t;
}

ClassExpression ClassExpression::bottom() {
  static const ClassExpression b(std::make_shared<const Node>(Node{ExprKind::Bottom, {}, {}, 0, {}}));
  return b;
}

ClassExpression ClassExpression::negation(ClassExpression operand) {
  return ClassExpression(
      std::make_shared<const Node>(Node{ExprKind::Not, {}, {}, 0, {std::move(operand)}}));
}

ClassExpression ClassExpression::conjunction(std::vector<ClassExpression> operands) {
  if (operands.size() < 2) throw ModelError("conjunction needs at least two operands");
  return ClassExpression(
      std::make_shared<const Node>(Node{ExprKind::And, {}, {}, 0, std::move(operands)}));
}

ClassExpression ClassExpression::disjunction(std::vector<ClassExpression> operands) {
  if (operands.size() < 2) throw ModelError("disjunction needs at least two operands");
  return ClassExpression(
      std::make_shared<const Node>(Node{ExprKind::Or, {}, {}, 0, std::move(operands)}));
}

ClassExpression ClassExpression::some(RoleExpression role, ClassExpression filler) {
  return ClassExpression(std::make_shared<const Node>(
      Node{ExprKind::Some, {}, std::move(role), 0, {std::move(filler)}}));
}

ClassExpression ClassExpression::only(RoleExpression role, ClassExpression filler) {
  return ClassExpression(std::make_shared<const Node>(
      Node{ExprKind::Only, {}, std::move(role), 0, {std::move(filler)}}));
}

ClassExpression ClassExpression::at_most(std::uint32_t n, RoleExpression role,
                                         ClassExpression filler) {
  return ClassExpression(std::make_shared<const Node>(
      Node{ExprKind::AtMost, {}, std::move(role), n, {std::move(filler)}}));
}

ExprKind ClassExpression::kind() const { return node_->kind; }

const EntityName& ClassExpression::name() const {
  if (!node_->name) throw ModelError("name() on a non-named class expression");
  return *node_->name;
}

const RoleExpression& ClassExpression::role() const {
  if (!node_->role) throw ModelError("role() on a non-restriction class expression");
  return *node_->role;
}

std::uint32_t ClassExpression::cardinality() const { return node_->cardinality; }

std::span<const ClassExpression> ClassExpression::operands() const { return node_->operands; }

std::strong_ordering ClassExpression::compare(const ClassExpression& a, const ClassExpression& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (x.name && y.name) {
    if (auto c = *x.name <=> *y.name; c != 0) return c;
  }
  if (x.role && y.role) {
    if (auto c = *x.role <=> *y.role; c != 0) return c;
  }
  if (auto c = x.cardinality <=> y.cardinality; c != 0) return c;
  if (auto c = x.operands.size() <=> y.operands.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.operands.size(); ++i) {
    if (auto c = compare(x.operands[i], y.operands[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

void collect_named(const ClassExpression& e, std::vector<EntityName>& out) {
  if (e.kind() == ExprKind::Named) {
    if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
    return;
  }
  for (const auto& child : e.operands()) collect_named(child, out);
}

ClassExpression nnf_negated(const ClassExpression& e);

ClassExpression nnf_positive(const ClassExpression& e) {
  switch (e.kind()) {
    case ExprKind::Named:
    case ExprKind::Top:
    case ExprKind::Bottom:
      return e;
    case ExprKind::Not:
      return nnf_negated(e.operand());
    case ExprKind::And:
    case ExprKind::Or: {
      std::vector<ClassExpression> ops;
      for (const auto& op : e.operands()) ops.push_back(nnf_positive(op));
      return e.kind() == ExprKind::And ? ClassExpression::conjunction(std::move(ops))
                                       : ClassExpression::disjunction(std::move(ops));
    }
    case ExprKind::Some:
      return ClassExpression::some(e.role(), nnf_positive(e.operand()));
    case ExprKind::Only:
      return ClassExpression::only(e.role(), nnf_positive(e.operand()));
    case ExprKind::AtMost:
      return ClassExpression::at_most(e.cardinality(), e.role(), nnf_positive(e.operand()));
  }
  return e;
}

ClassExpression nnf_negated(const ClassExpression& e) {
  switch (e.kind()) {
    case ExprKind::Named:
      return ClassExpression::negation(e);
    case ExprKind::Top:
      return ClassExpression::bottom();
    case ExprKind::Bottom:
      return ClassExpression::top();
    case ExprKind::Not:
      return nnf_positive(e.operand());
    case ExprKind::And:
    case ExprKind::Or: {
      std::vector<ClassExpression> ops;
      for (const auto& op : e.operands()) ops.push_back(nnf_negated(op));
      return e.kind() == ExprKind::And ? ClassExpression::disjunction(std::move(ops))
                                       : ClassExpression::conjunction(std::move(ops));
    }
    case ExprKind::Some:
      return ClassExpression::only(e.role(), nnf_negated(e.operand()));
    case ExprKind::Only:
      return ClassExpression::some(e.role(), nnf_negated(e.operand()));
    case ExprKind::AtMost:
      return ClassExpression::negation(
          ClassExpression::at_most(e.cardinality(), e.role(), nnf_positive(e.operand())));
  }
  return e;
}

void display_into(const ClassExpression& e, std::string& out, bool wrap) {
  bool atomic = e.kind() == ExprKind::Named || e.kind() == ExprKind::Top || e.kind() == ExprKind::Bottom;
  if (wrap && !atomic) out += '(';
  switch (e.kind()) {
    case ExprKind::Named: out += e.name().local(); break;
    case ExprKind::Top: out += "Thing"; break;
    case ExprKind::Bottom: out += "Nothing"; break;
    case ExprKind::Not:
      out += "not ";
      display_into(e.operand(), out, true);
      break;
    case ExprKind::And:
    case ExprKind::Or: {
      bool first = true;
      for (const auto& op : e.operands()) {
        if (!first) out += e.kind() == ExprKind::And ? " and " : " or ";
        first = false;
        display_into(op, out, true);
      }
      break;
    }
    case ExprKind::Some:
    case ExprKind::Only:
      out += display(e.role());
      out += e.kind() == ExprKind::Some ? " some " : " only ";
      display_into(e.operand(), out, true);
      break;
    case ExprKind::AtMost:
      out += display(e.role()) + " max " + std::to_string(e.cardinality()) + " ";
      display_into(e.operand(), out, true);
      break;
  }
  if (wrap && !atomic) out += ')';
}

}  // namespace

std::string display(const RoleExpression& role) {
  return role.is_inverse() ? "inverse " + role.property().local() : role.property().local();
}

std::string display(const ClassExpression& expr) {
  std::string out;
  display_into(expr, out, false);
  return out;
}

std::vector<EntityName> named_classes_in(const ClassExpression& expr) {
  std::vector<EntityName> out;
  collect_named(expr, out);
  return out;
}

ClassExpression nnf(const ClassExpression& expr) { return nnf_positive(expr); }

// ---------------------------------------------------------------------------
// Axiom

namespace {

void require_kind(const EntityName& e, EntityKind kind, const char* what) {
  if (e.kind() != kind)
    throw ModelError(std::string(what) + " expects a " + std::string(to_string(kind)) +
                     ", got '" + e.iri() + "'");
}

}  // namespace

Axiom Axiom::subclass_of(ClassExpression sub, ClassExpression sup) {
  return Axiom(axioms::SubClassOf{std::move(sub), std::move(sup)});
}

Axiom Axiom::equivalent(ClassExpression first, ClassExpression second) {
  return Axiom(axioms::EquivalentClasses{std::move(first), std::move(second)});
}

Axiom Axiom::disjoint(EntityName first, EntityName second) {
  require_kind(first, EntityKind::Class, "DisjointClasses");
  require_kind(second, EntityKind::Class, "DisjointClasses");
  if (first == second) throw ModelError("DisjointClasses arguments must be distinct: " + first.iri());
  return Axiom(axioms::DisjointClasses{std::move(first), std::move(second)});
}

Axiom Axiom::subproperty_of(RoleExpression sub, RoleExpression sup) {
  // inv(R) <= S is stored as R <= inv(S) so the sub-role is always named.
  if (sub.is_inverse()) {
    sub = sub.inverse();
    sup = sup.inverse();
  }
  return Axiom(axioms::SubPropertyOf{std::move(sub), std::move(sup)});
}

Axiom Axiom::inverse_properties(EntityName first, EntityName second) {
  require_kind(first, EntityKind::ObjectProperty, "InverseProperties");
  require_kind(second, EntityKind::ObjectProperty, "InverseProperties");
  return Axiom(axioms::InverseProperties{std::move(first), std::move(second)});
}

Axiom Axiom::domain(EntityName property, EntityName cls) {
  require_kind(property, EntityKind::ObjectProperty, "Domain");
  require_kind(cls, EntityKind::Class, "Domain");
  return Axiom(axioms::Domain{std::move(property), std::move(cls)});
}

Axiom Axiom::range(EntityName property, EntityName cls) {
  require_kind(property, EntityKind::ObjectProperty, "Range");
  require_kind(cls, EntityKind::Class, "Range");
  return Axiom(axioms::Range{std::move(property), std::move(cls)});
}

Axiom Axiom::class_assertion(EntityName individual, ClassExpression type) {
  require_kind(individual, EntityKind::Individual, "ClassAssertion");
  return Axiom(axioms::ClassAssertion{std::move(individual), std::move(type)});
}

Axiom Axiom::property_assertion(EntityName property, EntityName subject, EntityName object) {
  require_kind(property, EntityKind::ObjectProperty, "PropertyAssertion");
  require_kind(subject, EntityKind::Individual, "PropertyAssertion");
  require_kind(object, EntityKind::Individual, "PropertyAssertion");
  return Axiom(axioms::PropertyAssertion{std::move(property), std::move(subject), std::move(object)});
}

Axiom Axiom::declaration(EntityName entity) { return Axiom(axioms::Declaration{std::move(entity)}); }

std::string display(const Axiom& axiom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          return display(a.sub) + " SubClassOf " + display(a.sup);
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          return display(a.first) + " EquivalentTo " + display(a.second);
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
          return a.first.local() + " DisjointWith " + a.second.local();
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          return display(a.sub) + " SubPropertyOf " + display(a.sup);
        } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
          return a.first.local() + " InverseOf " + a.second.local();
        } else if constexpr (std::is_same_v<T, axioms::Domain>) {
          return a.property.local() + " Domain " + a.cls.local();
        } else if constexpr (std::is_same_v<T, axioms::Range>) {
          return a.property.local() + " Range " + a.cls.local();
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          return a.individual.local() + " Type " + display(a.type);
        } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
          return a.subject.local() + " " + a.property.local() + " " + a.object.local();
        } else {
          return std::string(to_string(a.entity.kind())) + " " + a.entity.local();
        }
      },
      axiom.data());
}

namespace {

void add_unique(std::vector<EntityName>& out, const EntityName& e) {
  if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
}

void collect_entities(const ClassExpression& e, std::vector<EntityName>& out) {
  switch (e.kind()) {
    case ExprKind::Named:
      add_unique(out, e.name());
      return;
    case ExprKind::Some:
    case ExprKind::Only:
    case ExprKind::AtMost:
      add_unique(out, e.role().property());
      break;
    default:
      break;
  }
  for (const auto& child : e.operands()) collect_entities(child, out);
}

}  // namespace

std::vector<EntityName> entities_of(const Axiom& axiom) {
  std::vector<EntityName> out;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          collect_entities(a.sub, out);
          collect_entities(a.sup, out);
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          collect_entities(a.first, out);
          collect_entities(a.second, out);
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses> ||
                             std::is_same_v<T, axioms::InverseProperties>) {
          add_unique(out, a.first);
          add_unique(out, a.second);
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          add_unique(out, a.sub.property());
          add_unique(out, a.sup.property());
        } else if constexpr (std::is_same_v<T, axioms::Domain> || std::is_same_v<T, axioms::Range>) {
          add_unique(out, a.property);
          add_unique(out, a.cls);
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          add_unique(out, a.individual);
          collect_entities(a.type, out);
        } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
          add_unique(out, a.property);
          add_unique(out, a.subject);
          add_unique(out, a.object);
        } else {
          add_unique(out, a.entity);
        }
      },
      axiom.data());
  return out;
}

// ---------------------------------------------------------------------------
// Ontology

Ontology::Ontology(std::string id, std::vector<Axiom> axioms, std::vector<Prefix> prefixes)
    : id_(std::move(id)), axioms_(std::move(axioms)), prefixes_(std::move(prefixes)) {
  for (const auto& ax : axioms_) {
    for (auto& e : entities_of(ax)) signature_.insert(std::move(e));
  }
}

namespace {

std::vector<EntityName> of_kind(const std::set<EntityName>& sig, EntityKind kind) {
  std::vector<EntityName> out;
  for (const auto& e : sig)
    if (e.kind() == kind) out.push_back(e);
  return out;
}

}  // namespace

std::vector<EntityName> Ontology::classes() const { return of_kind(signature_, EntityKind::Class); }
std::vector<EntityName> Ontology::properties() const {
  return of_kind(signature_, EntityKind::ObjectProperty);
}
std::vector<EntityName> Ontology::individuals() const {
  return of_kind(signature_, EntityKind::Individual);
}

bool Ontology::contains(const Axiom& axiom) const {
  return std::find(axioms_.begin(), axioms_.end(), axiom) != axioms_.end();
}

Ontology Ontology::with_axioms(std::span<const Axiom> extra) const {
  std::vector<Axiom> all = axioms_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Ontology(id_, std::move(all), prefixes_);
}

Ontology Ontology::with_id(std::string id) const { return Ontology(std::move(id), axioms_, prefixes_); }

bool same_axioms(const Ontology& a, const Ontology& b) {
  if (a.axioms().size() != b.axioms().size()) return false;
  std::vector<Axiom> x = a.axioms();
  std::vector<Axiom> y = b.axioms();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::set<EntityName> signature_of(const Ontology& o) { return o.signature(); }

AxiomPartition partition_abox_tbox_rbox(const Ontology& o) {
  AxiomPartition p;
  for (const auto& ax : o.axioms()) {
    switch (ax.kind()) {
      case AxiomKind::Declaration:
        break;
      case AxiomKind::ClassAssertion:
      case AxiomKind::PropertyAssertion:
        p.abox.push_back(ax);
        break;
      case AxiomKind::SubPropertyOf:
      case AxiomKind::InverseProperties:
        p.rbox.push_back(ax);
        break;
      default:
        p.tbox.push_back(ax);
        break;
    }
  }
  return p;
}

OntologyStatus OntologyStatus::consistent_coherent() { return {Kind::ConsistentCoherent, {}, {}}; }

OntologyStatus OntologyStatus::incoherent(std::vector<EntityName> unsatisfiable) {
  if (unsatisfiable.empty()) throw ModelError("incoherent status needs at least one class");
  std::sort(unsatisfiable.begin(), unsatisfiable.end());
  unsatisfiable.erase(std::unique(unsatisfiable.begin(), unsatisfiable.end()), unsatisfiable.end());
  return {Kind::Incoherent, std::move(unsatisfiable), {}};
}

OntologyStatus OntologyStatus::inconsistent(std::string clash) {
  return {Kind::Inconsistent, {}, std::move(clash)};
}

std::string_view to_string(OntologyStatus::Kind kind) {
  switch (kind) {
    case OntologyStatus::Kind::ConsistentCoherent: return "consistent";
    case OntologyStatus::Kind::Incoherent: return "incoherent";
    case OntologyStatus::Kind::Inconsistent: return "inconsistent";
  }
  return "?";
}

}  // namespace ontocc
