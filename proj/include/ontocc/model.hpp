#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ontocc {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EntityKind : std::uint8_t { Class, ObjectProperty, Individual };

std::string_view to_string(EntityKind kind);

// Text after the last '#', '/' or ':' of an IRI.
std::string local_name_of(std::string_view iri);

// A named entity. Identity is (kind, iri); the local name is display only.
class EntityName {
 public:
  EntityName(EntityKind kind, std::string iri);
  EntityName(EntityKind kind, std::string iri, std::string local);

  EntityKind kind() const { return kind_; }
  const std::string& iri() const { return iri_; }
  const std::string& local() const { return local_; }

  friend bool operator==(const EntityName& a, const EntityName& b) {
    return a.kind_ == b.kind_ && a.iri_ == b.iri_;
  }
  friend std::strong_ordering operator<=>(const EntityName& a, const EntityName& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.iri_ <=> b.iri_;
  }

 private:
  EntityKind kind_;
  std::string iri_;
  std::string local_;
};

EntityName class_name(std::string iri);
EntityName property_name(std::string iri);
EntityName individual_name(std::string iri);

// R or R^-1 over a named object property. Double inversion collapses.
class RoleExpression {
 public:
  explicit RoleExpression(EntityName property, bool inverse = false);

  const EntityName& property() const { return property_; }
  bool is_inverse() const { return inverse_; }
  RoleExpression inverse() const { return RoleExpression(property_, !inverse_); }

  friend bool operator==(const RoleExpression&, const RoleExpression&) = default;
  friend std::strong_ordering operator<=>(const RoleExpression& a, const RoleExpression& b) {
    if (auto c = a.property_ <=> b.property_; c != 0) return c;
    return a.inverse_ <=> b.inverse_;
  }

 private:
  EntityName property_;
  bool inverse_;
};

enum class ExprKind : std::uint8_t { Named, Top, Bottom, Not, And, Or, Some, Only, AtMost };

// Immutable class-expression tree with structural equality and ordering.
class ClassExpression {
 public:
  static ClassExpression named(EntityName cls);
  static ClassExpression top();
  static ClassExpression bottom();
  static ClassExpression negation(ClassExpression operand);
  static ClassExpression conjunction(std::vector<ClassExpression> operands);
  static ClassExpression disjunction(std::vector<ClassExpression> operands);
  static ClassExpression some(RoleExpression role, ClassExpression filler);
  static ClassExpression only(RoleExpression role, ClassExpression filler);
  static ClassExpression at_most(std::uint32_t n, RoleExpression role, ClassExpression filler);

  ExprKind kind() const;
  bool is_named() const { return kind() == ExprKind::Named; }
  // Valid for Named only.
  const EntityName& name() const;
  // Valid for Some/Only/AtMost.
  const RoleExpression& role() const;
  std::uint32_t cardinality() const;
  // Not: one operand; And/Or: >= 2; Some/Only/AtMost: the filler.
  std::span<const ClassExpression> operands() const;
  const ClassExpression& operand() const { return operands().front(); }

  friend bool operator==(const ClassExpression& a, const ClassExpression& b) {
    return compare(a, b) == 0;
  }
  friend std::strong_ordering operator<=>(const ClassExpression& a, const ClassExpression& b) {
    return compare(a, b);
  }

 private:
  struct Node;
  explicit ClassExpression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static std::strong_ordering compare(const ClassExpression& a, const ClassExpression& b);

  std::shared_ptr<const Node> node_;
};

// Named class leaves of an expression, in first-occurrence order.
std::vector<EntityName> named_classes_in(const ClassExpression& expr);

// Compact display form using local names, e.g. "r some (A and not B)".
std::string display(const ClassExpression& expr);
std::string display(const RoleExpression& role);

// Negation normal form. Negation ends up directly above named classes, with
// one exception: the fragment has no at-least constructor, so not(max n R F)
// is kept as a negated cardinality with an NNF filler.
ClassExpression nnf(const ClassExpression& expr);

namespace axioms {

struct SubClassOf {
  ClassExpression sub;
  ClassExpression sup;
  friend auto operator<=>(const SubClassOf&, const SubClassOf&) = default;
};
struct EquivalentClasses {
  ClassExpression first;
  ClassExpression second;
  friend auto operator<=>(const EquivalentClasses&, const EquivalentClasses&) = default;
};
struct DisjointClasses {
  EntityName first;
  EntityName second;
  friend auto operator<=>(const DisjointClasses&, const DisjointClasses&) = default;
};
struct SubPropertyOf {
  RoleExpression sub;
  RoleExpression sup;
  friend auto operator<=>(const SubPropertyOf&, const SubPropertyOf&) = default;
};
struct InverseProperties {
  EntityName first;
  EntityName second;
  friend auto operator<=>(const InverseProperties&, const InverseProperties&) = default;
};
struct Domain {
  EntityName property;
  EntityName cls;
  friend auto operator<=>(const Domain&, const Domain&) = default;
};
struct Range {
  EntityName property;
  EntityName cls;
  friend auto operator<=>(const Range&, const Range&) = default;
};
struct ClassAssertion {
  EntityName individual;
  ClassExpression type;
  friend auto operator<=>(const ClassAssertion&, const ClassAssertion&) = default;
};
struct PropertyAssertion {
  EntityName property;
  EntityName subject;
  EntityName object;
  friend auto operator<=>(const PropertyAssertion&, const PropertyAssertion&) = default;
};
struct Declaration {
  EntityName entity;
  friend auto operator<=>(const Declaration&, const Declaration&) = default;
};

}  // namespace axioms

enum class AxiomKind : std::uint8_t {
  SubClassOf,
  EquivalentClasses,
  DisjointClasses,
  SubPropertyOf,
  InverseProperties,
  Domain,
  Range,
  ClassAssertion,
  PropertyAssertion,
  Declaration,
};

class Axiom {
 public:
  using Data = std::variant<axioms::SubClassOf, axioms::EquivalentClasses, axioms::DisjointClasses,
                            axioms::SubPropertyOf, axioms::InverseProperties, axioms::Domain,
                            axioms::Range, axioms::ClassAssertion, axioms::PropertyAssertion,
                            axioms::Declaration>;

  static Axiom subclass_of(ClassExpression sub, ClassExpression sup);
  static Axiom equivalent(ClassExpression first, ClassExpression second);
  static Axiom disjoint(EntityName first, EntityName second);
  static Axiom subproperty_of(RoleExpression sub, RoleExpression sup);
  static Axiom inverse_properties(EntityName first, EntityName second);
  static Axiom domain(EntityName property, EntityName cls);
  static Axiom range(EntityName property, EntityName cls);
  static Axiom class_assertion(EntityName individual, ClassExpression type);
  static Axiom property_assertion(EntityName property, EntityName subject, EntityName object);
  static Axiom declaration(EntityName entity);

  AxiomKind kind() const { return static_cast<AxiomKind>(data_.index()); }
  const Data& data() const { return data_; }
  template <class T>
  const T& as() const { return std::get<T>(data_); }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&data_); }

  friend bool operator==(const Axiom&, const Axiom&) = default;
  friend auto operator<=>(const Axiom& a, const Axiom& b) { return a.data_ <=> b.data_; }

 private:
  explicit Axiom(Data data) : data_(std::move(data)) {}
  Data data_;
};

// One-line form with local names, e.g. "c1 SubClassOf r some c2".
std::string display(const Axiom& axiom);

// Every entity referenced by the axiom, including the declared entity.
std::vector<EntityName> entities_of(const Axiom& axiom);

struct Prefix {
  std::string label;  // without the trailing ':'; empty for the default prefix
  std::string iri;
  friend bool operator==(const Prefix&, const Prefix&) = default;
};

class Ontology {
 public:
  Ontology() = default;
  Ontology(std::string id, std::vector<Axiom> axioms, std::vector<Prefix> prefixes = {});

  const std::string& id() const { return id_; }
  const std::vector<Axiom>& axioms() const { return axioms_; }
  const std::vector<Prefix>& prefixes() const { return prefixes_; }
  const std::set<EntityName>& signature() const { return signature_; }
  bool empty() const { return axioms_.empty(); }

  std::vector<EntityName> classes() const;
  std::vector<EntityName> properties() const;
  std::vector<EntityName> individuals() const;
  bool contains(const Axiom& axiom) const;

  Ontology with_axioms(std::span<const Axiom> extra) const;
  Ontology with_id(std::string id) const;

 private:
  std::string id_;
  std::vector<Axiom> axioms_;
  std::vector<Prefix> prefixes_;
  std::set<EntityName> signature_;
};

// Axiom multiset equality; ids and prefixes are ignored.
bool same_axioms(const Ontology& a, const Ontology& b);

std::set<EntityName> signature_of(const Ontology& o);

struct AxiomPartition {
  std::vector<Axiom> abox;
  std::vector<Axiom> tbox;
  std::vector<Axiom> rbox;
};

AxiomPartition partition_abox_tbox_rbox(const Ontology& o);

class OntologyStatus {
 public:
  enum class Kind : std::uint8_t { ConsistentCoherent, Incoherent, Inconsistent };

  static OntologyStatus consistent_coherent();
  static OntologyStatus incoherent(std::vector<EntityName> unsatisfiable);
  static OntologyStatus inconsistent(std::string clash);

  Kind kind() const { return kind_; }
  bool is_consistent_coherent() const { return kind_ == Kind::ConsistentCoherent; }
  const std::vector<EntityName>& unsatisfiable() const { return unsat_; }
  const std::string& clash() const { return clash_; }

  friend bool operator==(const OntologyStatus&, const OntologyStatus&) = default;

 private:
  OntologyStatus(Kind kind, std::vector<EntityName> unsat, std::string clash)
      : kind_(kind), unsat_(std::move(unsat)), clash_(std::move(clash)) {}
  Kind kind_;
  std::vector<EntityName> unsat_;
  std::string clash_;
};

// "consistent", "incoherent", "inconsistent".
std::string_view to_string(OntologyStatus::Kind kind);

}  // namespace ontocc
