#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontocc/model.hpp"

namespace ontocc::antipattern {

enum class PatternId : std::uint8_t {
  AIO,
  EID,
  OIL,
  OILWI,
  OILWPI,
  UE,
  UEWI_1,
  UEWI_2,
  UEWPI,
  UEWIP,
  SOSINETO,
  OOD,
  OOR,
  CSC,
};

inline constexpr std::array<PatternId, 14> kAllPatterns = {
    PatternId::AIO,    PatternId::EID,    PatternId::OIL,   PatternId::OILWI,    PatternId::OILWPI,
    PatternId::UE,     PatternId::UEWI_1, PatternId::UEWI_2, PatternId::UEWPI,   PatternId::UEWIP,
    PatternId::SOSINETO, PatternId::OOD,  PatternId::OOR,   PatternId::CSC,
};

std::string_view to_string(PatternId id);
std::optional<PatternId> pattern_from_string(std::string_view name);

// Patterns grouped by their underlying error.
enum class Family : std::uint8_t { AIO, EID, OIL, UE, SOSINETO, OO, CSC };

inline constexpr std::array<Family, 7> kAllFamilies = {Family::AIO, Family::EID, Family::OIL, Family::UE,
                                                       Family::SOSINETO, Family::OO, Family::CSC};

std::string_view to_string(Family family);  // "OIL*", "UE*", "OO*" for the groups
std::optional<Family> family_from_string(std::string_view name);
Family family_of(PatternId id);

// Status of the minimal instance of each pattern, as confirmed by the
// finite-model oracle. Patterns whose minimal instance is consistent and
// coherent (OIL, OILWI, OILWPI, UEWI_1, CSC) are structural only.
OntologyStatus::Kind expected_status(PatternId id);
bool is_semantic(PatternId id);

// Template variables are ordinary entity names in a reserved namespace.
inline constexpr std::string_view kVariableNamespace = "urn:ontocc:var#";
bool is_variable(const EntityName& e);
EntityName variable(EntityKind kind, std::string_view name);

struct PatternTemplate {
  PatternId id;
  std::vector<Axiom> schemata;
  // Variable pairs that must bind to different values: arguments of
  // disjointness, of named subclass/equivalence axioms and of sub-properties.
  std::vector<std::pair<std::string, std::string>> distinct;
  std::size_t arity() const { return schemata.size(); }
};

const std::vector<PatternTemplate>& templates();
const PatternTemplate& template_of(PatternId id);

// Variable assignment. Class and individual variables bind to names; role
// variables bind to role expressions so an inverse can stand for R.
struct Substitution {
  std::map<std::string, EntityName> entities;
  std::map<std::string, RoleExpression> roles;
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

Axiom instantiate(const Axiom& schema, const Substitution& s);

struct MatchBinding {
  Substitution substitution;
  std::vector<std::size_t> matched_schemata;
  std::vector<Axiom> matched;  // ontology axioms, parallel to matched_schemata
  std::vector<std::size_t> missing_schemata;
  std::vector<Axiom> missing;  // instantiated, absent from the ontology
};

struct Match {
  PatternId id;
  MatchBinding binding;
};

// Complete instances, ordered by pattern then by binding. Instances that use
// the same set of ontology axioms are reported once.
std::vector<Match> detect(const Ontology& o);
std::vector<Match> detect(const Ontology& o, PatternId id);
bool contains_pattern(const Ontology& o, PatternId id);

// Partial instances missing between 1 and max_missing axioms. limit > 0 stops
// the enumeration after that many sites.
std::vector<MatchBinding> find_injection_sites(const Ontology& o, PatternId id, std::size_t max_missing,
                                               std::size_t limit = 0);

class NoSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InjectionReport {
  PatternId pattern;
  std::vector<Axiom> injected_axioms;
  MatchBinding binding;
  std::string source_module;
};

struct InjectOptions {
  std::size_t max_missing = 2;
  // Cap on enumerated two-axiom sites; one-axiom sites are always complete.
  std::size_t two_axiom_site_limit = 20000;
};

// Appends the missing axioms of one site. One-axiom sites are preferred; the
// site is then picked uniformly with the given seed.
std::pair<Ontology, InjectionReport> inject(const Ontology& o, PatternId id, std::uint64_t seed,
                                            const InjectOptions& options = {});

}  // namespace ontocc::antipattern
