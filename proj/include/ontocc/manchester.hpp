#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontocc/model.hpp"

namespace ontocc::manchester {

inline constexpr std::string_view kDefaultNamespace = "http://example.org/ontocc#";
inline constexpr std::string_view kOwlNamespace = "http://www.w3.org/2002/07/owl#";

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

struct ParseOptions {
  // Skip AnnotationProperty/DataProperty/Datatype frames and Annotations:
  // clauses instead of rejecting them. Skipped items are counted.
  bool drop_unsupported = false;
  std::size_t* dropped = nullptr;
};

// Error positions point just past the offending lexeme, so a typo is never
// reported before the place it occurs.
//
// Parses the Manchester fragment: Prefix:, Ontology:, Class: (SubClassOf:,
// EquivalentTo:, DisjointWith:), ObjectProperty: (Domain:, Range:,
// SubPropertyOf:, InverseOf:), Individual: (Types:, Facts:). A frame with no
// clauses declares its subject; clauses do not imply declarations.
Ontology parse(std::string_view text, const ParseOptions& options = {});

// Deterministic text. Axioms are written in order; consecutive axioms about
// the same frame subject share one frame header.
std::string serialize(const Ontology& o);

// Surface form of a name under the ontology's prefixes.
std::string render_name(const EntityName& name, const std::vector<Prefix>& prefixes);
std::string render_expression(const ClassExpression& expr, const std::vector<Prefix>& prefixes);

Ontology read_file(const std::filesystem::path& path, const ParseOptions& options = {});
void write_file(const std::filesystem::path& path, const Ontology& o);

}  // namespace ontocc::manchester
