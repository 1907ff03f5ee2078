#include "ontocc/manchester.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace ontocc::manchester {

ParseError::ParseError(int line, int column, std::string expected, std::string found)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": expected " + expected + ", found '" + found + "'"),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Word, Keyword, Iri, Number, Literal, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  // just past the lexeme; errors are reported here
  int end_line = 0;
  int end_column = 0;
};

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80;
}

bool is_simple_local(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!is_word_char(c) || c == ':') return false;
  return true;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

constexpr std::string_view kFrameKeywords[] = {"Class:", "ObjectProperty:", "Individual:",
                                               "Prefix:", "Ontology:"};
constexpr std::string_view kIgnorableFrames[] = {"AnnotationProperty:", "DataProperty:",
                                                 "Datatype:"};
constexpr std::string_view kClauseKeywords[] = {
    "SubClassOf:", "EquivalentTo:",  "DisjointWith:", "Domain:", "Range:",
    "SubPropertyOf:", "InverseOf:", "Types:",        "Facts:",  "Annotations:"};
constexpr std::string_view kReserved[] = {"some", "only", "and",     "or",    "not",
                                          "max",  "inverse", "Thing", "Nothing"};

template <std::size_t N>
bool one_of(std::string_view s, const std::string_view (&set)[N]) {
  return std::find(std::begin(set), std::end(set), s) != std::end(set);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "end of input", line_, col_, line_, col_});
        return out;
      }
      int line = line_, col = col_;
      char c = text_[pos_];
      if (c == '"') {
        out.push_back({Tok::Literal, literal(), line, col});
      } else if (c == '(') {
        advance();
        out.push_back({Tok::LParen, "(", line, col});
      } else if (c == ')') {
        advance();
        out.push_back({Tok::RParen, ")", line, col});
      } else if (c == ',') {
        advance();
        out.push_back({Tok::Comma, ",", line, col});
      } else if (c == '<') {
        advance();
        std::string iri;
        while (pos_ < text_.size() && text_[pos_] != '>' && text_[pos_] != '\n' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
          iri += text_[pos_];
          advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '>')
          throw ParseError(line_, col_, "'>' closing the IRI",
                           pos_ >= text_.size() ? "end of input" : std::string(1, text_[pos_]));
        advance();
        out.push_back({Tok::Iri, iri, line, col});
      } else if (is_word_char(static_cast<unsigned char>(c))) {
        std::string word;
        while (pos_ < text_.size() && is_word_char(static_cast<unsigned char>(text_[pos_]))) {
          word += text_[pos_];
          advance();
        }
        Tok kind = Tok::Word;
        if (all_digits(word)) kind = Tok::Number;
        else if (word.back() == ':') kind = Tok::Keyword;
        out.push_back({kind, word, line, col});
      } else {
        throw ParseError(line, col, "a name, keyword or punctuation", std::string(1, c));
      }
      out.back().end_line = line_;
      out.back().end_column = col_;
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  // "text" with backslash escapes, then an optional @lang or ^^datatype.
  // Only annotation values use literals, and those are skipped.
  std::string literal() {
    int line = line_, col = col_;
    std::string text(1, '"');
    advance();
    for (;;) {
      if (pos_ >= text_.size()) throw ParseError(line, col, "a closing '\"'", "end of input");
      char c = text_[pos_];
      text += c;
      advance();
      if (c == '"') break;
      if (c == '\\' && pos_ < text_.size()) {
        text += text_[pos_];
        advance();
      }
    }
    if (pos_ < text_.size() && text_[pos_] == '@') {
      text += '@';
      advance();
    } else if (text_.substr(pos_).starts_with("^^")) {
      text += "^^";
      advance();
      advance();
    } else {
      return text;
    }
    while (pos_ < text_.size() && is_word_char(static_cast<unsigned char>(text_[pos_]))) {
      text += text_[pos_];
      advance();
    }
    return text;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

constexpr int kMaxDepth = 256;

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : toks_(std::move(tokens)), options_(options) {}

  Ontology run() {
    try {
      return run_unchecked();
    } catch (const ModelError& e) {
      fail(peek(), std::string("a well-formed axiom (") + e.what() + ")");
    }
  }

 private:
  Ontology run_unchecked() {
    while (peek().kind == Tok::Keyword && peek().text == "Prefix:") parse_prefix();
    if (peek().kind == Tok::Keyword && peek().text == "Ontology:") {
      next();
      if (peek().kind == Tok::Iri) id_ = next().text;
    }
    while (peek().kind != Tok::End) parse_frame();
    return Ontology(id_, std::move(axioms_), std::move(prefixes_));
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string expected) const {
    throw ParseError(at.end_line, at.end_column, std::move(expected), at.text);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), what);
    return next();
  }

  void parse_prefix() {
    next();
    const Token& label = peek();
    if (label.kind != Tok::Keyword) fail(label, "a prefix label ending in ':'");
    next();
    std::string name = label.text.substr(0, label.text.size() - 1);
    if (name.find(':') != std::string::npos) fail(label, "a prefix label");
    const Token& iri = expect(Tok::Iri, "a namespace IRI in angle brackets");
    for (auto& p : prefixes_) {
      if (p.label == name) {
        p.iri = iri.text;
        return;
      }
    }
    prefixes_.push_back({name, iri.text});
  }

  std::optional<std::string> namespace_for(std::string_view label) const {
    for (const auto& p : prefixes_)
      if (p.label == label) return p.iri;
    if (label.empty()) return std::string(kDefaultNamespace);
    if (label == "owl") return std::string(kOwlNamespace);
    return std::nullopt;
  }

  // Resolves a Word or Iri token to a full IRI.
  std::string resolve(const Token& t) const {
    if (t.kind == Tok::Iri) return t.text;
    auto colon = t.text.find(':');
    std::string label;
    std::string local = t.text;
    if (colon != std::string::npos) {
      label = t.text.substr(0, colon);
      local = t.text.substr(colon + 1);
    }
    if (local.empty()) fail(t, "a local name after the prefix");
    auto ns = namespace_for(label);
    if (!ns) fail(t, "a declared prefix (undeclared prefix '" + label + "')");
    return *ns + local;
  }

  bool at_name() const {
    const Token& t = peek();
    if (t.kind == Tok::Iri) return true;
    return t.kind == Tok::Word && !one_of(t.text, kReserved);
  }

  EntityName entity(EntityKind kind, const char* what) {
    const Token& t = peek();
    if (!at_name()) fail(t, what);
    next();
    std::string iri = resolve(t);
    try {
      return EntityName(kind, iri);
    } catch (const ModelError&) {
      fail(t, std::string(what) + " with a non-empty local name");
    }
  }

  bool is_top(const std::string& iri) const { return iri == std::string(kOwlNamespace) + "Thing"; }
  bool is_bottom(const std::string& iri) const {
    return iri == std::string(kOwlNamespace) + "Nothing";
  }

  EntityName named_class(const char* what) {
    const Token& t = peek();
    EntityName e = entity(EntityKind::Class, what);
    if (is_top(e.iri()) || is_bottom(e.iri())) fail(t, what);
    return e;
  }

  RoleExpression role() {
    if (peek().kind == Tok::Word && peek().text == "inverse") {
      next();
      if (peek().kind == Tok::LParen) {
        const Token& open = next();
        RoleExpression inner = role();
        if (peek().kind != Tok::RParen)
          fail(peek(), "')' closing '(' at line " + std::to_string(open.line) + ", column " +
                           std::to_string(open.column));
        next();
        return inner.inverse();
      }
      return RoleExpression(entity(EntityKind::ObjectProperty, "a property name")).inverse();
    }
    return RoleExpression(entity(EntityKind::ObjectProperty, "a property name"));
  }

  ClassExpression expression(int depth = 0) {
    if (depth > kMaxDepth) fail(peek(), "a shallower expression (nesting limit reached)");
    std::vector<ClassExpression> ops{conjunction(depth + 1)};
    while (peek().kind == Tok::Word && peek().text == "or") {
      next();
      ops.push_back(conjunction(depth + 1));
    }
    return ops.size() == 1 ? ops.front() : ClassExpression::disjunction(std::move(ops));
  }

  ClassExpression conjunction(int depth) {
    std::vector<ClassExpression> ops{unary(depth + 1)};
    while (peek().kind == Tok::Word && peek().text == "and") {
      next();
      ops.push_back(unary(depth + 1));
    }
    return ops.size() == 1 ? ops.front() : ClassExpression::conjunction(std::move(ops));
  }

  static bool is_restriction_word(const std::string& s) {
    return s == "some" || s == "only" || s == "max";
  }

  ClassExpression unary(int depth) {
    if (depth > kMaxDepth) fail(peek(), "a shallower expression (nesting limit reached)");
    const Token& t = peek();
    if (t.kind == Tok::Word && t.text == "not") {
      next();
      return ClassExpression::negation(unary(depth + 1));
    }
    if (t.kind == Tok::LParen) {
      next();
      ClassExpression inner = expression(depth + 1);
      if (peek().kind != Tok::RParen)
        fail(peek(), "')' closing '(' at line " + std::to_string(t.line) + ", column " +
                         std::to_string(t.column));
      next();
      return inner;
    }
    if (t.kind == Tok::Word && (t.text == "Thing" || t.text == "Nothing")) {
      next();
      return t.text == "Thing" ? ClassExpression::top() : ClassExpression::bottom();
    }
    bool restriction = (t.kind == Tok::Word && t.text == "inverse") ||
                       (at_name() && peek(1).kind == Tok::Word && is_restriction_word(peek(1).text));
    if (restriction) {
      RoleExpression r = role();
      const Token& op = peek();
      if (op.kind != Tok::Word || !is_restriction_word(op.text)) fail(op, "'some', 'only' or 'max'");
      next();
      if (op.text == "max") {
        const Token& n = expect(Tok::Number, "a cardinality");
        std::uint32_t card = 0;
        if (n.text.size() > 9) fail(n, "a smaller cardinality");
        card = static_cast<std::uint32_t>(std::stoul(n.text));
        ClassExpression filler = ClassExpression::top();
        if (starts_filler()) filler = unary(depth + 1);
        return ClassExpression::at_most(card, std::move(r), std::move(filler));
      }
      ClassExpression filler = unary(depth + 1);
      return op.text == "some" ? ClassExpression::some(std::move(r), std::move(filler))
                               : ClassExpression::only(std::move(r), std::move(filler));
    }
    if (!at_name()) fail(t, "a class expression");
    next();
    std::string iri = resolve(t);
    if (is_top(iri)) return ClassExpression::top();
    if (is_bottom(iri)) return ClassExpression::bottom();
    try {
      return ClassExpression::named(class_name(iri));
    } catch (const ModelError&) {
      fail(t, "a class name with a non-empty local name");
    }
  }

  bool starts_filler() const {
    const Token& t = peek();
    if (t.kind == Tok::LParen || t.kind == Tok::Iri) return true;
    if (t.kind != Tok::Word) return false;
    return t.text == "not" || t.text == "Thing" || t.text == "Nothing" || t.text == "inverse" ||
           !one_of(t.text, kReserved);
  }

  bool at_frame_boundary() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return true;
    return t.kind == Tok::Keyword &&
           (one_of(t.text, kFrameKeywords) || one_of(t.text, kIgnorableFrames) ||
            one_of(t.text, kClauseKeywords));
  }

  void skip_to_boundary() {
    while (!at_frame_boundary()) next();
  }

  void parse_frame() {
    const Token& head = peek();
    if (head.kind != Tok::Keyword) fail(head, "a frame keyword (Class:, ObjectProperty:, Individual:)");
    if (one_of(head.text, kIgnorableFrames) && options_.drop_unsupported) {
      next();
      skip_to_boundary();
      while (peek().kind == Tok::Keyword && one_of(peek().text, kClauseKeywords)) {
        next();
        skip_to_boundary();
      }
      count_drop();
      return;
    }
    if (head.text == "Class:") {
      next();
      const Token& subj_tok = peek();
      EntityName subject = named_class("a class name");
      class_clauses(subject, subj_tok);
    } else if (head.text == "ObjectProperty:") {
      next();
      EntityName subject = entity(EntityKind::ObjectProperty, "a property name");
      property_clauses(subject);
    } else if (head.text == "Individual:") {
      next();
      EntityName subject = entity(EntityKind::Individual, "an individual name");
      individual_clauses(subject);
    } else {
      fail(head, "a frame keyword (Class:, ObjectProperty:, Individual:)");
    }
  }

  void count_drop() {
    if (options_.dropped) ++*options_.dropped;
  }

  // Returns the clause keyword token, or nullptr at the end of the frame.
  const Token* clause_keyword(const char* allowed) {
    const Token& t = peek();
    if (t.kind != Tok::Keyword) {
      if (t.kind == Tok::End) return nullptr;
      fail(t, std::string("a clause keyword (") + allowed + ") or a new frame");
    }
    if (one_of(t.text, kFrameKeywords) || one_of(t.text, kIgnorableFrames)) return nullptr;
    if (t.text == "Annotations:" && options_.drop_unsupported) {
      next();
      skip_to_boundary();
      count_drop();
      return clause_keyword(allowed);
    }
    return &next();
  }

  template <class F>
  void comma_list(F&& item) {
    item();
    while (peek().kind == Tok::Comma) {
      next();
      item();
    }
  }

  void push(const Token& at, Axiom ax) {
    (void)at;
    axioms_.push_back(std::move(ax));
  }

  void class_clauses(const EntityName& subject, const Token& subj_tok) {
    bool any = false;
    static constexpr const char* kAllowed = "SubClassOf:, EquivalentTo:, DisjointWith:";
    while (const Token* kw = clause_keyword(kAllowed)) {
      any = true;
      const Token key = *kw;
      if (key.text == "SubClassOf:") {
        comma_list([&] {
          push(key, Axiom::subclass_of(ClassExpression::named(subject), expression()));
        });
      } else if (key.text == "EquivalentTo:") {
        comma_list([&] {
          push(key, Axiom::equivalent(ClassExpression::named(subject), expression()));
        });
      } else if (key.text == "DisjointWith:") {
        comma_list([&] {
          const Token& t = peek();
          EntityName other = named_class("a class name");
          if (other == subject) fail(t, "a class distinct from the frame subject");
          push(key, Axiom::disjoint(subject, other));
        });
      } else {
        fail(key, std::string("a clause keyword (") + kAllowed + ")");
      }
    }
    if (!any) push(subj_tok, Axiom::declaration(subject));
  }

  void property_clauses(const EntityName& subject) {
    bool any = false;
    static constexpr const char* kAllowed = "Domain:, Range:, SubPropertyOf:, InverseOf:";
    while (const Token* kw = clause_keyword(kAllowed)) {
      any = true;
      const Token key = *kw;
      if (key.text == "Domain:") {
        comma_list([&] { push(key, Axiom::domain(subject, named_class("a named class"))); });
      } else if (key.text == "Range:") {
        comma_list([&] { push(key, Axiom::range(subject, named_class("a named class"))); });
      } else if (key.text == "SubPropertyOf:") {
        comma_list([&] { push(key, Axiom::subproperty_of(RoleExpression(subject), role())); });
      } else if (key.text == "InverseOf:") {
        comma_list([&] {
          push(key, Axiom::inverse_properties(subject,
                                              entity(EntityKind::ObjectProperty, "a property name")));
        });
      } else {
        fail(key, std::string("a clause keyword (") + kAllowed + ")");
      }
    }
    if (!any) axioms_.push_back(Axiom::declaration(subject));
  }

  void individual_clauses(const EntityName& subject) {
    bool any = false;
    static constexpr const char* kAllowed = "Types:, Facts:";
    while (const Token* kw = clause_keyword(kAllowed)) {
      any = true;
      const Token key = *kw;
      if (key.text == "Types:") {
        comma_list([&] { push(key, Axiom::class_assertion(subject, expression())); });
      } else if (key.text == "Facts:") {
        comma_list([&] {
          EntityName prop = entity(EntityKind::ObjectProperty, "a property name");
          EntityName obj = entity(EntityKind::Individual, "an individual name");
          push(key, Axiom::property_assertion(prop, subject, obj));
        });
      } else {
        fail(key, std::string("a clause keyword (") + kAllowed + ")");
      }
    }
    if (!any) axioms_.push_back(Axiom::declaration(subject));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
  std::string id_;
  std::vector<Axiom> axioms_;
  std::vector<Prefix> prefixes_;
};

}  // namespace

Ontology parse(std::string_view text, const ParseOptions& options) {
  Lexer lexer(text);
  Parser parser(lexer.run(), options);
  return parser.run();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string default_namespace(const std::vector<Prefix>& prefixes) {
  for (const auto& p : prefixes)
    if (p.label.empty()) return p.iri;
  return std::string(kDefaultNamespace);
}

std::string render_role(const RoleExpression& r, const std::vector<Prefix>& prefixes) {
  std::string name = render_name(r.property(), prefixes);
  return r.is_inverse() ? "inverse " + name : name;
}

bool is_atomic(const ClassExpression& e) {
  return e.kind() == ExprKind::Named || e.kind() == ExprKind::Top || e.kind() == ExprKind::Bottom;
}

void render(const ClassExpression& e, const std::vector<Prefix>& prefixes, std::string& out);

void render_wrapped(const ClassExpression& e, const std::vector<Prefix>& prefixes, std::string& out) {
  if (is_atomic(e)) {
    render(e, prefixes, out);
  } else {
    out += '(';
    render(e, prefixes, out);
    out += ')';
  }
}

void render(const ClassExpression& e, const std::vector<Prefix>& prefixes, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Named:
      out += render_name(e.name(), prefixes);
      return;
    case ExprKind::Top:
      out += "owl:Thing";
      return;
    case ExprKind::Bottom:
      out += "owl:Nothing";
      return;
    case ExprKind::Not:
      out += "not ";
      render_wrapped(e.operand(), prefixes, out);
      return;
    case ExprKind::And:
    case ExprKind::Or: {
      const char* sep = e.kind() == ExprKind::And ? " and " : " or ";
      bool first = true;
      for (const auto& op : e.operands()) {
        if (!first) out += sep;
        first = false;
        bool atomic_enough = is_atomic(op) || op.kind() == ExprKind::Not;
        if (atomic_enough) render(op, prefixes, out);
        else render_wrapped(op, prefixes, out);
      }
      return;
    }
    case ExprKind::Some:
    case ExprKind::Only:
      out += render_role(e.role(), prefixes);
      out += e.kind() == ExprKind::Some ? " some " : " only ";
      render_wrapped(e.operand(), prefixes, out);
      return;
    case ExprKind::AtMost:
      out += render_role(e.role(), prefixes);
      out += " max " + std::to_string(e.cardinality()) + " ";
      render_wrapped(e.operand(), prefixes, out);
      return;
  }
}

struct FrameKey {
  EntityKind kind;
  std::string subject;
  friend bool operator==(const FrameKey&, const FrameKey&) = default;
};

struct Clause {
  FrameKey frame;
  std::string keyword;  // empty for declarations
  std::string payload;
};

Clause clause_for(const Axiom& ax, const std::vector<Prefix>& px) {
  auto name = [&](const EntityName& e) { return render_name(e, px); };
  auto expr = [&](const ClassExpression& e) { return render_expression(e, px); };
  auto named_subject = [&](const ClassExpression& e, const char* what) {
    if (!e.is_named())
      throw std::invalid_argument(std::string(what) + " with a complex left-hand side has no frame form");
    return name(e.name());
  };
  return std::visit(
      [&](const auto& a) -> Clause {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          return {{EntityKind::Class, named_subject(a.sub, "SubClassOf")}, "SubClassOf:", expr(a.sup)};
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          return {{EntityKind::Class, named_subject(a.first, "EquivalentClasses")},
                  "EquivalentTo:",
                  expr(a.second)};
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
          return {{EntityKind::Class, name(a.first)}, "DisjointWith:", name(a.second)};
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          return {{EntityKind::ObjectProperty, name(a.sub.property())},
                  "SubPropertyOf:",
                  render_role(a.sup, px)};
        } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
          return {{EntityKind::ObjectProperty, name(a.first)}, "InverseOf:", name(a.second)};
        } else if constexpr (std::is_same_v<T, axioms::Domain>) {
          return {{EntityKind::ObjectProperty, name(a.property)}, "Domain:", name(a.cls)};
        } else if constexpr (std::is_same_v<T, axioms::Range>) {
          return {{EntityKind::ObjectProperty, name(a.property)}, "Range:", name(a.cls)};
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          return {{EntityKind::Individual, name(a.individual)}, "Types:", expr(a.type)};
        } else if constexpr (std::is_same_v<T, axioms::PropertyAssertion>) {
          return {{EntityKind::Individual, name(a.subject)}, "Facts:",
                  name(a.property) + " " + name(a.object)};
        } else {
          return {{a.entity.kind(), name(a.entity)}, "", ""};
        }
      },
      ax.data());
}

}  // namespace

std::string render_name(const EntityName& name, const std::vector<Prefix>& prefixes) {
  const std::string& iri = name.iri();
  std::string def = default_namespace(prefixes);
  auto fits = [&](const std::string& ns) {
    return iri.size() > ns.size() && iri.compare(0, ns.size(), ns) == 0 &&
           is_simple_local(std::string_view(iri).substr(ns.size()));
  };
  if (fits(def)) {
    std::string local = iri.substr(def.size());
    if (one_of(local, kReserved) || all_digits(local) || local.back() == ':') return ":" + local;
    return local;
  }
  for (const auto& p : prefixes) {
    if (!p.label.empty() && fits(p.iri)) return p.label + ":" + iri.substr(p.iri.size());
  }
  if (fits(std::string(kOwlNamespace))) return "owl:" + iri.substr(kOwlNamespace.size());
  return "<" + iri + ">";
}

std::string render_expression(const ClassExpression& expr, const std::vector<Prefix>& prefixes) {
  std::string out;
  render(expr, prefixes, out);
  return out;
}

std::string serialize(const Ontology& o) {
  std::ostringstream out;
  const auto& px = o.prefixes();
  bool has_default = std::any_of(px.begin(), px.end(), [](const Prefix& p) { return p.label.empty(); });
  if (!has_default) out << "Prefix: : <" << kDefaultNamespace << ">\n";
  for (const auto& p : px) out << "Prefix: " << p.label << ": <" << p.iri << ">\n";
  out << "Ontology:";
  if (!o.id().empty()) out << " <" << o.id() << ">";
  out << "\n";

  std::optional<FrameKey> open;
  for (const auto& ax : o.axioms()) {
    Clause c = clause_for(ax, px);
    if (c.keyword.empty()) {
      out << "\n" << to_string(c.frame.kind) << ": " << c.frame.subject << "\n";
      open.reset();
      continue;
    }
    if (!open || !(*open == c.frame)) {
      out << "\n" << to_string(c.frame.kind) << ": " << c.frame.subject << "\n";
      open = c.frame;
    }
    out << "    " << c.keyword << " " << c.payload << "\n";
  }
  return out.str();
}

Ontology read_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Ontology o = parse(buf.str(), options);
  if (o.id().empty()) o = o.with_id(path.stem().string());
  return o;
}

void write_file(const std::filesystem::path& path, const Ontology& o) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(o);
}

}  // namespace ontocc::manchester
