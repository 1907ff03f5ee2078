#include "ontocc/translate.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace ontocc::translate {

namespace {

bool is_simple(const ClassExpression& e) {
  return e.kind() == ExprKind::Named || e.kind() == ExprKind::Top || e.kind() == ExprKind::Bottom;
}

std::string wrapped(const ClassExpression& e) { return is_simple(e) ? render(e) : "(" + render(e) + ")"; }

std::size_t words_in(const std::string& s) {
  std::istringstream in(s);
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

std::string entity_noun(EntityKind kind) {
  switch (kind) {
    case EntityKind::Class: return "class";
    case EntityKind::ObjectProperty: return "property";
    case EntityKind::Individual: return "individual";
  }
  return "entity";
}

}  // namespace

std::string render(const RoleExpression& role) {
  return role.is_inverse() ? "inverse " + role.property().local() : role.property().local();
}

std::string render(const ClassExpression& e) {
  switch (e.kind()) {
    case ExprKind::Named: return e.name().local();
    case ExprKind::Top: return "thing";
    case ExprKind::Bottom: return "nothing";
    case ExprKind::Not: return "not " + wrapped(e.operand());
    case ExprKind::And:
    case ExprKind::Or: {
      std::string out;
      for (const auto& op : e.operands()) {
        if (!out.empty()) out += e.kind() == ExprKind::And ? " and " : " or ";
        out += wrapped(op);
      }
      return out;
    }
    case ExprKind::Some: return "some " + render(e.role()) + " " + wrapped(e.operand());
    case ExprKind::Only: return "only " + render(e.role()) + " " + wrapped(e.operand());
    case ExprKind::AtMost: {
      std::string out = "at most " + std::to_string(e.cardinality()) + " " + render(e.role());
      if (e.operand().kind() != ExprKind::Top) out += " " + wrapped(e.operand());
      return out;
    }
  }
  return {};
}

std::vector<Triple> axiom_triples(const Axiom& axiom) {
  return std::visit(
      [](const auto& a) -> std::vector<Triple> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, axioms::Declaration>) {
          return {{a.entity.local(), "is a", entity_noun(a.entity.kind())}};
        } else if constexpr (std::is_same_v<T, axioms::SubClassOf>) {
          return {{render(a.sub), "is a subclass of", render(a.sup)}};
        } else if constexpr (std::is_same_v<T, axioms::EquivalentClasses>) {
          return {{render(a.first), "is equivalent to", render(a.second)}};
        } else if constexpr (std::is_same_v<T, axioms::DisjointClasses>) {
          return {{a.first.local(), "is disjoint with", a.second.local()}};
        } else if constexpr (std::is_same_v<T, axioms::SubPropertyOf>) {
          return {{render(a.sub), "is a subproperty of", render(a.sup)}};
        } else if constexpr (std::is_same_v<T, axioms::InverseProperties>) {
          return {{a.first.local(), "is the inverse of", a.second.local()}};
        } else if constexpr (std::is_same_v<T, axioms::Domain>) {
          return {{a.property.local(), "has domain", a.cls.local()}};
        } else if constexpr (std::is_same_v<T, axioms::Range>) {
          return {{a.property.local(), "has range", a.cls.local()}};
        } else if constexpr (std::is_same_v<T, axioms::ClassAssertion>) {
          return {{a.individual.local(), "has class", render(a.type)}};
        } else {
          return {{a.subject.local(), a.property.local(), a.object.local()}};
        }
      },
      axiom.data());
}

std::size_t word_count_estimate(const std::vector<Triple>& triples) {
  std::size_t n = 0;
  for (const auto& t : triples) n += words_in(t.subject) + 1 + words_in(t.object) + 2;
  return n;
}

std::size_t estimate_tokens(const TripleDoc& doc, const TokenEstimator& estimator) { return estimator(doc.triples); }

TripleDoc to_triples(const Ontology& o, const TokenEstimator& estimator) {
  TripleDoc doc;
  doc.id = o.id();
  for (const auto& ax : o.axioms())
    for (auto& t : axiom_triples(ax)) doc.triples.push_back(std::move(t));
  doc.token_count = estimator(doc.triples);
  return doc;
}

std::string to_text(const TripleDoc& doc) {
  std::string out;
  for (const auto& t : doc.triples) {
    std::string sentence = t.subject + " " + t.relation + " " + t.object + ".";
    sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
    if (!out.empty()) out += ' ';
    out += sentence;
  }
  return out;
}

LeviGraph to_levi(const TripleDoc& doc) {
  LeviGraph g;
  std::map<std::string, std::size_t> entity;
  auto node = [&](const std::string& name) {
    auto [it, fresh] = entity.emplace(name, g.nodes.size());
    if (fresh) g.nodes.push_back(name);
    return it->second;
  };
  for (std::size_t k = 0; k < doc.triples.size(); ++k) {
    const auto& t = doc.triples[k];
    std::size_t s = node(t.subject);
    std::size_t r = g.nodes.size();
    g.nodes.push_back(t.relation + "#" + std::to_string(k));
    std::size_t o = node(t.object);
    g.edges.emplace_back(s, r);
    g.edges.emplace_back(r, o);
  }
  return g;
}

BudgetFilter filter_by_budget(std::vector<TripleDoc> docs, std::size_t budget) {
  BudgetFilter out;
  for (auto& d : docs) {
    if (d.token_count <= budget) out.kept.push_back(std::move(d));
    else ++out.excluded;
  }
  return out;
}

nlohmann::json to_json(const TripleDoc& doc) {
  nlohmann::json triples = nlohmann::json::array();
  for (const auto& t : doc.triples) triples.push_back({t.subject, t.relation, t.object});
  nlohmann::json j;
  j["id"] = doc.id;
  j["triples"] = std::move(triples);
  j["text"] = to_text(doc);
  j["tokens"] = doc.token_count;
  j["label"] = doc.label ? nlohmann::json(static_cast<int>(*doc.label)) : nlohmann::json(nullptr);
  j["pattern"] = doc.pattern ? nlohmann::json(std::string(antipattern::to_string(*doc.pattern)))
                             : nlohmann::json(nullptr);
  return j;
}

TripleDoc doc_from_json(const nlohmann::json& j) {
  TripleDoc doc;
  doc.id = j.at("id").get<std::string>();
  for (const auto& t : j.at("triples"))
    doc.triples.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>(), t.at(2).get<std::string>()});
  doc.token_count = j.at("tokens").get<std::size_t>();
  if (j.contains("label") && !j["label"].is_null()) doc.label = static_cast<Label>(j["label"].get<int>());
  if (j.contains("pattern") && !j["pattern"].is_null()) {
    auto id = antipattern::pattern_from_string(j["pattern"].get<std::string>());
    if (!id) throw std::invalid_argument("unknown pattern '" + j["pattern"].get<std::string>() + "'");
    doc.pattern = *id;
  }
  return doc;
}

nlohmann::json to_json(const LeviGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({graph.nodes[a], graph.nodes[b]});
  return {{"nodes", graph.nodes}, {"edges", std::move(edges)}};
}

}  // namespace ontocc::translate
