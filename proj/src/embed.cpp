#include "ontocc/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "ontocc/seed.hpp"

namespace ontocc::embed {

std::vector<std::size_t> ProjectedGraph::out_edges(std::size_t node) const {
  auto lo = std::lower_bound(edges.begin(), edges.end(), node,
                             [](const GraphEdge& e, std::size_t n) { return e.from < n; });
  std::vector<std::size_t> out;
  for (auto it = lo; it != edges.end() && it->from == node; ++it)
    out.push_back(static_cast<std::size_t>(it - edges.begin()));
  return out;
}

namespace {

const std::string kSubClassOf = "subClassOf";

struct GraphBuilder {
  std::map<EntityName, std::size_t> index;
  std::set<GraphEdge> edges;

  explicit GraphBuilder(const Ontology& o) {
    std::size_t n = 0;
    for (const auto& e : o.signature()) index.emplace(e, n++);
  }
  void add(const EntityName& a, const std::string& label, const EntityName& b) {
    edges.insert({index.at(a), label, index.at(b)});
  }
  // edges from `from` to the named leaves of a superclass expression
  void leaves(const EntityName& from, const ClassExpression& e, const std::string& label) {
    switch (e.kind()) {
      case ExprKind::Named: add(from, label, e.name()); break;
      case ExprKind::And:
      case ExprKind::Or:
        for (const auto& op : e.operands()) leaves(from, op, label);
        break;
      case ExprKind::Not:
        leaves(from, e.operand(), "complementOf");
        break;
      case ExprKind::Some:
      case ExprKind::Only:
      case ExprKind::AtMost:
        leaves(from, e.operand(), e.role().property().local());
        break;
      default: break;
    }
  }
};

}  // namespace

ProjectedGraph project(const Ontology& o, const ProjectOptions& options) {
  GraphBuilder b(o);
  std::map<EntityName, std::vector<EntityName>> domains, ranges;
  for (const auto& ax : o.axioms()) {
    if (auto s = ax.get_if<axioms::SubClassOf>()) {
      for (const auto& sub : named_classes_in(s->sub)) b.leaves(sub, s->sup, kSubClassOf);
    } else if (auto e = ax.get_if<axioms::EquivalentClasses>()) {
      for (const auto& sub : named_classes_in(e->first)) b.leaves(sub, e->second, kSubClassOf);
    } else if (auto d = ax.get_if<axioms::DisjointClasses>()) {
      b.add(d->first, "disjointWith", d->second);
    } else if (auto dom = ax.get_if<axioms::Domain>()) {
      domains[dom->property].push_back(dom->cls);
    } else if (auto rng = ax.get_if<axioms::Range>()) {
      ranges[rng->property].push_back(rng->cls);
    } else if (auto ca = ax.get_if<axioms::ClassAssertion>()) {
      b.leaves(ca->individual, ca->type, "type");
    } else if (auto pa = ax.get_if<axioms::PropertyAssertion>()) {
      b.add(pa->subject, pa->property.local(), pa->object);
    }
  }
  for (const auto& [p, ds] : domains)
    if (auto it = ranges.find(p); it != ranges.end())
      for (const auto& d : ds)
        for (const auto& r : it->second) b.add(d, p.local(), r);

  ProjectedGraph g;
  g.nodes.resize(b.index.size(), EntityName(EntityKind::Class, "urn:ontocc:placeholder#x"));
  for (const auto& [e, i] : b.index) g.nodes[i] = e;

  if (options.subclass_closure) {
    std::map<std::size_t, std::set<std::size_t>> up;
    for (const auto& e : b.edges)
      if (e.label == kSubClassOf) up[e.from].insert(e.to);
    for (const auto& [start, direct] : up) {
      std::set<std::size_t> seen;
      std::vector<std::size_t> stack(direct.begin(), direct.end());
      while (!stack.empty()) {
        std::size_t n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (auto it = up.find(n); it != up.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
      }
      for (std::size_t n : seen)
        if (n != start) b.edges.insert({start, kSubClassOf, n});
    }
  }
  g.edges.assign(b.edges.begin(), b.edges.end());
  return g;
}

WalkCorpus random_walks(const ProjectedGraph& g, int depth, int walks_per_node, std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("walk depth must be at least 1");
  WalkCorpus corpus;
  std::vector<std::vector<std::size_t>> out(g.nodes.size());
  for (std::size_t n = 0; n < g.nodes.size(); ++n) out[n] = g.out_edges(n);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(n)));
    for (int w = 0; w < walks_per_node; ++w) {
      Sentence s{g.nodes[n].local()};
      std::size_t at = n;
      for (int step = 0; step < depth && !out[at].empty(); ++step) {
        const GraphEdge& e = g.edges[out[at][rng() % out[at].size()]];
        s.push_back(e.label);
        s.push_back(g.nodes[e.to].local());
        at = e.to;
      }
      corpus.sentences.push_back(std::move(s));
    }
  }
  return corpus;
}

std::vector<std::string> split_words(std::string_view name) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (c == '_' || c == '-' || c == '.' || std::isspace(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      unsigned char prev = static_cast<unsigned char>(name[i - 1]);
      bool hump = std::isupper(c) && (std::islower(prev) || std::isdigit(prev));
      // "HTTPServer": split before the last capital of a run
      bool acronym_end = std::isupper(c) && std::isupper(prev) && i + 1 < name.size() &&
                         std::islower(static_cast<unsigned char>(name[i + 1]));
      bool digit_edge = (std::isdigit(c) != 0) != (std::isdigit(prev) != 0);
      if (hump || acronym_end || digit_edge) flush();
    }
    cur += static_cast<char>(std::tolower(c));
  }
  flush();
  return words;
}

WalkCorpus lexical_corpus(const Ontology& o) {
  WalkCorpus corpus;
  corpus.source = WalkCorpus::Source::Lexical;
  for (const auto& e : o.signature()) {
    auto w = split_words(e.local());
    if (!w.empty()) corpus.sentences.push_back(std::move(w));
  }
  for (const auto& ax : o.axioms()) {
    if (ax.kind() == AxiomKind::Declaration) continue;
    Sentence s;
    for (const auto& e : entities_of(ax))
      for (auto& w : split_words(e.local())) s.push_back(std::move(w));
    if (!s.empty()) corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

void TrainConfig::validate() const {
  if (dim == 0) throw ConfigError("dim must be positive");
  if (window == 0) throw ConfigError("window must be positive");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (!(learning_rate > 0) || min_learning_rate < 0 || min_learning_rate > learning_rate)
    throw ConfigError("learning rates must satisfy 0 <= min_learning_rate <= learning_rate, learning_rate > 0");
}

EmbeddingTable::EmbeddingTable(std::size_t dim, std::vector<std::string> vocab, std::vector<float> data)
    : dim_(dim), vocab_(std::move(vocab)), data_(std::move(data)) {
  if (data_.size() != dim_ * vocab_.size()) throw std::invalid_argument("embedding data size mismatch");
  for (std::size_t i = 0; i < vocab_.size(); ++i)
    if (!index_.emplace(vocab_[i], i).second) throw std::invalid_argument("duplicate token '" + vocab_[i] + "'");
}

std::span<const float> EmbeddingTable::vector(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dim_, dim_};
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1 / (1 + std::exp(-x));
  double e = std::exp(x);
  return e / (1 + e);
}

// -log(sigmoid(x)) without overflow
double neg_log_sigmoid(double x) { return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

PairGradient pair_gradient(std::span<const double> center, std::span<const double> positive,
                           const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = center.size();
  PairGradient g;
  g.d_center.assign(d, 0);
  double sp = dot(center.data(), positive.data(), d);
  g.loss = neg_log_sigmoid(sp);
  double coef = sigmoid(sp) - 1;
  g.d_positive.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.d_center[i] += coef * positive[i];
    g.d_positive[i] = coef * center[i];
  }
  for (const auto& neg : negatives) {
    double sn = dot(center.data(), neg.data(), d);
    g.loss += neg_log_sigmoid(-sn);
    double c = sigmoid(sn);
    std::vector<double> dn(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.d_center[i] += c * neg[i];
      dn[i] = c * center[i];
    }
    g.d_negatives.push_back(std::move(dn));
  }
  return g;
}

TrainResult train_skipgram(const WalkCorpus& corpus, const TrainConfig& cfg) {
  return train_skipgram(corpus.sentences, cfg);
}

TrainResult train_skipgram(const std::vector<Sentence>& sentences, const TrainConfig& cfg) {
  cfg.validate();
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences)
    for (const auto& t : s) ++counts[t];
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [t, c] : counts)
    if (c >= cfg.min_count) kept.emplace_back(t, c);
  if (kept.empty()) throw EmptyVocabulary("no token reaches min_count");
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab;
  std::map<std::string, std::size_t> index;
  for (const auto& [t, c] : kept) {
    index.emplace(t, vocab.size());
    vocab.push_back(t);
  }

  const std::size_t V = vocab.size(), D = cfg.dim;
  // noise distribution: cumulative unigram^0.75
  std::vector<double> cumulative(V);
  double total = 0;
  for (std::size_t i = 0; i < V; ++i) {
    total += std::pow(static_cast<double>(kept[i].second), 0.75);
    cumulative[i] = total;
  }
  std::mt19937_64 rng(cfg.seed);
  std::mt19937_64 noise(derive_seed(cfg.seed, std::uint64_t{0}));
  auto draw_noise = [&] {
    double x = unit_interval(noise()) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), V - 1);
  };

  std::vector<double> in(V * D), out(V * D, 0.0);
  for (auto& x : in) x = (unit_interval(rng()) - 0.5) / static_cast<double>(D);

  std::vector<std::vector<std::size_t>> encoded;
  std::size_t tokens = 0;
  for (const auto& s : sentences) {
    std::vector<std::size_t> e;
    for (const auto& t : s)
      if (auto it = index.find(t); it != index.end()) e.push_back(it->second);
    tokens += e.size();
    encoded.push_back(std::move(e));
  }

  TrainResult result;
  const double total_steps = static_cast<double>(cfg.epochs) * static_cast<double>(std::max<std::size_t>(tokens, 1));
  double step = 0;
  std::vector<double> grad_center(D);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0;
    std::size_t pairs = 0;
    if (cfg.reuse_negatives) noise.seed(derive_seed(cfg.seed, std::uint64_t{0}));
    for (const auto& s : encoded) {
      for (std::size_t i = 0; i < s.size(); ++i, ++step) {
        double lr = std::max(cfg.min_learning_rate, cfg.learning_rate * (1 - step / total_steps));
        double* v = &in[s[i] * D];
        std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
        std::size_t hi = std::min(s.size() - 1, i + cfg.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          // target 0 is the true context, the rest are noise words
          for (std::size_t k = 0; k <= cfg.negatives; ++k) {
            std::size_t target;
            double label;
            if (k == 0) {
              target = s[j];
              label = 1;
            } else {
              target = draw_noise();
              if (target == s[j]) continue;
              label = 0;
            }
            double* u = &out[target * D];
            double score = dot(v, u, D);
            loss += label == 1 ? neg_log_sigmoid(score) : neg_log_sigmoid(-score);
            double g = sigmoid(score) - label;  // d loss / d score
            for (std::size_t d = 0; d < D; ++d) {
              grad_center[d] += g * u[d];
              u[d] -= lr * g * v[d];
            }
          }
          for (std::size_t d = 0; d < D; ++d) v[d] -= lr * grad_center[d];
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  std::vector<float> data(in.begin(), in.end());
  for (float x : data)
    if (!std::isfinite(x)) throw std::runtime_error("training diverged");
  result.table = EmbeddingTable(D, std::move(vocab), std::move(data));
  return result;
}

Pooled mean_pool(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  std::vector<std::string> known;
  Pooled p;
  for (const auto& t : tokens) {
    if (table.contains(t)) known.push_back(t);
    else ++p.oov;
  }
  if (known.empty()) throw AllOOV("none of the " + std::to_string(tokens.size()) + " tokens has a vector");
  std::sort(known.begin(), known.end());
  std::vector<double> sum(table.dim(), 0.0);
  for (const auto& t : known) {
    auto v = table.vector(t);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += v[d];
  }
  p.vector.resize(sum.size());
  for (std::size_t d = 0; d < sum.size(); ++d)
    p.vector[d] = static_cast<float>(sum[d] / static_cast<double>(known.size()));
  return p;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated embedding file");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

}  // namespace

void write_binary(std::ostream& out, const EmbeddingTable& table) {
  put_u32(out, static_cast<std::uint32_t>(table.dim()));
  put_u32(out, static_cast<std::uint32_t>(table.size()));
  for (const auto& token : table.vocabulary()) {
    put_u32(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    for (float x : table.vector(token)) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
}

EmbeddingTable read_binary(std::istream& in) {
  std::size_t dim = get_u32(in), n = get_u32(in);
  std::vector<std::string> vocab;
  std::vector<float> data;
  data.reserve(dim * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string token(get_u32(in), '\0');
    if (!in.read(token.data(), static_cast<std::streamsize>(token.size())))
      throw std::runtime_error("truncated embedding file");
    vocab.push_back(std::move(token));
    for (std::size_t d = 0; d < dim; ++d) data.push_back(std::bit_cast<float>(get_u32(in)));
  }
  return EmbeddingTable(dim, std::move(vocab), std::move(data));
}

void write_binary(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_binary(out, table);
}

EmbeddingTable read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_binary(in);
}

void write_jsonl(std::ostream& out, const EmbeddingTable& table) {
  out << nlohmann::json{{"schema", "ontocc.embedding/1"}, {"dim", table.dim()}, {"vocab_size", table.size()}}.dump()
      << "\n";
  for (const auto& token : table.vocabulary()) {
    auto v = table.vector(token);
    out << nlohmann::json{{"token", token}, {"vector", std::vector<float>(v.begin(), v.end())}}.dump() << "\n";
  }
}

}  // namespace ontocc::embed
