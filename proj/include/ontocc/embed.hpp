#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontocc/model.hpp"

namespace ontocc::embed {

class EmptyVocabulary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class AllOOV : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GraphEdge {
  std::size_t from;
  std::string label;
  std::size_t to;
  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

struct ProjectedGraph {
  std::vector<EntityName> nodes;  // sorted
  std::vector<GraphEdge> edges;   // sorted, unique
  std::vector<std::size_t> out_edges(std::size_t node) const;
};

struct ProjectOptions {
  // Add subClassOf edges for the transitive closure of told subclass links.
  bool subclass_closure = false;
};

// Named subclass links become subClassOf edges, a domain/range pair of r
// becomes C --r--> D, r(a, b) becomes a --r--> b and a class assertion an
// rdf type edge. A complex superclass contributes one edge per named leaf:
// role restrictions use the role name, negations "complementOf", and plain
// conjunct/disjunct leaves "subClassOf". Disjointness becomes disjointWith.
ProjectedGraph project(const Ontology& o, const ProjectOptions& options = {});

using Sentence = std::vector<std::string>;

struct WalkCorpus {
  enum class Source : std::uint8_t { Structure, Lexical };
  std::vector<Sentence> sentences;
  Source source = Source::Structure;
};

// Per node, walks_per_node walks of up to depth hops, alternating node and
// edge label tokens and stopping early at dead ends. Node tokens are local
// names. Each node draws from its own generator derived from the seed.
WalkCorpus random_walks(const ProjectedGraph& g, int depth = 4, int walks_per_node = 10, std::uint64_t seed = 0);

// Lowercased words of a local name split at camelCase humps, digits,
// underscores, hyphens and dots.
std::vector<std::string> split_words(std::string_view name);

// One sentence per entity (its words) and one per axiom (the words of every
// entity it mentions, in order).
WalkCorpus lexical_corpus(const Ontology& o);

struct TrainConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t epochs = 10;
  std::size_t negatives = 5;
  double learning_rate = 0.025;      // decays linearly towards min_learning_rate
  double min_learning_rate = 0.0001;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
  // Draw the same negatives every epoch (the noise generator restarts from
  // the seed), so each epoch is one pass of incremental gradient over a fixed
  // objective.
  bool reuse_negatives = false;
  void validate() const;  // throws ConfigError
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::vector<std::string> vocab, std::vector<float> data);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  bool contains(const std::string& token) const { return index_.contains(token); }
  // Empty span for unknown tokens.
  std::span<const float> vector(const std::string& token) const;
  const std::vector<float>& data() const { return data_; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.vocab_ == b.vocab_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> vocab_;
  std::vector<float> data_;
  std::map<std::string, std::size_t> index_;
};

struct TrainResult {
  EmbeddingTable table;
  std::vector<double> epoch_loss;  // mean per-pair loss of each epoch
};

// Skip-gram with negative sampling (unigram^0.75 noise), plain SGD over the
// sentences in corpus order. Single-threaded, so a given config and corpus
// always give the same table bit for bit.
TrainResult train_skipgram(const WalkCorpus& corpus, const TrainConfig& cfg);
TrainResult train_skipgram(const std::vector<Sentence>& sentences, const TrainConfig& cfg);

// Loss of one (center, context, negatives) example and its gradients:
// -log s(u_pos . v) - sum log s(-u_neg . v).
struct PairGradient {
  double loss = 0;
  std::vector<double> d_center;
  std::vector<double> d_positive;
  std::vector<std::vector<double>> d_negatives;
};
PairGradient pair_gradient(std::span<const double> center, std::span<const double> positive,
                           const std::vector<std::span<const double>>& negatives);

struct Pooled {
  std::vector<float> vector;
  std::size_t oov = 0;
};

// Mean of the known token vectors, summed in a fixed order so any permutation
// of the tokens gives the same bits.
Pooled mean_pool(const std::vector<std::string>& tokens, const EmbeddingTable& table);

// Binary: uint32 dim, uint32 vocab_size, then per token a uint32 byte length,
// the UTF-8 bytes and dim float32 values, all little-endian.
void write_binary(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_binary(std::istream& in);
void write_binary(const std::filesystem::path& path, const EmbeddingTable& table);
EmbeddingTable read_binary(const std::filesystem::path& path);

// First line {"schema", "dim", "vocab_size"}, then {"token", "vector"} lines.
void write_jsonl(std::ostream& out, const EmbeddingTable& table);

}  // namespace ontocc::embed
