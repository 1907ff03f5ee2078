#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontocc/antipattern.hpp"
#include "ontocc/corpus.hpp"
#include "ontocc/embed.hpp"
#include "ontocc/modularize.hpp"

namespace ontocc::pipeline {

struct Config {
  std::uint64_t seed = 0;
  corpus::SynthConfig synth;      // synth.seed is overridden by seed
  std::size_t module_classes = 25;  // k = ceil(classes / module_classes) per source
  std::size_t min_module_classes = 5;
  std::size_t budget = translate::kDefaultTokenBudget;
  std::size_t max_missing = 2;
  std::vector<antipattern::PatternId> patterns{antipattern::kAllPatterns.begin(), antipattern::kAllPatterns.end()};
  bool embed = true;
  embed::TrainConfig train;
  int walk_depth = 4;
  int walks_per_node = 10;
  std::array<unsigned, 3> ratios{70, 15, 15};
  bool stratified = true;
  std::size_t workers = 1;  // does not affect any output

  nlohmann::json to_json() const;  // everything except workers
};

struct Module {
  std::string id;  // record id: local part of the ontology id
  Ontology ontology;
  std::optional<antipattern::InjectionReport> injection;
};

// Record id of a module: the text after the last '/' or '#' of its ontology id.
std::string record_id(const Ontology& o);

// Injects every requested pattern that has a site into `m`. The seed of each
// injection is derived from (seed, module id, pattern), so the result does not
// depend on which other modules or patterns are processed.
std::vector<Module> inject_all(const Module& m, const std::vector<antipattern::PatternId>& patterns,
                               std::uint64_t seed, std::size_t max_missing);

// Tokens pooled for a module: local names of its signature.
std::vector<std::string> pooling_tokens(const Ontology& o);

// Per-module embedding: random walks over the module graph, skip-gram
// trained with a seed derived from (seed, id), then mean pooling.
std::vector<float> embed_module(const Ontology& o, const std::string& id, const Config& cfg);

struct Result {
  std::vector<Ontology> sources;
  std::vector<Module> modules;   // consistent modules
  std::vector<Module> injected;  // one per (module, pattern) with a site
  std::size_t dropped_axioms = 0;
  std::vector<corpus::DatasetRecord> dataset;
  corpus::BuildStats build;
  corpus::SplitManifest manifest;
  // Record id to (is injected, position in modules or injected).
  std::map<std::string, std::pair<bool, std::size_t>> index;
  const Module& module(const std::string& id) const;

  // Label soundness over the dataset: label 0 must be consistent and
  // coherent, semantic patterns must not be.
  std::vector<std::string> soundness_violations() const;
};

using Progress = std::function<void(const std::string&)>;

Result run(const Config& cfg, const Progress& progress = {});

// Summary counts for report.json (deterministic, no timings).
nlohmann::json summary(const Result& r);

}  // namespace ontocc::pipeline
