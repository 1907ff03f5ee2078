#include "ontocc/pipeline.hpp"

#include <set>

#include "ontocc/parallel.hpp"
#include "ontocc/seed.hpp"
#include "ontocc/tableau.hpp"

namespace ontocc::pipeline {

using antipattern::PatternId;

nlohmann::json Config::to_json() const {
  std::vector<std::string> names;
  for (auto p : patterns) names.emplace_back(antipattern::to_string(p));
  return {{"seed", seed},
          {"synth",
           {{"n_ontologies", synth.n_ontologies},
            {"classes", {synth.classes.min, synth.classes.max}},
            {"properties", {synth.properties.min, synth.properties.max}},
            {"individuals", {synth.individuals.min, synth.individuals.max}},
            {"disjointness_density", synth.disjointness_density},
            {"max_retries", synth.max_retries}}},
          {"module_classes", module_classes},
          {"min_module_classes", min_module_classes},
          {"budget", budget},
          {"max_missing", max_missing},
          {"patterns", names},
          {"embed", embed},
          {"train",
           {{"dim", train.dim},
            {"window", train.window},
            {"epochs", train.epochs},
            {"negatives", train.negatives},
            {"learning_rate", train.learning_rate},
            {"min_learning_rate", train.min_learning_rate},
            {"min_count", train.min_count}}},
          {"walk_depth", walk_depth},
          {"walks_per_node", walks_per_node},
          {"ratios", ratios},
          {"stratified", stratified}};
}

std::string record_id(const Ontology& o) {
  const std::string& id = o.id();
  auto cut = id.find_last_of("/#");
  return cut == std::string::npos ? id : id.substr(cut + 1);
}

std::vector<Module> inject_all(const Module& m, const std::vector<PatternId>& patterns, std::uint64_t seed,
                               std::size_t max_missing) {
  std::vector<Module> out;
  antipattern::InjectOptions options;
  options.max_missing = max_missing;
  for (auto p : patterns) {
    const std::string name(antipattern::to_string(p));
    try {
      auto [o, report] = antipattern::inject(m.ontology, p, derive_seed(seed, m.id + "/" + name), options);
      report.source_module = m.id;
      std::string id = m.id + "-" + name;
      out.push_back({id, o.with_id(m.ontology.id() + "-" + name), std::move(report)});
    } catch (const antipattern::NoSite&) {
    }
  }
  return out;
}

std::vector<std::string> pooling_tokens(const Ontology& o) {
  std::vector<std::string> out;
  for (const auto& e : o.signature()) out.push_back(e.local());
  return out;
}

std::vector<float> embed_module(const Ontology& o, const std::string& id, const Config& cfg) {
  auto walks = embed::random_walks(embed::project(o), cfg.walk_depth, cfg.walks_per_node, derive_seed(cfg.seed, "walks/" + id));
  embed::TrainConfig train = cfg.train;
  train.seed = derive_seed(cfg.seed, "train/" + id);
  auto table = embed::train_skipgram(walks, train).table;
  return embed::mean_pool(pooling_tokens(o), table).vector;
}

const Module& Result::module(const std::string& id) const {
  auto [injected_side, at] = index.at(id);
  return injected_side ? injected[at] : modules[at];
}

std::vector<std::string> Result::soundness_violations() const {
  std::vector<std::string> out;
  for (const auto& r : dataset) {
    bool cc = r.status.is_consistent_coherent();
    if (r.label == translate::Label::Consistent && !cc)
      out.push_back(r.id + ": label 0 but " + std::string(to_string(r.status.kind())));
    if (r.pattern && antipattern::is_semantic(*r.pattern) && cc)
      out.push_back(r.id + ": semantic pattern " + std::string(antipattern::to_string(*r.pattern)) +
                    " but consistent and coherent");
  }
  return out;
}

Result run(const Config& cfg, const Progress& progress) {
  auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };
  Result res;
  const std::size_t workers = std::max<std::size_t>(cfg.workers, 1);

  corpus::SynthConfig synth = cfg.synth;
  synth.seed = derive_seed(cfg.seed, "synth");
  synth.validate();
  res.sources.resize(synth.n_ontologies);
  parallel_for(synth.n_ontologies, workers, [&](std::size_t i) { res.sources[i] = corpus::generate_one(synth, i); });
  say("generated " + std::to_string(res.sources.size()) + " ontologies");

  std::vector<modularize::Extraction> parts(res.sources.size());
  parallel_for(res.sources.size(), workers, [&](std::size_t i) {
    modularize::Options opt;
    std::size_t classes = res.sources[i].classes().size();
    opt.k = std::max<std::size_t>(1, (classes + cfg.module_classes - 1) / cfg.module_classes);
    opt.min_module_classes = cfg.min_module_classes;
    parts[i] = modularize::build_modules(res.sources[i], opt);
  });
  for (auto& ex : parts) {
    res.dropped_axioms += ex.dropped.size();
    for (auto& m : ex.modules) res.modules.push_back({record_id(m.module), std::move(m.module), std::nullopt});
  }
  say("extracted " + std::to_string(res.modules.size()) + " modules");

  std::vector<std::vector<Module>> injected(res.modules.size());
  parallel_for(res.modules.size(), workers, [&](std::size_t i) {
    injected[i] = inject_all(res.modules[i], cfg.patterns, cfg.seed, cfg.max_missing);
  });
  for (auto& v : injected)
    for (auto& m : v) res.injected.push_back(std::move(m));
  say("injected " + std::to_string(res.injected.size()) + " anti-pattern instances");

  auto to_record = [](const Module& m) {
    corpus::DatasetRecord r;
    r.id = m.id;
    r.doc = translate::to_triples(m.ontology);
    r.doc.id = m.id;
    if (m.injection) {
      r.label = translate::Label::Inconsistent;
      r.pattern = m.injection->pattern;
    }
    return r;
  };
  std::vector<corpus::DatasetRecord> consistent, inconsistent;
  for (std::size_t i = 0; i < res.modules.size(); ++i) {
    res.index[res.modules[i].id] = {false, i};
    consistent.push_back(to_record(res.modules[i]));
  }
  for (std::size_t i = 0; i < res.injected.size(); ++i) {
    if (!res.index.emplace(res.injected[i].id, std::pair{true, i}).second)
      throw std::logic_error("duplicate record id " + res.injected[i].id);
    inconsistent.push_back(to_record(res.injected[i]));
  }
  res.dataset = corpus::build_dataset(std::move(consistent), std::move(inconsistent), cfg.budget,
                                      derive_seed(cfg.seed, "balance"), &res.build);
  say("balanced dataset: " + std::to_string(res.dataset.size()) + " records");

  parallel_for(res.dataset.size(), workers, [&](std::size_t i) {
    auto& r = res.dataset[i];
    r.status = tableau::classify_status(res.module(r.id).ontology);
  });
  say("checked every record with the tableau");

  if (cfg.embed) {
    parallel_for(res.dataset.size(), workers, [&](std::size_t i) {
      auto& r = res.dataset[i];
      r.embedding = embed_module(res.module(r.id).ontology, r.id, cfg);
    });
    say("embedded every record");
  }

  res.manifest = corpus::split(res.dataset, cfg.ratios, derive_seed(cfg.seed, "split"), cfg.stratified);
  return res;
}

nlohmann::json summary(const Result& r) {
  std::map<std::string, std::size_t> injected, used, statuses;
  for (const auto& m : r.injected) ++injected[std::string(antipattern::to_string(m.injection->pattern))];
  std::size_t zeros = 0;
  for (const auto& rec : r.dataset) {
    if (rec.pattern) ++used[std::string(antipattern::to_string(*rec.pattern))];
    else ++zeros;
    ++statuses[std::string(to_string(rec.status.kind()))];
  }
  return {{"sources", r.sources.size()},
          {"modules", r.modules.size()},
          {"dropped_axioms", r.dropped_axioms},
          {"injected", injected},
          {"over_budget", {{"consistent", r.build.over_budget_consistent},
                           {"inconsistent", r.build.over_budget_inconsistent}}},
          {"dataset", {{"records", r.dataset.size()}, {"consistent", zeros}, {"per_pattern", used}, {"status", statuses}}},
          {"split", {{"train", r.manifest.count(corpus::Split::Train)},
                     {"validation", r.manifest.count(corpus::Split::Validation)},
                     {"test", r.manifest.count(corpus::Split::Test)}}},
          {"soundness_violations", r.soundness_violations()}};
}

}  // namespace ontocc::pipeline
