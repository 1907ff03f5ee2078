// ontocc: command-line front end for the consistency-corpus toolkit.
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ontocc/antipattern.hpp"
#include "ontocc/corpus.hpp"
#include "ontocc/embed.hpp"
#include "ontocc/fetch.hpp"
#include "ontocc/manchester.hpp"
#include "ontocc/modularize.hpp"
#include "ontocc/parallel.hpp"
#include "ontocc/pipeline.hpp"
#include "ontocc/provenance.hpp"
#include "ontocc/seed.hpp"
#include "ontocc/tableau.hpp"
#include "ontocc/translate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace ontocc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_omn(const fs::path& path, const Ontology& o) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  manchester::write_file(path, o);
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
  else write_text(out, j.dump(2) + "\n");
}

antipattern::PatternId pattern_arg(const std::string& name) {
  auto id = antipattern::pattern_from_string(name);
  if (!id) throw UsageError("unknown pattern '" + name + "'");
  return *id;
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

std::vector<fs::path> omn_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(a))
        if (e.path().extension() == ".omn") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(a);
    }
  }
  return out;
}

json report_json(const antipattern::InjectionReport& r, const json& prov) {
  json injected = json::array(), matched = json::array(), subst = json::object();
  for (const auto& a : r.injected_axioms) injected.push_back(display(a));
  for (const auto& a : r.binding.matched) matched.push_back(display(a));
  for (const auto& [v, e] : r.binding.substitution.entities) subst[v] = e.iri();
  for (const auto& [v, role] : r.binding.substitution.roles)
    subst[v] = role.is_inverse() ? "inverse " + role.property().iri() : role.property().iri();
  return {{"schema", "ontocc.injection/1"},
          {"provenance", prov},
          {"pattern", antipattern::to_string(r.pattern)},
          {"source_module", r.source_module},
          {"injected_axioms", injected},
          {"matched_axioms", matched},
          {"substitution", subst}};
}

json status_json(const std::string& id, const tableau::Verdict* verdict, const OntologyStatus& status, double ms) {
  json unsat = json::array();
  for (const auto& c : status.unsatisfiable()) unsat.push_back(c.iri());
  json j{{"schema", "ontocc.check/1"},
         {"id", id},
         {"status", to_string(status.kind())},
         {"unsat_classes", unsat},
         {"wall_time_ms", ms}};
  if (status.kind() == OntologyStatus::Kind::Inconsistent) {
    j["clash"] = status.clash();
    json trace = json::array();
    if (verdict)
      for (const auto& s : verdict->clash_trace)
        trace.push_back({{"rule", tableau::to_string(s.rule)}, {"node", s.node}, {"expr", s.expr}, {"other", s.other}});
    j["clash_trace"] = trace;
  }
  return j;
}

void write_split_files(const fs::path& dir, const std::vector<corpus::DatasetRecord>& records,
                       const corpus::SplitManifest& manifest, const json& prov) {
  auto with_prov = [&](json j) {
    j["provenance"] = prov;
    return j;
  };
  write_text(dir / "split.json", with_prov(corpus::to_json(manifest)).dump(2) + "\n");
  for (auto fam : antipattern::kAllFamilies) {
    std::string name(antipattern::to_string(fam));
    std::string file = name;
    std::erase(file, '*');
    write_text(dir / "lofo" / (file + ".json"),
               with_prov(corpus::to_json(corpus::leave_family_out(records, manifest, fam))).dump(2) + "\n");
  }
}

void write_dataset_file(const fs::path& path, const std::vector<corpus::DatasetRecord>& records, const json& prov) {
  std::ostringstream out;
  corpus::write_dataset(out, records, prov);
  write_text(path, out.str());
}

// ------------------------------------------------------------ subcommands

struct Common {
  std::size_t workers = default_workers();
};

int cmd_check(const std::vector<std::string>& inputs, const std::string& out, const std::string& timing, bool detect,
              const Common& common) {
  auto files = omn_inputs(inputs);
  std::vector<Ontology> onts;
  for (const auto& f : files) onts.push_back(manchester::read_file(f));
  std::vector<json> results(onts.size());
  parallel_for(onts.size(), common.workers, [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    auto verdict = tableau::check_consistency(onts[i]);
    OntologyStatus status = verdict.consistent() ? tableau::classify_status(onts[i]) : verdict.status;
    std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    results[i] = status_json(stem_of(files[i]), &verdict, status, ms.count());
    if (detect) {
      json found = json::array();
      for (const auto& m : antipattern::detect(onts[i])) found.push_back(antipattern::to_string(m.id));
      results[i]["antipatterns"] = found;
    }
  });
  json prov = provenance(0, {{"detect", detect}});
  std::ostringstream text;
  for (auto& r : results) {
    r["provenance"] = prov;
    text << r.dump() << "\n";
  }
  if (out.empty() || out == "-") std::cout << text.str();
  else write_text(out, text.str());

  if (!timing.empty()) {
    struct Item {
      std::string id;
      const Ontology* o;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < onts.size(); ++i) items.push_back({stem_of(files[i]), &onts[i]});
    std::function<std::string(const Item&)> id_of = [](const Item& it) { return it.id; };
    auto tab = corpus::time_harness<Item>(
        "tableau", [](const Item& it) { tableau::classify_status(*it.o); }, items, id_of);
    auto det = corpus::time_harness<Item>(
        "detector", [](const Item& it) { antipattern::detect(*it.o); }, items, id_of);
    write_text(timing, corpus::to_json(std::vector<corpus::TimingReport>{tab, det}).dump(2) + "\n");
  }
  return 0;
}

int cmd_modularize(const std::string& input, std::optional<std::size_t> k, std::size_t min_classes,
                   const std::string& out) {
  auto o = manchester::read_file(input);
  modularize::Options opt;
  opt.k = k;
  opt.min_module_classes = min_classes;
  auto ex = modularize::build_modules(o, opt);
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  json modules = json::array();
  for (const auto& m : ex.modules) {
    std::string id = pipeline::record_id(m.module);
    write_omn(dir / (id + ".omn"), m.module);
    modules.push_back({{"id", id},
                       {"file", id + ".omn"},
                       {"head", m.head.iri()},
                       {"classes", m.module.classes().size()},
                       {"axioms", m.module.axioms().size()}});
  }
  json dropped = json::array();
  for (const auto& a : ex.dropped) dropped.push_back(display(a));
  json cfg{{"k", k ? json(*k) : json(nullptr)}, {"min_module_classes", min_classes}, {"source", o.id()}};
  json manifest{{"schema", "ontocc.modules/1"},
                {"provenance", provenance(0, cfg)},
                {"source", o.id()},
                {"k", k ? *k : modularize::default_k(o)},
                {"modules", modules},
                {"skipped_small", ex.skipped_small},
                {"dropped_axioms", dropped}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << json{{"modules", ex.modules.size()}, {"dropped_axioms", ex.dropped.size()}}.dump() << "\n";
  return 0;
}

int cmd_inject(const std::string& input, const std::string& pattern, std::uint64_t seed, std::size_t max_missing,
               const std::string& out) {
  auto id = pattern_arg(pattern);
  if (max_missing < 1 || max_missing > 2) throw UsageError("--max-missing must be 1 or 2");
  auto o = manchester::read_file(input);
  antipattern::InjectOptions opt;
  opt.max_missing = max_missing;
  auto [injected, report] = antipattern::inject(o, id, seed, opt);
  report.source_module = stem_of(input);
  std::string name = stem_of(input) + "-" + pattern;
  injected = injected.with_id(o.id() + "-" + pattern);
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  write_omn(dir / (name + ".omn"), injected);
  json cfg{{"pattern", pattern}, {"max_missing", max_missing}, {"input", stem_of(input)}};
  json rep = report_json(report, provenance(seed, cfg));
  write_text(dir / (name + ".report.json"), rep.dump(2) + "\n");
  std::cout << rep.dump(2) << "\n";
  return 0;
}

int cmd_translate(const std::vector<std::string>& inputs, const std::string& out, const std::string& levi) {
  auto files = omn_inputs(inputs);
  std::ostringstream docs;
  docs << json{{"schema", "ontocc.triples/1"}, {"provenance", provenance(0, {{"inputs", files.size()}})}}.dump()
       << "\n";
  json graphs = json::array();
  for (const auto& f : files) {
    auto doc = translate::to_triples(manchester::read_file(f));
    doc.id = stem_of(f);
    docs << translate::to_json(doc).dump() << "\n";
    json g = translate::to_json(translate::to_levi(doc));
    g["id"] = doc.id;
    graphs.push_back(std::move(g));
  }
  if (out.empty() || out == "-") std::cout << docs.str();
  else write_text(out, docs.str());
  if (!levi.empty()) write_text(levi, json{{"schema", "ontocc.levi/1"}, {"graphs", graphs}}.dump(2) + "\n");
  return 0;
}

int cmd_embed(const std::vector<std::string>& inputs, embed::TrainConfig cfg, int depth, int walks, bool lexical,
              const std::string& out, const std::string& jsonl) {
  if (out.empty()) throw UsageError("--out is required");
  cfg.validate();
  std::vector<embed::Sentence> sentences;
  for (const auto& f : omn_inputs(inputs)) {
    auto o = manchester::read_file(f);
    auto corpus = embed::random_walks(embed::project(o), depth, walks, derive_seed(cfg.seed, stem_of(f)));
    for (auto& s : corpus.sentences) sentences.push_back(std::move(s));
    if (lexical)
      for (auto& s : embed::lexical_corpus(o).sentences) sentences.push_back(std::move(s));
  }
  auto result = embed::train_skipgram(sentences, cfg);
  embed::write_binary(fs::path(out), result.table);
  if (!jsonl.empty()) {
    std::ostringstream s;
    embed::write_jsonl(s, result.table);
    write_text(jsonl, s.str());
  }
  json train{{"dim", cfg.dim}, {"window", cfg.window}, {"epochs", cfg.epochs}, {"negatives", cfg.negatives},
             {"depth", depth}, {"walks", walks}, {"lexical", lexical}};
  std::cout << json{{"schema", "ontocc.embed-run/1"},
                    {"provenance", provenance(cfg.seed, train)},
                    {"vocab_size", result.table.size()},
                    {"dim", result.table.dim()},
                    {"epoch_loss", result.epoch_loss}}
                   .dump(2)
            << "\n";
  return 0;
}

struct BuildArgs {
  std::vector<std::string> consistent, inconsistent;
  std::size_t budget = translate::kDefaultTokenBudget;
  std::uint64_t seed = 0;
  std::array<unsigned, 3> ratios{70, 15, 15};
  bool no_stratify = false;
  bool embed = false;
  embed::TrainConfig train;
  std::string out;
};

int cmd_build(const BuildArgs& a, const Common& common) {
  if (a.out.empty()) throw UsageError("--out is required");
  auto load = [&](const std::vector<std::string>& args, bool injected) {
    std::vector<pipeline::Module> mods;
    for (const auto& f : omn_inputs(args)) {
      pipeline::Module m{stem_of(f), manchester::read_file(f), std::nullopt};
      if (injected) {
        fs::path rep = f;
        rep.replace_extension(".report.json");
        std::ifstream in(rep);
        if (!in) throw std::runtime_error("no injection report next to " + f.string());
        auto j = json::parse(in);
        antipattern::InjectionReport r;
        r.pattern = pattern_arg(j.at("pattern").get<std::string>());
        r.source_module = j.value("source_module", "");
        m.injection = r;
      }
      mods.push_back(std::move(m));
    }
    return mods;
  };
  auto cons = load(a.consistent, false), inc = load(a.inconsistent, true);
  std::map<std::string, const pipeline::Module*> by_id;
  auto records = [&](const std::vector<pipeline::Module>& mods) {
    std::vector<corpus::DatasetRecord> out;
    for (const auto& m : mods) {
      if (!by_id.emplace(m.id, &m).second) throw std::runtime_error("duplicate module id " + m.id);
      corpus::DatasetRecord r;
      r.id = m.id;
      r.doc = translate::to_triples(m.ontology);
      r.doc.id = m.id;
      if (m.injection) {
        r.label = translate::Label::Inconsistent;
        r.pattern = m.injection->pattern;
      }
      out.push_back(std::move(r));
    }
    return out;
  };
  corpus::BuildStats stats;
  auto data = corpus::build_dataset(records(cons), records(inc), a.budget, derive_seed(a.seed, "balance"), &stats);
  pipeline::Config pc;
  pc.seed = a.seed;
  pc.train = a.train;
  parallel_for(data.size(), common.workers, [&](std::size_t i) {
    const auto& o = by_id.at(data[i].id)->ontology;
    data[i].status = tableau::classify_status(o);
    if (a.embed) data[i].embedding = pipeline::embed_module(o, data[i].id, pc);
  });
  auto manifest = corpus::split(data, a.ratios, derive_seed(a.seed, "split"), !a.no_stratify);
  json cfg{{"budget", a.budget}, {"ratios", a.ratios}, {"stratified", !a.no_stratify}, {"embed", a.embed},
           {"dim", a.train.dim}, {"inputs", {cons.size(), inc.size()}}};
  json prov = provenance(a.seed, cfg);
  fs::path dir(a.out);
  write_dataset_file(dir / "dataset.jsonl", data, prov);
  write_split_files(dir, data, manifest, prov);
  std::cout << json{{"records", data.size()},
                    {"consistent", stats.plan.consistent},
                    {"inconsistent", stats.plan.inconsistent()},
                    {"over_budget", stats.over_budget_consistent + stats.over_budget_inconsistent}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_eval(const std::string& dataset, const std::string& predictions, const std::string& split_file,
             const std::string& on, const std::string& out) {
  std::ifstream din(dataset);
  if (!din) throw std::runtime_error("cannot open " + dataset);
  auto records = corpus::read_dataset(din);
  if (!split_file.empty()) {
    std::ifstream sin(split_file);
    if (!sin) throw std::runtime_error("cannot open " + split_file);
    auto manifest = corpus::manifest_from_json(json::parse(sin));
    corpus::Split want = on == "train" ? corpus::Split::Train
                         : on == "validation" ? corpus::Split::Validation
                         : on == "test" ? corpus::Split::Test
                                        : throw UsageError("--on must be train, validation or test");
    std::erase_if(records, [&](const corpus::DatasetRecord& r) {
      auto it = manifest.assignment.find(r.id);
      return it == manifest.assignment.end() || it->second != want;
    });
  }
  std::map<std::string, int> preds;
  std::ifstream pin(predictions);
  if (!pin) throw std::runtime_error("cannot open " + predictions);
  for (std::string line; std::getline(pin, line);) {
    if (line.empty()) continue;
    auto j = json::parse(line);
    if (j.contains("schema")) continue;
    preds[j.at("id").get<std::string>()] = j.at("pred").get<int>();
  }
  auto metrics = corpus::to_json(corpus::evaluate(preds, records));
  metrics["provenance"] = provenance(0, {{"dataset", dataset}, {"predictions", predictions}, {"on", on}});
  emit(metrics, out);
  return 0;
}

int cmd_gen(corpus::SynthConfig cfg, const std::string& out, const Common& common) {
  if (out.empty()) throw UsageError("--out is required");
  cfg.validate();
  std::vector<Ontology> onts(cfg.n_ontologies);
  parallel_for(onts.size(), common.workers, [&](std::size_t i) { onts[i] = corpus::generate_one(cfg, i); });
  json files = json::array();
  for (const auto& o : onts) {
    std::string id = pipeline::record_id(o);
    write_omn(fs::path(out) / (id + ".omn"), o);
    files.push_back({{"id", id}, {"file", id + ".omn"}, {"classes", o.classes().size()}, {"axioms", o.axioms().size()}});
  }
  json c{{"n", cfg.n_ontologies},
         {"classes", {cfg.classes.min, cfg.classes.max}},
         {"properties", {cfg.properties.min, cfg.properties.max}},
         {"individuals", {cfg.individuals.min, cfg.individuals.max}},
         {"density", cfg.disjointness_density}};
  write_text(fs::path(out) / "manifest.json",
             json{{"schema", "ontocc.synth/1"}, {"provenance", provenance(cfg.seed, c)}, {"ontologies", files}}.dump(2) +
                 "\n");
  std::cout << json{{"ontologies", onts.size()}}.dump() << "\n";
  return 0;
}

int cmd_pipeline(pipeline::Config cfg, const std::string& out, bool quiet, bool timing, const Common& common) {
  if (out.empty()) throw UsageError("--out is required");
  cfg.workers = common.workers;
  auto progress = [&](const std::string& s) {
    if (!quiet) std::cerr << "[pipeline] " << s << "\n";
  };
  auto result = pipeline::run(cfg, progress);
  json prov = provenance(cfg.seed, cfg.to_json());
  fs::path dir(out);
  write_dataset_file(dir / "dataset.jsonl", result.dataset, prov);
  write_split_files(dir, result.dataset, result.manifest, prov);
  json report = pipeline::summary(result);
  report["schema"] = "ontocc.pipeline-report/1";
  report["provenance"] = prov;
  report["config"] = cfg.to_json();
  write_text(dir / "report.json", report.dump(2) + "\n");
  if (timing) {
    std::vector<const pipeline::Module*> items;
    for (const auto& r : result.dataset) items.push_back(&result.module(r.id));
    std::function<std::string(const pipeline::Module* const&)> id_of = [](const pipeline::Module* const& m) {
      return m->id;
    };
    auto tab = corpus::time_harness<const pipeline::Module*>(
        "tableau", [](const pipeline::Module* const& m) { tableau::classify_status(m->ontology); }, items, id_of);
    auto det = corpus::time_harness<const pipeline::Module*>(
        "detector", [](const pipeline::Module* const& m) { antipattern::detect(m->ontology); }, items, id_of);
    write_text(dir / "timing.json", corpus::to_json(std::vector<corpus::TimingReport>{tab, det}).dump(2) + "\n");
  }
  auto violations = result.soundness_violations();
  std::cout << json{{"records", result.dataset.size()}, {"soundness_violations", violations.size()}}.dump() << "\n";
  return violations.empty() ? 0 : 1;
}

int cmd_fetch(fetch::Config cfg) {
  if (cfg.out_dir.empty()) throw UsageError("--out is required");
  std::string key = fetch::api_key_from_env();  // before touching the disk
  auto report = fetch::run(cfg, key);
  std::cout << json{{"downloaded", report.downloaded},
                    {"skipped", report.skipped},
                    {"retries", report.retries},
                    {"manifest", (cfg.out_dir / "manifest.json").string()}}
                   .dump()
            << "\n";
  return 0;
}

std::array<unsigned, 3> parse_ratios(const std::string& s) {
  std::array<unsigned, 3> r{};
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ',' || c2 != ',' || r[0] + r[1] + r[2] != 100)
    throw UsageError("--ratios expects three comma-separated integers summing to 100");
  return r;
}

corpus::Range parse_range(const std::string& s, const char* flag) {
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      std::size_t v = std::stoul(s);
      return {v, v};
    }
    return {std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects N or MIN:MAX");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontocc: anti-pattern consistency corpus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));
  app.footer(std::string("Environment:\n  ") + fetch::kApiKeyVariable +
             "  API key for the ontology repository (used by fetch)\n\n"
             "Exit status: 0 success, 1 domain error, 2 usage error.");
  Common common;
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  std::function<int()> action;

  // fetch
  fetch::Config fcfg;
  fcfg.base_url = "https://data.bioontology.org";
  std::string fetch_out;
  int backoff_ms = 250;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download ontologies from a REST repository");
  fetch_cmd->footer(std::string("The API key is read from ") + fetch::kApiKeyVariable + ".");
  fetch_cmd->add_option("--base-url", fcfg.base_url, "Repository root URL")->capture_default_str();
  fetch_cmd->add_option("--out", fetch_out, "Download directory")->required();
  fetch_cmd->add_option("--only", fcfg.only, "Restrict to these ontology ids");
  fetch_cmd->add_option("--rate", fcfg.requests_per_second, "Max requests per second")->capture_default_str();
  fetch_cmd->add_option("--max-attempts", fcfg.max_attempts, "Attempts per request")->capture_default_str();
  fetch_cmd->add_option("--backoff-ms", backoff_ms, "Initial retry delay")->capture_default_str();
  fetch_cmd->callback([&] {
    action = [&] {
      fcfg.out_dir = fetch_out;
      fcfg.backoff = std::chrono::milliseconds(backoff_ms);
      return cmd_fetch(fcfg);
    };
  });

  // modularize
  std::string mod_in, mod_out;
  std::optional<std::size_t> mod_k;
  std::size_t mod_min = 0;
  auto* mod_cmd = app.add_subcommand("modularize", "Split an ontology into topic modules");
  mod_cmd->add_option("input", mod_in, "Manchester syntax file")->required()->check(CLI::ExistingFile);
  mod_cmd->add_option("--k", mod_k, "Number of modules (default ceil(classes/200))")->check(CLI::PositiveNumber);
  mod_cmd->add_option("--min-module-classes", mod_min, "Drop smaller modules")->capture_default_str();
  mod_cmd->add_option("--out", mod_out, "Output directory")->required();
  mod_cmd->callback([&] { action = [&] { return cmd_modularize(mod_in, mod_k, mod_min, mod_out); }; });

  // inject
  std::string inj_in, inj_pattern, inj_out;
  std::uint64_t inj_seed = 0;
  std::size_t inj_missing = 2;
  auto* inj_cmd = app.add_subcommand("inject", "Complete one anti-pattern instance in an ontology");
  inj_cmd->add_option("input", inj_in, "Manchester syntax file")->required()->check(CLI::ExistingFile);
  inj_cmd->add_option("--pattern", inj_pattern, "Pattern id, e.g. EID or UEWI_2")->required();
  inj_cmd->add_option("--seed", inj_seed, "Site selection seed")->capture_default_str();
  inj_cmd->add_option("--max-missing", inj_missing, "Axioms that may be added (1 or 2)")->capture_default_str();
  inj_cmd->add_option("--out", inj_out, "Output directory")->capture_default_str();
  inj_cmd->callback([&] { action = [&] { return cmd_inject(inj_in, inj_pattern, inj_seed, inj_missing, inj_out); }; });

  // translate
  std::vector<std::string> tr_in;
  std::string tr_out, tr_levi;
  auto* tr_cmd = app.add_subcommand("translate", "Translate ontologies into English triples (JSONL)");
  tr_cmd->add_option("inputs", tr_in, "Files or directories of .omn files")->required();
  tr_cmd->add_option("--out", tr_out, "JSONL output (default stdout)");
  tr_cmd->add_option("--levi", tr_levi, "Also write Levi graphs as JSON");
  tr_cmd->callback([&] { action = [&] { return cmd_translate(tr_in, tr_out, tr_levi); }; });

  // embed
  std::vector<std::string> em_in;
  embed::TrainConfig em_cfg;
  int em_depth = 4, em_walks = 10;
  bool em_lexical = false;
  std::string em_out, em_jsonl;
  auto* em_cmd = app.add_subcommand("embed", "Train skip-gram embeddings on random walks");
  em_cmd->add_option("inputs", em_in, "Files or directories of .omn files")->required();
  em_cmd->add_option("--dim", em_cfg.dim, "Vector size")->capture_default_str();
  em_cmd->add_option("--window", em_cfg.window, "Context window")->capture_default_str();
  em_cmd->add_option("--epochs", em_cfg.epochs, "Training epochs")->capture_default_str();
  em_cmd->add_option("--negatives", em_cfg.negatives, "Negative samples per pair")->capture_default_str();
  em_cmd->add_option("--min-count", em_cfg.min_count, "Minimum token count")->capture_default_str();
  em_cmd->add_option("--seed", em_cfg.seed, "Random seed")->capture_default_str();
  em_cmd->add_option("--depth", em_depth, "Walk depth")->capture_default_str();
  em_cmd->add_option("--walks", em_walks, "Walks per node")->capture_default_str();
  em_cmd->add_flag("--lexical", em_lexical, "Add the lexical (word) corpus");
  em_cmd->add_option("--out", em_out, "Binary embedding table")->required();
  em_cmd->add_option("--jsonl", em_jsonl, "Also write the table as JSONL");
  em_cmd->callback([&] {
    action = [&] { return cmd_embed(em_in, em_cfg, em_depth, em_walks, em_lexical, em_out, em_jsonl); };
  });

  // build-dataset
  BuildArgs ba;
  std::string ba_ratios = "70,15,15";
  auto* ba_cmd = app.add_subcommand("build-dataset", "Balance, label and split modules into a dataset");
  ba_cmd->add_option("--consistent", ba.consistent, "Consistent modules (.omn files or directories)")->required();
  ba_cmd->add_option("--inconsistent", ba.inconsistent,
                     "Injected modules; each needs the .report.json written by inject")
      ->required();
  ba_cmd->add_option("--budget", ba.budget, "Token budget")->capture_default_str();
  ba_cmd->add_option("--seed", ba.seed, "Seed for sampling and splitting")->capture_default_str();
  ba_cmd->add_option("--ratios", ba_ratios, "train,validation,test percentages")->capture_default_str();
  ba_cmd->add_flag("--no-stratify", ba.no_stratify, "Do not stratify the split by label");
  ba_cmd->add_flag("--embed", ba.embed, "Attach pooled per-module embeddings");
  ba_cmd->add_option("--dim", ba.train.dim, "Embedding size")->capture_default_str();
  ba_cmd->add_option("--out", ba.out, "Output directory")->required();
  add_workers(ba_cmd);
  ba_cmd->callback([&] {
    action = [&] {
      ba.ratios = parse_ratios(ba_ratios);
      return cmd_build(ba, common);
    };
  });

  // check
  std::vector<std::string> ck_in;
  std::string ck_out, ck_timing;
  bool ck_detect = false;
  auto* ck_cmd = app.add_subcommand("check", "Consistency and coherence of ontologies (one JSON line each)");
  ck_cmd->add_option("inputs", ck_in, "Files or directories of .omn files")->required();
  ck_cmd->add_option("--out", ck_out, "Output file (default stdout)");
  ck_cmd->add_option("--timing", ck_timing, "Write tableau and detector timings to this JSON file");
  ck_cmd->add_flag("--detect", ck_detect, "Also list detected anti-patterns");
  add_workers(ck_cmd);
  ck_cmd->callback([&] { action = [&] { return cmd_check(ck_in, ck_out, ck_timing, ck_detect, common); }; });

  // eval
  std::string ev_data, ev_pred, ev_split, ev_on = "test", ev_out;
  auto* ev_cmd = app.add_subcommand("eval", "Score predictions against a dataset");
  ev_cmd->add_option("--dataset", ev_data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--predictions", ev_pred, "Predictions JSONL {id, pred, score}")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--split", ev_split, "Split manifest; restricts scoring to --on")->check(CLI::ExistingFile);
  ev_cmd->add_option("--on", ev_on, "Split to score")->capture_default_str();
  ev_cmd->add_option("--out", ev_out, "Metrics JSON (default stdout)");
  ev_cmd->callback([&] { action = [&] { return cmd_eval(ev_data, ev_pred, ev_split, ev_on, ev_out); }; });

  // gen
  corpus::SynthConfig gen_cfg;
  std::string gen_classes = "20:60", gen_props = "3:8", gen_inds = "4:16", gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate consistent, coherent synthetic ontologies");
  gen_cmd->add_option("--n", gen_cfg.n_ontologies, "Number of ontologies")->capture_default_str();
  gen_cmd->add_option("--classes", gen_classes, "Classes per ontology, MIN:MAX")->capture_default_str();
  gen_cmd->add_option("--properties", gen_props, "Properties per ontology, MIN:MAX")->capture_default_str();
  gen_cmd->add_option("--individuals", gen_inds, "Individuals per ontology, MIN:MAX")->capture_default_str();
  gen_cmd->add_option("--density", gen_cfg.disjointness_density, "Sibling disjointness probability")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_cfg.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();
  add_workers(gen_cmd);
  gen_cmd->callback([&] {
    action = [&] {
      gen_cfg.classes = parse_range(gen_classes, "--classes");
      gen_cfg.properties = parse_range(gen_props, "--properties");
      gen_cfg.individuals = parse_range(gen_inds, "--individuals");
      return cmd_gen(gen_cfg, gen_out, common);
    };
  });

  // pipeline
  pipeline::Config pcfg;
  pcfg.synth.n_ontologies = 20;
  pcfg.synth.classes = {40, 120};
  std::string p_out, p_classes = "40:120", p_ratios = "70,15,15";
  bool p_no_embed = false, p_quiet = false, p_timing = false, p_no_stratify = false;
  auto* p_cmd = app.add_subcommand("pipeline", "Generate, modularize, inject, translate, embed, balance and split");
  p_cmd->add_option("--seed", pcfg.seed, "Global seed")->capture_default_str();
  p_cmd->add_option("--n", pcfg.synth.n_ontologies, "Synthetic source ontologies")->capture_default_str();
  p_cmd->add_option("--classes", p_classes, "Classes per source, MIN:MAX")->capture_default_str();
  p_cmd->add_option("--module-classes", pcfg.module_classes, "Target classes per module")->capture_default_str();
  p_cmd->add_option("--min-module-classes", pcfg.min_module_classes, "Drop smaller modules")->capture_default_str();
  p_cmd->add_option("--budget", pcfg.budget, "Token budget")->capture_default_str();
  p_cmd->add_option("--max-missing", pcfg.max_missing, "Axioms an injection may add")->capture_default_str();
  p_cmd->add_option("--ratios", p_ratios, "train,validation,test percentages")->capture_default_str();
  p_cmd->add_flag("--no-stratify", p_no_stratify, "Do not stratify the split by label");
  p_cmd->add_flag("--no-embed", p_no_embed, "Skip per-module embeddings");
  p_cmd->add_option("--dim", pcfg.train.dim, "Embedding size")->capture_default_str();
  p_cmd->add_option("--window", pcfg.train.window, "Context window")->capture_default_str();
  p_cmd->add_option("--epochs", pcfg.train.epochs, "Training epochs")->capture_default_str();
  p_cmd->add_option("--walks", pcfg.walks_per_node, "Walks per node")->capture_default_str();
  p_cmd->add_option("--depth", pcfg.walk_depth, "Walk depth")->capture_default_str();
  p_cmd->add_flag("--timing", p_timing, "Also time tableau and detector on every record (timing.json)");
  p_cmd->add_flag("--quiet", p_quiet, "No progress on stderr");
  p_cmd->add_option("--out", p_out, "Output directory")->required();
  add_workers(p_cmd);
  p_cmd->callback([&] {
    action = [&] {
      pcfg.synth.classes = parse_range(p_classes, "--classes");
      pcfg.ratios = parse_ratios(p_ratios);
      pcfg.stratified = !p_no_stratify;
      pcfg.embed = !p_no_embed;
      return cmd_pipeline(pcfg, p_out, p_quiet, p_timing, common);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const manchester::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const fetch::HttpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& line : e.log()) std::cerr << "  " << line << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
