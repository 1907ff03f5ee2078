#include "ontocc/fetch.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <thread>

#include <httplib.h>

#include "ontocc/provenance.hpp"

namespace ontocc::fetch {

HttpError::HttpError(std::string url, int status, int attempts, std::vector<std::string> log)
    : std::runtime_error("GET " + url + " failed after " + std::to_string(attempts) + " attempt(s)" +
                         (status ? " (last status " + std::to_string(status) + ")" : "")),
      url_(std::move(url)),
      status_(status),
      attempts_(attempts),
      log_(std::move(log)) {}

std::string api_key_from_env(const char* variable) {
  const char* v = std::getenv(variable);
  if (!v || !*v) throw AuthError(std::string("API key missing: set ") + variable);
  return v;
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path below the origin, no trailing '/'
};

Endpoint parse_base(const std::string& base) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base, m, re)) throw std::invalid_argument("bad repository URL '" + base + "'");
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

class Session {
 public:
  Session(const Config& cfg, const std::string& key, Report& report)
      : cfg_(cfg), ep_(parse_base(cfg.base_url)), client_(ep_.origin), key_(key), report_(report) {
    client_.set_follow_location(true);
    client_.set_connection_timeout(cfg.timeout);
    client_.set_read_timeout(cfg.timeout);
  }

  // Body of a successful GET, with rate limiting and retries.
  std::string get(const std::string& path) {
    const std::string url = ep_.origin + ep_.prefix + path;
    httplib::Headers headers{{"Authorization", "apikey token=" + key_}, {"Accept", "application/json"}};
    std::vector<std::string> log;
    auto wait = cfg_.backoff;
    int status = 0;
    for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
      throttle();
      auto res = client_.Get(ep_.prefix + path, headers);
      if (res) {
        status = res->status;
        if (status == 200) return res->body;
        if (status == 401 || status == 403)
          throw AuthError("repository rejected the API key (HTTP " + std::to_string(status) + ")");
        log.push_back("attempt " + std::to_string(attempt) + ": HTTP " + std::to_string(status));
        if (status != 429 && status < 500) break;  // not worth retrying
      } else {
        log.push_back("attempt " + std::to_string(attempt) + ": " + httplib::to_string(res.error()));
      }
      if (attempt < cfg_.max_attempts) {
        ++report_.retries;
        std::this_thread::sleep_for(wait);
        wait *= 2;
      }
    }
    throw HttpError(url, status, static_cast<int>(log.size()), log);
  }

 private:
  void throttle() {
    if (cfg_.requests_per_second <= 0) return;
    auto gap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / cfg_.requests_per_second));
    auto now = std::chrono::steady_clock::now();
    if (last_ && now < *last_ + gap) std::this_thread::sleep_until(*last_ + gap);
    last_ = std::chrono::steady_clock::now();
  }

  const Config& cfg_;
  Endpoint ep_;
  httplib::Client client_;
  std::string key_;
  Report& report_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

bool safe_id(const std::string& id) {
  static const std::regex re(R"(^[A-Za-z0-9][A-Za-z0-9_.\-]*$)");
  return std::regex_match(id, re);
}

void write_atomically(const std::filesystem::path& path, const std::string& data) {
  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

nlohmann::json manifest_json(const Config& cfg, const std::vector<Entry>& entries) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries)
    list.push_back({{"id", e.id}, {"file", e.file}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  return {{"schema", "ontocc.fetch/1"},
          {"provenance", provenance(0, {{"base_url", cfg.base_url}, {"only", cfg.only}})},
          {"source", cfg.base_url},
          {"ontologies", std::move(list)}};
}

std::vector<Entry> read_manifest(const std::filesystem::path& out_dir) {
  std::ifstream in(out_dir / "manifest.json");
  if (!in) return {};
  std::vector<Entry> out;
  auto j = nlohmann::json::parse(in);
  for (const auto& e : j.at("ontologies"))
    out.push_back({e.at("id").get<std::string>(), e.at("file").get<std::string>(),
                   e.at("bytes").get<std::uintmax_t>(), e.at("sha256").get<std::string>()});
  return out;
}

Report run(const Config& cfg, const std::string& api_key) {
  if (api_key.empty()) throw AuthError("API key is empty");
  Report report;
  Session session(cfg, api_key, report);

  auto listing = nlohmann::json::parse(session.get("/ontologies"), nullptr, false);
  if (!listing.is_array()) throw std::runtime_error("ontology listing is not a JSON array");
  std::vector<std::string> ids;
  for (const auto& item : listing) {
    if (!item.is_object() || !item.contains("acronym") || !item["acronym"].is_string()) continue;
    std::string id = item["acronym"].get<std::string>();
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), id) == cfg.only.end()) continue;
    if (!safe_id(id)) throw std::runtime_error("refusing unsafe ontology id '" + id + "'");
    ids.push_back(id);
  }

  std::filesystem::create_directories(cfg.out_dir);
  std::map<std::string, Entry> previous;
  for (auto& e : read_manifest(cfg.out_dir)) previous.emplace(e.id, e);

  for (const auto& id : ids) {
    const std::string file = id + ".owl";
    const auto path = cfg.out_dir / file;
    if (auto it = previous.find(id); it != previous.end() && std::filesystem::exists(path) &&
                                     sha256_file(path) == it->second.sha256) {
      report.manifest.push_back(it->second);
      ++report.skipped;
      continue;
    }
    std::string body = session.get("/ontologies/" + id + "/download");
    write_atomically(path, body);
    report.manifest.push_back({id, file, body.size(), sha256_hex(body)});
    ++report.downloaded;
    // keep entries of the previous run that this run has not reached yet
    std::vector<Entry> snapshot = report.manifest;
    for (const auto& [pid, e] : previous)
      if (std::none_of(snapshot.begin(), snapshot.end(), [&](const Entry& x) { return x.id == pid; }))
        snapshot.push_back(e);
    write_atomically(cfg.out_dir / "manifest.json", manifest_json(cfg, snapshot).dump(2) + "\n");
  }
  write_atomically(cfg.out_dir / "manifest.json", manifest_json(cfg, report.manifest).dump(2) + "\n");
  return report;
}

}  // namespace ontocc::fetch
