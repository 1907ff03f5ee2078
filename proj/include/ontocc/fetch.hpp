#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ontocc::fetch {

// Environment variable holding the repository API key.
inline constexpr const char* kApiKeyVariable = "ONTOCC_API_KEY";

class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HttpError : public std::runtime_error {
 public:
  HttpError(std::string url, int status, int attempts, std::vector<std::string> log);
  const std::string& url() const { return url_; }
  int status() const { return status_; }  // 0 when no response was received
  int attempts() const { return attempts_; }
  const std::vector<std::string>& log() const { return log_; }  // one line per attempt

 private:
  std::string url_;
  int status_;
  int attempts_;
  std::vector<std::string> log_;
};

// Reads the key from the environment; AuthError when unset or empty.
std::string api_key_from_env(const char* variable = kApiKeyVariable);

struct Config {
  std::string base_url;  // e.g. "https://data.bioontology.org"
  std::filesystem::path out_dir;
  std::vector<std::string> only;  // restrict to these ids; empty means all listed
  double requests_per_second = 4;
  int max_attempts = 4;
  std::chrono::milliseconds backoff{250};  // doubled after each failed attempt
  std::chrono::seconds timeout{60};
};

struct Entry {
  std::string id;
  std::string file;  // relative to out_dir
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct Report {
  std::vector<Entry> manifest;
  std::size_t downloaded = 0;
  std::size_t skipped = 0;  // already present with a matching checksum
  std::size_t retries = 0;
};

// GET {base}/ontologies lists entries with an "acronym"; each is downloaded
// from {base}/ontologies/{acronym}/download into out_dir/{acronym}.owl with
// an "Authorization: apikey token=KEY" header. The manifest
// (out_dir/manifest.json) is rewritten atomically after every file, so an
// interrupted run resumes where it stopped. 401/403 raise AuthError; 429 and
// 5xx are retried with exponential backoff, then raise HttpError.
Report run(const Config& cfg, const std::string& api_key);

nlohmann::json manifest_json(const Config& cfg, const std::vector<Entry>& entries);
std::vector<Entry> read_manifest(const std::filesystem::path& out_dir);

}  // namespace ontocc::fetch
