#pragma once

#include <filesystem>
#include <string>

#include "ontocc/manchester.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return ONTOCC_FIXTURES; }

inline ontocc::Ontology pattern_fixture(const std::string& stem) {
  return ontocc::manchester::read_file(fixture_dir() / "patterns" / (stem + ".omn"));
}

inline ontocc::EntityName cls(const std::string& base, const std::string& local) {
  return ontocc::class_name("http://example.org/ontocc/" + base + "#" + local);
}

}  // namespace testing
