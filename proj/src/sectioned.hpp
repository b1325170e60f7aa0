#pragma once
#include <string>
#include <utility>
#include <vector>

namespace qconic {

// Minimal sectioned key-value text: ordered sections with ordered keys.
// Certificates and scenario files use it; the writer is canonical so files
// round-trip byte-exactly.
struct Section {
  std::string name;
  std::vector<std::pair<std::string, std::string>> kv;

  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key) const;            // fails when absent
  std::string get_or(const std::string& key, std::string def) const;
};

struct SectionedDoc {
  std::vector<Section> sections;

  std::vector<const Section*> all(const std::string& name) const;
  const Section* first(const std::string& name) const;

  static SectionedDoc parse(const std::string& text);
  std::string write() const;
};

}  // namespace qconic
