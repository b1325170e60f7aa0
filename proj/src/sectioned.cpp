#include "sectioned.hpp"

#include <sstream>

#include "errors.hpp"

namespace qconic {

const std::string* Section::find(const std::string& key) const {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}

std::string Section::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) fail(errc::parse, "missing key '" + key + "' in section [" + name + "]");
  return *v;
}

std::string Section::get_or(const std::string& key, std::string def) const {
  const std::string* v = find(key);
  return v ? *v : std::move(def);
}

std::vector<const Section*> SectionedDoc::all(const std::string& name) const {
  std::vector<const Section*> out;
  for (const auto& s : sections) {
    std::string head = s.name.substr(0, s.name.find(' '));
    if (s.name == name || head == name) out.push_back(&s);
  }
  return out;
}

const Section* SectionedDoc::first(const std::string& name) const {
  auto v = all(name);
  return v.empty() ? nullptr : v[0];
}

SectionedDoc SectionedDoc::parse(const std::string& text) {
  SectionedDoc doc;
  std::istringstream in(text);
  std::string line;
  Section* cur = nullptr;
  size_t lineno = 0;
  auto strip = [](const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    lineno++;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        fail(errc::parse, "line " + std::to_string(lineno) + ": unterminated section header");
      doc.sections.push_back({strip(s.substr(1, s.size() - 2)), {}});
      cur = &doc.sections.back();
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos || !cur)
      fail(errc::parse, "line " + std::to_string(lineno) + ": expected 'key = value'");
    cur->kv.push_back({strip(s.substr(0, eq)), strip(s.substr(eq + 1))});
  }
  return doc;
}

std::string SectionedDoc::write() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : sections) {
    if (!first) os << "\n";
    first = false;
    os << "[" << s.name << "]\n";
    for (const auto& [k, v] : s.kv) os << k << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace qconic
