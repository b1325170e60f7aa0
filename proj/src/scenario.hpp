#pragma once
#include "involution.hpp"
#include "sectioned.hpp"

namespace qconic {

// certificate (de)serialization against a field; round-trips exactly
std::vector<Section> write_certificate(const std::string& name, const Certificate& cert,
                                       const TowerPtr& field);
CertPtr parse_certificate(const SectionedDoc& doc, const std::string& name, const TowerPtr& field);

std::vector<Section> write_rewrite_chain(const std::string& name, const RewriteChain& chain,
                                         const TowerPtr& field);
RewriteChain parse_rewrite_chain(const SectionedDoc& doc, const std::string& name,
                                 const TowerPtr& field);

// Declarative scenario: field setup, named objects, committed certificates,
// and expectations over the deciders.
struct Expectation {
  std::string label;
  std::string op;
  const Section* section = nullptr;
};

struct Scenario {
  std::string name;
  std::vector<std::string> tags;
  SectionedDoc doc;
  static Scenario parse_text(const std::string& text);
  static Scenario load(const std::string& path);
};

struct ExpectationOutcome {
  std::string label;
  std::string op;
  std::string status;  // pass | fail | unknown
  std::string detail;
  uint64_t budget_spent = 0;
};

struct Report {
  std::string scenario;
  bool pass = false;
  std::vector<ExpectationOutcome> outcomes;
  uint64_t budget_spent = 0;
  std::string error;  // parse / replay failures

  std::string json() const;  // deterministic rendering
};

Report run_scenario(const Scenario& s, uint64_t budget);

// builtin scenarios live in the scenario directory; a base name expands to
// its per-prime variants
std::vector<std::string> builtin_scenarios(const std::string& dir = {});
std::vector<std::string> resolve_scenario(const std::string& name, const std::string& dir = {});
std::string scenario_dir_default();

}  // namespace qconic
