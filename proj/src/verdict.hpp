#pragma once
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "place.hpp"

namespace qconic {

enum class Status { Proved, Refuted, Unknown };

inline const char* status_str(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Refuted: return "refuted";
    default: return "unknown";
  }
}

// deterministic work meter: every candidate evaluation ticks once
struct Budget {
  uint64_t limit = 50000;
  uint64_t spent = 0;
  explicit Budget(uint64_t lim = 50000) : limit(lim) {}
  bool tick(uint64_t n = 1) {
    spent += n;
    return spent <= limit;
  }
  bool ok() const { return spent <= limit; }
};

uint64_t default_budget();  // QCONIC_BUDGET env override

// Proof tree for isotropy / anisotropy decisions reached through completions:
// springer nodes split into residue parts, leaves are complete base-decider
// transcripts or exact witnesses.
struct ChainNode {
  std::string rule;  // springer | witness | dim0 | dim1 | dim2 | prime-field |
                     // qq-hasse-minkowski | gff-hasse-minkowski | square-transcript
  std::string place;           // printable place for springer nodes
  PlaceSpec place_spec;        // replayable place for springer nodes
  std::string transcript;      // base-decider data (local symbols etc.)
  std::vector<FieldElement> witness;
  int iso_part = -1;           // springer+isotropic: 0 = unit part, 1 = odd part
  std::vector<int> idx;        // auxiliary indices (entry pair etc.)
  std::vector<std::shared_ptr<const ChainNode>> children;
};
using ChainPtr = std::shared_ptr<const ChainNode>;

struct Certificate {
  enum class Kind {
    IsotropyWitness,
    CompletionChain,
    IsometryChain,
    WittSplitTrace,
    Composite,
  };
  Kind kind = Kind::CompletionChain;

  // IsotropyWitness
  std::vector<FieldElement> vector;

  // CompletionChain
  ChainPtr chain;

  // IsometryChain: each step replaces the diagonal pair at (i, j) by the
  // congruent pair under T (exact 2x2 congruence T^t D T = D'); perm maps
  // final positions to target positions.
  struct IsoStep {
    int i = 0, j = 0;
    std::array<FieldElement, 4> T;  // row major
  };
  std::vector<IsoStep> steps;
  std::vector<int> perm;

  // WittSplitTrace: basis U (columns) with U^t diag(q) U = H^index ⊥ kernel
  std::vector<std::vector<FieldElement>> basis;
  int witt_index = 0;
  std::vector<FieldElement> kernel_entries;

  // Composite
  std::vector<std::shared_ptr<const Certificate>> parts;
  std::string label;
};
using CertPtr = std::shared_ptr<const Certificate>;

struct Verdict {
  Status status = Status::Unknown;
  CertPtr cert;
  uint64_t budget_spent = 0;
  std::string note;

  static Verdict proved(CertPtr c, uint64_t spent = 0, std::string note = {}) {
    return {Status::Proved, std::move(c), spent, std::move(note)};
  }
  static Verdict refuted(CertPtr c, uint64_t spent = 0, std::string note = {}) {
    return {Status::Refuted, std::move(c), spent, std::move(note)};
  }
  static Verdict unknown(std::string note = {}, uint64_t spent = 0) {
    return {Status::Unknown, nullptr, spent, std::move(note)};
  }
  bool is(Status s) const { return status == s; }
};

}  // namespace qconic
