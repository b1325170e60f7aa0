#include "verdict.hpp"

#include <cstdlib>

namespace qconic {

uint64_t default_budget() {
  if (const char* e = std::getenv("QCONIC_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 50000;
}

}  // namespace qconic
