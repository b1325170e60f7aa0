#pragma once
#include <stdexcept>
#include <string>

namespace qconic {

enum class errc {
  zero_element,
  division_by_zero,
  place_mismatch,
  dimension_mismatch,
  decomposition_mismatch,
  shape_not_normalized,
  even_dimension,
  disc_not_one,
  not_totally_decomposable,
  variable_collision,
  invalid_witness,
  step_failure,
  precondition,
  parse,
  unsupported,
};

class error : public std::runtime_error {
public:
  error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace qconic
