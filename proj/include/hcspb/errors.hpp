#pragma once

#include <stdexcept>
#include <string>

namespace hcspb {

enum class Errc {
  syntax,
  scope,
  duplicate_label,
  shared_var_in_parallel,
  mixed_level,
  unbound_variable,
  division_by_zero,
  domain_mismatch,
  not_disjoint,
  clock_skew,
  done_in_type,
  quantifier_not_ground,
  interval_out_of_domain,
  unsupported_formula,
  non_finite_state,
  script_exhausted,
  missing_annotation,
  label_not_found,
  unsupported_construct,
  invalid_constants,
  empty_init_region,
  io_error,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

struct SourcePos {
  int line = 0;
  int col = 0;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, SourcePos pos)
      : Error(Errc::syntax, msg + " (line " + std::to_string(pos.line) + ", column " +
                                std::to_string(pos.col) + ")"),
        pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace hcspb
