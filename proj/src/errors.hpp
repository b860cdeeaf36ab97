#pragma once

#include <stdexcept>
#include <string>

namespace l2boost {

enum class errc {
  invalid_argument = 1,
  constant_column,
  length_mismatch,
  singular_gram,
  not_symmetric,
  parse_error,
  missing_column,
  zero_residual,
  oracle_unavailable,
  invalid_threshold,
  domain_error,
  no_convergence,
  insufficient_eigen_scan,
  io_error,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace l2boost
