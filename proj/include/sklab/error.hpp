#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace sklab {

enum class ErrorKind {
  invalid_argument,
  grid_too_small,
  grid_mismatch,
  out_of_domain,
  unknown_entry,
  negative_density,
  exponent_constraint,  // beta >= n+1
  model_only,
  order_inconsistent,
  malformed_input,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Short human-readable number for names and messages ("0.5", "2", "1e-06").
inline std::string format_number(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace sklab
