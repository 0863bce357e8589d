#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xypurify {

enum class ErrorKind {
  // Input validation failures.
  domain,
  shape,
  label,
  degenerate_coupling,
  negative_duration,
  below_threshold,
  geometry,
  configuration,
  // Numerical failures.
  zero_probability,
  singular_expression,
  analysis,
  stiffness,
  truncation,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds that signal a rejected input rather than a numerical
/// breakdown. The CLI maps these to exit code 2 and the rest to 3.
bool is_validation(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace xypurify
