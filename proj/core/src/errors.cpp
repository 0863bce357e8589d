#include "xypurify/errors.hpp"

namespace xypurify {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::shape: return "shape";
    case ErrorKind::label: return "label";
    case ErrorKind::degenerate_coupling: return "degenerate_coupling";
    case ErrorKind::negative_duration: return "negative_duration";
    case ErrorKind::below_threshold: return "below_threshold";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::zero_probability: return "zero_probability";
    case ErrorKind::singular_expression: return "singular_expression";
    case ErrorKind::analysis: return "analysis";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::truncation: return "truncation";
  }
  return "unknown";
}

bool is_validation(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::zero_probability:
    case ErrorKind::singular_expression:
    case ErrorKind::analysis:
    case ErrorKind::stiffness:
    case ErrorKind::truncation:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace xypurify
