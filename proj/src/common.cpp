#include <sstream>

#include "ptep/errors.hpp"
#include "ptep/precision.hpp"

namespace ptep {

namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string text = "validation failed";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    text += i == 0 ? ": " : "; ";
    text += violations[i];
  }
  return text;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : InvalidInput(join_violations(violations)), violations_(std::move(violations)) {}

std::string to_decimal(const ExtReal& x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<ExtReal>::max_digits10);
  os << std::scientific << x;
  return os.str();
}

ExtReal ext_from_decimal(const std::string& text) {
  try {
    ExtReal x(text);
    if (!is_finite(x)) throw InvalidInput("non-finite number: " + text);
    return x;
  } catch (const std::runtime_error&) {
    throw InvalidInput("cannot parse number: " + text);
  }
}

}  // namespace ptep
