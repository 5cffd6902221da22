#pragma once

#include <stdexcept>
#include <string>

namespace quadsym {

// std::invalid_argument and std::domain_error cover bad parameters and
// convergence-domain violations. The types below cover the remaining cases.

/// Requested data or construction is outside what the library provides.
class not_available_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition of a mathematical statement does not hold (e.g. p | D).
class not_applicable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical tolerance cannot be certified with the available terms.
class precision_error : public std::runtime_error {
 public:
  precision_error(const std::string& what, long required_terms)
      : std::runtime_error(what), required_terms_(required_terms) {}
  long required_terms() const noexcept { return required_terms_; }

 private:
  long required_terms_;
};

}  // namespace quadsym
