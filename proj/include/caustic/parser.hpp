#pragma once

// Text syntax for forms, points and extension moduli:
//   x y z        variables (t is the extension generator, only with --ext)
//   17  3/4  i   Gaussian rational constants
//   + - * / ^ ( )
// Multiplication is always explicit; / only divides by constants and ^
// takes a non-negative integer exponent.

#include <stdexcept>
#include <string>

#include "caustic/tripoly.hpp"

namespace caustic {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }
  /// The message without the position suffix.
  const std::string& reason() const { return reason_; }

 private:
  std::size_t pos_;
  std::string reason_;
};

/// Context Q(i)[t]/(p) for a univariate polynomial in t (must be squarefree).
ContextPtr parse_extension(const std::string& text);

/// Homogeneous form in x, y, z. `base` may be null when t is not allowed.
TriPoly parse_form(const std::string& text, const ContextPtr& base);

/// Projective point "a:b:c" with coordinates over `base` (null means Q(i)).
Vec3 parse_point(const std::string& text, const ContextPtr& base);

}  // namespace caustic
