#pragma once

#include <stdexcept>
#include <string>

namespace coronakit {

enum class ErrorKind {
  Domain,         // argument outside the admissible set (|z| > 1, r not in (0,1], ...)
  Degree,         // derivative order above truncation degree
  Shape,          // mismatched component counts or field shapes
  Aliasing,       // boundary grid too small for the truncation degree
  Range,          // composition with a map leaving the disc
  Stencil,        // grid too coarse for the differencing stencil
  Certification,  // corona condition could not be certified
  Refinement,     // Neumann refinement refused (|alpha| >= 1)
  Subharmonic,    // negative Laplacian samples
  Budget,         // extension budget not met
  Invalid,        // malformed input or invariant violation
};

const char* to_string(ErrorKind kind) noexcept;

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

}  // namespace coronakit
