#pragma once

#include <stdexcept>
#include <string>

namespace fhist {

// Precondition or input-format violation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A desk-scale cap (pattern size, enumeration size, part count) was exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimization or radius computation has no feasible point.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace fhist
