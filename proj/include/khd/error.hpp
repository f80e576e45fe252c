#pragma once

#include <stdexcept>
#include <string>

namespace khd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (PD JSON, braid JSON, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid link diagram or braid word.
class DiagramError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch, wrong coefficient domain, d_out * d_in != 0.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Input exceeds an explicit resource guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A detection rule met an input it cannot judge (e.g. mixed parity).
class RuleError : public Error {
 public:
  using Error::Error;
};

}  // namespace khd
