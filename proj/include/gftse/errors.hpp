#pragma once

#include <stdexcept>
#include <string>

namespace gftse {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments, violated preconditions, bad configuration values.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Shape disagreement between operands (frames vs basis, mask vs spectrum, ...).
class DimensionMismatch : public InvalidArgument {
 public:
  explicit DimensionMismatch(const std::string& msg) : InvalidArgument(msg) {}
};

// A spectrum or operator was applied against a basis other than the one
// that produced it.
class BasisMismatch : public InvalidArgument {
 public:
  explicit BasisMismatch(const std::string& msg) : InvalidArgument(msg) {}
};

// File level failures.  `code` distinguishes the cases callers may want to
// branch on.
class IoError : public Error {
 public:
  enum class Code {
    kMissingFile,
    kMalformedHeader,
    kUnsupportedCodec,
    kUnwritablePath,
    kCorruptData,
  };

  IoError(Code code, const std::string& msg) : Error(msg), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Numerical failures: iteration caps exceeded, singular systems.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace gftse
