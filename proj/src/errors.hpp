#pragma once

#include <stdexcept>
#include <string>

namespace gcmp {

// Error categories. Each maps one-to-one onto a C API status code.
enum class ErrorKind {
  Domain,      // argument outside the mathematical domain
  Usage,       // API misuse: dimension mismatch, empty input, bad index
  Input,       // malformed file content
  Numerical,   // solver breakdown
  Config,      // inconsistent configuration
  Degenerate,  // test has no usable cells
  Io,          // file system
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};
struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorKind::Input, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct DegenerateTestError : Error {
  explicit DegenerateTestError(const std::string& w) : Error(ErrorKind::Degenerate, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};

}  // namespace gcmp
