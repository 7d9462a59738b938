#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fracspec {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig,        // bad user input or configuration
  kPrecondition,  // an operation was called outside its domain
  kNumerical,     // solver failed to converge, crowding, quadrature failure
  kHypothesis,    // a geometric hypothesis check failed
  kUnsupported,   // family/feature intentionally not implemented
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kHypothesis: return "hypothesis";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

/// Process exit code for an error category: 2 config, 3 numerical, 4 hypothesis.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumerical: return 3;
    case ErrorKind::kHypothesis: return 4;
    default: return 2;
  }
}

/// Short scientific notation for error messages.
inline std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace fracspec
