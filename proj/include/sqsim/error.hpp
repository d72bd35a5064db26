#pragma once

#include <stdexcept>
#include <string>

namespace sqsim {

// Error categories map one-to-one onto CLI exit codes so that callers of the
// tool can tell usage mistakes, missing files and malformed data apart.
enum class ErrorKind {
  Runtime = 1,  // internal failures, non-finite loss, shape bugs
  Usage = 2,    // bad flags / arguments
  Io = 3,       // missing or unreadable file
  Schema = 4,   // malformed TSV/JSONL/model file, invalid input values
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

  const char* kind_name() const {
    switch (kind_) {
      case ErrorKind::Usage:
        return "usage";
      case ErrorKind::Io:
        return "io";
      case ErrorKind::Schema:
        return "schema";
      case ErrorKind::Runtime:
      default:
        return "runtime";
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
  throw Error(ErrorKind::Usage, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorKind::Io, msg);
}
[[noreturn]] inline void throw_schema(const std::string& msg) {
  throw Error(ErrorKind::Schema, msg);
}
[[noreturn]] inline void throw_runtime(const std::string& msg) {
  throw Error(ErrorKind::Runtime, msg);
}

}  // namespace sqsim
