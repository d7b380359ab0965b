#pragma once

#include <stdexcept>
#include <string>

namespace nrct {

// Error categories map onto the CLI exit codes: type errors exit 1, store
// format errors exit 2, internal invariant breaches exit 3, illegal edits 4.
enum class ErrorKind {
  Syntax,
  Type,
  StoreFormat,
  Edit,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void syntax_error(const std::string& msg) {
  throw Error(ErrorKind::Syntax, msg);
}
[[noreturn]] inline void type_error(const std::string& msg) {
  throw Error(ErrorKind::Type, msg);
}
[[noreturn]] inline void store_error(const std::string& msg) {
  throw Error(ErrorKind::StoreFormat, msg);
}
[[noreturn]] inline void edit_error(const std::string& msg) {
  throw Error(ErrorKind::Edit, msg);
}
[[noreturn]] inline void internal_error(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

}  // namespace nrct
