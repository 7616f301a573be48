#pragma once

#include <stdexcept>
#include <string>

namespace simdeck {

/// Failure carrying a short, stable code ("kind conflict", "store corrupt", ...)
/// plus free-form detail. Callers and tests branch on code(), never on what().
class Error : public std::runtime_error {
 public:
  explicit Error(std::string code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Directive parse failure; line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string code, int line, const std::string& detail = {})
      : Error(std::move(code), "line " + std::to_string(line) + (detail.empty() ? "" : ": " + detail)),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace simdeck
