#pragma once

#include <stdexcept>
#include <string>

namespace coshtx {

enum class ErrorCode {
  InvalidInput,         // malformed arguments or JSON
  UnknownCatalogEntry,  // catalog_get with an unrecognised name
  BadParams,            // catalog parameters out of range
  DivergentMoment,      // moment integral does not settle or leaves double range
  Overflow,             // linear-domain value not representable
  NonFiniteEntry,       // NaN/inf inside a matrix handed to the eigensolver
  IllConditioned,       // Cholesky breakdown or negative Gauss node
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidInput, what);
}

}  // namespace coshtx
