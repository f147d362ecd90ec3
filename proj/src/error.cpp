#include "coshtx/error.hpp"

namespace coshtx {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::DivergentMoment: return "DivergentMoment";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::IllConditioned: return "IllConditioned";
  }
  return "Unknown";
}

}  // namespace coshtx
