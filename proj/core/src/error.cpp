#include "anscombe/error.hpp"

namespace anscombe {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::EmptySet: return "EmptySet";
    case Errc::UnsupportedSetForLaw: return "UnsupportedSetForLaw";
    case Errc::IndexOutOfHorizon: return "IndexOutOfHorizon";
    case Errc::NotEnumerable: return "NotEnumerable";
    case Errc::HorizonExceeded: return "HorizonExceeded";
    case Errc::SupportTooLarge: return "SupportTooLarge";
    case Errc::TheoremViolation: return "TheoremViolation";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace anscombe
