#pragma once

#include <stdexcept>
#include <string>

namespace anscombe {

enum class Errc {
  DomainMismatch,
  EmptySet,
  UnsupportedSetForLaw,
  IndexOutOfHorizon,
  NotEnumerable,
  HorizonExceeded,
  SupportTooLarge,
  TheoremViolation,
  ParseError,
  ValidationError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace anscombe
