#pragma once

#include <stdexcept>
#include <string>

namespace implode {

enum class Errc {
  OutOfRange,
  NegativeU,
  RootFailure,
  Pole,
  IntegerResonance,
  PrecisionExhausted,
  DegenerateK,
  NegativeDiscriminant,
  NotConverged,
  SandwichViolation,
  StepUnderflow,
  TailTooLarge,
  EventMissed,
  SonicEscapeFailed,
  BarrierViolation,
  NonMonotone,
  GapBelowNoise,
  NoBracket,
  PrecisionLimit,
  StitchMismatch,
  MarginNonpositive,
  CertificateFailed,
  Io,
  Usage,
};

enum class ErrorKind { Domain, Verification, Io, Usage };

const char* errc_name(Errc code);
ErrorKind errc_kind(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace implode
