#include "implode/errors.hpp"

namespace implode {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::OutOfRange: return "OUT_OF_RANGE";
    case Errc::NegativeU: return "NEGATIVE_U";
    case Errc::RootFailure: return "ROOT_FAILURE";
    case Errc::Pole: return "POLE";
    case Errc::IntegerResonance: return "INTEGER_RESONANCE";
    case Errc::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case Errc::DegenerateK: return "DEGENERATE_K";
    case Errc::NegativeDiscriminant: return "NEGATIVE_DISCRIMINANT";
    case Errc::NotConverged: return "NOT_CONVERGED";
    case Errc::SandwichViolation: return "SANDWICH_VIOLATION";
    case Errc::StepUnderflow: return "STEP_UNDERFLOW";
    case Errc::TailTooLarge: return "TAIL_TOO_LARGE";
    case Errc::EventMissed: return "EVENT_MISSED";
    case Errc::SonicEscapeFailed: return "SONIC_ESCAPE_FAILED";
    case Errc::BarrierViolation: return "BARRIER_VIOLATION";
    case Errc::NonMonotone: return "NON_MONOTONE";
    case Errc::GapBelowNoise: return "GAP_BELOW_NOISE";
    case Errc::NoBracket: return "NO_BRACKET";
    case Errc::PrecisionLimit: return "PRECISION_LIMIT";
    case Errc::StitchMismatch: return "STITCH_MISMATCH";
    case Errc::MarginNonpositive: return "MARGIN_NONPOSITIVE";
    case Errc::CertificateFailed: return "CERTIFICATE_FAILED";
    case Errc::Io: return "IO_ERROR";
    case Errc::Usage: return "USAGE";
  }
  return "UNKNOWN";
}

ErrorKind errc_kind(Errc code) {
  switch (code) {
    case Errc::SandwichViolation:
    case Errc::BarrierViolation:
    case Errc::NonMonotone:
    case Errc::StitchMismatch:
    case Errc::MarginNonpositive:
    case Errc::CertificateFailed:
    case Errc::NotConverged:
    case Errc::SonicEscapeFailed:
      return ErrorKind::Verification;
    case Errc::Io: return ErrorKind::Io;
    case Errc::Usage: return ErrorKind::Usage;
    default: return ErrorKind::Domain;
  }
}

void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace implode
