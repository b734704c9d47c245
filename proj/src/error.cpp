#include "fpp/error.hpp"

namespace fpp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingCriticalProbability: return "MissingCriticalProbability";
    case ErrorKind::EdgeOutOfBox: return "EdgeOutOfBox";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InfeasibleGeometry: return "InfeasibleGeometry";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NoCertificate: return "NoCertificate";
    case ErrorKind::ZeroWeightPresent: return "ZeroWeightPresent";
    case ErrorKind::AlphaNotAtom: return "AlphaNotAtom";
    case ErrorKind::NoHit: return "NoHit";
    case ErrorKind::UncertifiedFPT: return "UncertifiedFPT";
    case ErrorKind::WrongKind: return "WrongKind";
    case ErrorKind::SaturatedEnumeration: return "SaturatedEnumeration";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

}  // namespace fpp
