#include "infprod/error.hpp"

namespace infprod {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::UnsupportedTail: return "UnsupportedTail";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::Undetermined: return "Undetermined";
    case ErrorKind::NotStraddling: return "NotStraddling";
    case ErrorKind::NotTailEquivalent: return "NotTailEquivalent";
    case ErrorKind::StraddleNotFound: return "StraddleNotFound";
    case ErrorKind::NotFinitistic: return "NotFinitistic";
    case ErrorKind::PurificationFailed: return "PurificationFailed";
  }
  return "Unknown";
}

}  // namespace infprod
