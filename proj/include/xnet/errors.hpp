#pragma once

#include <stdexcept>
#include <string>

namespace xnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerics
struct SingularMatrix : Error { using Error::Error; };
struct DefectiveMatrix : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

// constellation
struct UnsupportedOrder : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct BadLabelLength : Error { using Error::Error; };
struct NotAMember : Error { using Error::Error; };

// channel / schemes
struct ChannelDegenerate : Error { using Error::Error; };
struct CodeMismatch : Error { using Error::Error; };

// decoders
struct DimensionMismatch : Error { using Error::Error; };
struct SearchSpaceTooLarge : Error { using Error::Error; };
struct RankDeficientGenerator : Error { using Error::Error; };

// analysis
struct CpdZeroConstellation : Error { using Error::Error; };
struct CertificateFailed : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct ZeroBerInTail : Error { using Error::Error; };

// harness
struct ConfigInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace xnet
