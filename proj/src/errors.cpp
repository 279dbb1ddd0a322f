#include "qsieve/errors.hpp"

namespace qsieve {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DegenerateClustering: return "DegenerateClustering";
    case ErrorKind::InvalidSpectralData: return "InvalidSpectralData";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::NotASieve: return "NotASieve";
    case ErrorKind::NotSubalgebra: return "NotSubalgebra";
    case ErrorKind::InconsistentValuation: return "InconsistentValuation";
    case ErrorKind::StillColorable: return "StillColorable";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what)
{
}

} // namespace qsieve
