#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsieve {

enum class ErrorKind {
    InvalidArgument,
    NotHermitian,
    DegenerateClustering,
    InvalidSpectralData,
    InvalidState,
    ZeroNorm,
    BaseMismatch,
    NotASieve,
    NotSubalgebra,
    InconsistentValuation,
    StillColorable,
    TooLarge,
    Parse,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace qsieve
