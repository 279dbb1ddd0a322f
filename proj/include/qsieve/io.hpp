#pragma once

// JSON system and context files, and the small text syntaxes for
// propositions and valuations used on the command line.
//
// System file ("format": "qsieve-system/1"):
//   dimension, optional mode ("o" | "ostar"), optional tolerances,
//   operators: [{name, matrix, scale?} | {name, spectral: {eigenvalues, projectors}}],
//   states:    [{name, vector} | {name, density} | {name, projector}]
// Complex entries are numbers or [re, im] pairs.
//
// Context file ("format": "qsieve-contexts/1"):
//   dimension, vectors: {name: [entries]},
//   contexts: [{name, atoms: [vector name | [vector names] | {matrix}]}]

#include "qsieve/ks_search.hpp"
#include "qsieve/sieve.hpp"
#include "qsieve/spectral.hpp"
#include "qsieve/valuations.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qsieve {

using ToleranceOverrides = std::map<std::string, double>;

/// Sets one named tolerance (herm, proj, rec, psd, trace, group, one).
void set_tolerance(Tolerances& tol, const std::string& key, double value);

struct OperatorEntry {
    enum class Form { Matrix, Spectral };

    std::string name;
    SpectralOperator op;
    Form form = Form::Matrix;
    ComplexMatrix matrix;  // Form::Matrix: entries as written, before scale
    double scale = 1.0;
};

struct StateEntry {
    std::string name;
    QuantumState state;
};

struct SystemFile {
    std::size_t dimension = 0;
    SieveMode mode = SieveMode::WithConstants;
    Tolerances tolerances;
    std::vector<OperatorEntry> operators;
    std::vector<StateEntry> states;

    /// Throw InvalidArgument on unknown names.
    const OperatorEntry& op(std::string_view name) const;
    const StateEntry& state(std::string_view name) const;
};

/// Throws Error(Parse) with the offending field, or the validation error of
/// the operator or state that failed to load.
SystemFile parse_system(std::string_view text, const ToleranceOverrides& overrides = {});
SystemFile load_system(const std::string& path, const ToleranceOverrides& overrides = {});
std::string serialize_system(const SystemFile& system);

ContextFamily parse_contexts(std::string_view text, const ToleranceOverrides& overrides = {});
ContextFamily load_contexts(const std::string& path, const ToleranceOverrides& overrides = {});

/// "Sx in {-1, 1}", "Sx = 1", "Sx in {#0, #2}"; values may be decimals or
/// fractions like -1/2 and are matched against the spectrum within
/// the grouping radius.
Proposition parse_proposition(const SystemFile& system, std::string_view text);

/// "vector psi", "density rho", "projector P", "state s",
/// "threshold rho 0.75", "partial M 1" or "partial M #0".
GeneralizedValuation parse_valuation(const SystemFile& system, std::string_view text, SieveMode mode);

/// Shortest decimal for x after snapping to a 1e-9 grid; never "-0".
std::string format_real(double x);

/// Block notation over eigenvalues, e.g. {{-1,1},{0}}.
std::string partition_label(const Partition& p, const std::vector<double>& eigenvalues);

std::string read_file(const std::string& path);

} // namespace qsieve
