#pragma once

// Partial valuations and the sieve-valued generalized valuations built from
// them, from quantum states, from thresholded density matrices and from
// projectors; plus checkers for the valuation axioms and naturality.

#include "qsieve/sieve.hpp"
#include "qsieve/spectral.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qsieve {

/// The proposition "A in Delta".
struct Proposition {
    SpectralOperator op;
    BorelSubset subset;

    static Proposition make(SpectralOperator op, BorelSubset subset);
};

/// A FUNC-respecting, real-valued assignment on a function-closed set of
/// operators. Multiples of the identity are always in the domain.
class PartialValuation {
public:
    struct Assignment {
        SpectralOperator op;
        std::size_t eigen_index;
    };

    /// V^{M,m}: the domain is every function of M, with V(f(M)) = f(m).
    static PartialValuation maximal(SpectralOperator m, std::size_t eigen_index);
    /// Finite presentation: the domain is every function of an assigned
    /// operator. Throws InconsistentValuation when two assignments disagree
    /// on a projector both spectral algebras contain.
    static PartialValuation explicit_assignments(std::vector<Assignment> assignments);

    bool is_maximal() const { return maximal_; }
    const std::vector<Assignment>& assignments() const { return assignments_; }

    /// V(b) when b is in the domain.
    std::optional<double> value_of(const SpectralOperator& b) const;

private:
    PartialValuation() = default;
    bool maximal_ = false;
    std::vector<Assignment> assignments_;
};

class GeneralizedValuation {
public:
    enum class Kind { FromPartial, State, Threshold };

    /// nu^V.
    static GeneralizedValuation from_partial(PartialValuation v, SieveMode mode);
    /// nu^psi, nu^rho, or nu^P (a projector state acts through rho^P = P/n).
    static GeneralizedValuation from_state(QuantumState s, SieveMode mode);
    /// nu^{r,rho}, 0 < r <= 1.
    static GeneralizedValuation threshold(QuantumState rho, double r, SieveMode mode);

    Kind kind() const;
    SieveMode mode() const { return mode_; }
    const PartialValuation* partial() const { return std::get_if<PartialValuation>(&source_); }
    const QuantumState* state() const;
    double threshold_value() const { return threshold_; }

private:
    GeneralizedValuation(std::variant<PartialValuation, QuantumState> source, double threshold, SieveMode mode)
        : source_(std::move(source)), threshold_(threshold), mode_(mode)
    {
    }

    std::variant<PartialValuation, QuantumState> source_;
    double threshold_ = 1.0;  // 1 means "probability equals one"
    SieveMode mode_;
};

std::string to_string(GeneralizedValuation::Kind kind);

/// nu(A in Delta) as a sieve on A. Every result is checked to be up-closed.
Sieve evaluate(const GeneralizedValuation& nu, const Proposition& p);

/// V^nu_A(a): coarse-grainings f with "f(A) = f(a)" true at stage f(A),
/// computed on the codomain operator f(A) itself.
Sieve value_sieve(const GeneralizedValuation& nu, const SpectralOperator& a, std::size_t eigen_index);

struct FuncReport {
    Sieve coarse;     // nu(h(A) in h(Delta)) at stage h(A)
    Sieve pulled;     // h^*(nu(A in Delta))
    bool equal() const { return coarse == pulled; }
};

/// Functional composition: compares both sides at stage h(A).
FuncReport check_func(const GeneralizedValuation& nu, const SpectralOperator& a, const ValueMap& h, BorelSubset subset);

struct AxiomViolation {
    std::string axiom;
    BorelSubset first;
    BorelSubset second;
    std::string detail;
};

struct AxiomReport {
    bool null_ok = true;
    bool monotone_ok = true;
    bool exclusive_ok = true;
    bool func_ok = true;
    bool unit_ok = true;   // informational: legitimately false for nu^V
    std::optional<Sieve> unit_value;  // nu(A in sigma(A))
    std::vector<AxiomViolation> violations;

    bool mandatory_ok() const { return null_ok && monotone_ok && exclusive_ok && func_ok; }
};

/// Null, monotonicity and exclusivity over all pairs of subsets of sigma(A);
/// functional composition over every coarse-graining and subset; unit
/// condition reported.
AxiomReport check_axioms(const GeneralizedValuation& nu, const SpectralOperator& a);

enum class DisjunctionStrength { Equality, StrictInequality };

std::string to_string(DisjunctionStrength d);

/// nu(A in D1 u D2) versus nu(A in D1) v nu(A in D2).
DisjunctionStrength check_disjunction_strength(const GeneralizedValuation& nu, const SpectralOperator& a,
                                               BorelSubset first, BorelSubset second);

/// Heyting negation of nu(p).
Sieve negation(const GeneralizedValuation& nu, const Proposition& p);

/// V^nu restricted to a finite family: (A, a) is kept iff "A = a" is totally true.
PartialValuation extract_partial(const GeneralizedValuation& nu, std::span<const SpectralOperator> family);

struct ChainReport {
    Sieve direct;       // nu^psi(p)
    Sieve via_partial;  // nu^{V^psi}(p)
    std::vector<Partition> only_direct;
    std::vector<Partition> only_via_partial;

    bool equal() const { return only_direct.empty() && only_via_partial.empty(); }
};

/// nu^psi against the valuation induced by the partial valuation V^psi
/// (V^psi taken over the down-set of p's operator).
ChainReport compare_chain(const QuantumState& psi, const Proposition& p, SieveMode mode);

struct NaturalityReport {
    std::size_t checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// N^nu square for every Delta, V^nu square for every eigenvalue, and the
/// factorisation V^nu_A(a) = N^nu_A({a}).
NaturalityReport check_naturality(const GeneralizedValuation& nu, const SpectralOperator& a, const ValueMap& f);

} // namespace qsieve
