#pragma once

// Finite-dimensional Hermitian operator algebra: spectra, spectral
// projectors, functions of operators and coarse-grained projectors.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsieve {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct Tolerances {
    double herm = 1e-9;   // Hermitian symmetry
    double proj = 1e-9;   // idempotence / orthogonality / completeness
    double rec = 1e-9;    // reconstruction sum_i lambda_i P_i
    double psd = 1e-9;    // smallest admissible density eigenvalue is -psd
    double trace = 1e-9;  // |tr rho - 1|
    double group = 1e-8;  // eigenvalue / function-value clustering radius
    double one = 1e-9;    // "probability equals one" cut-off

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Subset of eigenvalue indices {0..k-1}, k <= 64. Doubles as the Borel
/// subset type for finite spectra.
class IndexSet {
public:
    constexpr IndexSet() = default;
    static constexpr IndexSet from_bits(std::uint64_t bits) { return IndexSet(bits); }
    static IndexSet from_indices(std::span<const std::size_t> indices);
    static IndexSet from_indices(std::initializer_list<std::size_t> indices);
    static IndexSet all(std::size_t k);
    static IndexSet singleton(std::size_t i);

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    bool contains(std::size_t i) const { return i < 64 && ((bits_ >> i) & 1u) != 0; }
    std::size_t count() const;
    std::vector<std::size_t> indices() const;
    bool subset_of(IndexSet other) const { return (bits_ & ~other.bits_) == 0; }
    bool fits(std::size_t k) const;

    IndexSet operator|(IndexSet o) const { return IndexSet(bits_ | o.bits_); }
    IndexSet operator&(IndexSet o) const { return IndexSet(bits_ & o.bits_); }
    friend bool operator==(IndexSet, IndexSet) = default;
    friend auto operator<=>(IndexSet a, IndexSet b) { return a.bits_ <=> b.bits_; }

private:
    constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

using BorelSubset = IndexSet;

/// A real function on the eigenvalue indices of an operator: entry i is f(lambda_i).
using ValueMap = std::vector<double>;

/// Result of grouping reals that lie within a radius of one another.
struct ValueClusters {
    std::vector<double> values;            // ascending cluster representatives
    std::vector<std::size_t> cluster_of;   // input position -> cluster index
};

/// Groups values by chaining neighbours closer than eps after sorting. Throws
/// DegenerateClustering when a chained cluster is wider than eps, since the
/// grouping would then depend on the order in which values are merged.
ValueClusters cluster_values(std::span<const double> raw, double eps);

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_projector(const ComplexMatrix& p, double tol);
/// Projector order P <= Q, i.e. PQ = P.
bool projector_leq(const ComplexMatrix& p, const ComplexMatrix& q, double tol);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

class SpectralOperator {
public:
    /// Eigen-decomposes a Hermitian matrix and merges eigenvalues closer than tol.group.
    static SpectralOperator decompose(const ComplexMatrix& m, const Tolerances& tol = {});

    /// Builds an operator from exact spectral data (ascending distinct
    /// eigenvalues and their projectors), bypassing the eigensolver.
    static SpectralOperator from_spectrum(std::vector<double> eigenvalues,
                                          std::vector<ComplexMatrix> projectors,
                                          const Tolerances& tol = {});

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t spectrum_size() const { return eigenvalues_.size(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
    const ComplexMatrix& projector(std::size_t i) const { return projectors_.at(i); }
    const Tolerances& tolerances() const { return tol_; }

    /// Index of the eigenvalue within tol.group of value, if any.
    std::optional<std::size_t> index_of(double value) const;

private:
    SpectralOperator(ComplexMatrix m, std::vector<double> eigenvalues,
                     std::vector<ComplexMatrix> projectors, Tolerances tol);
    void validate() const;

    ComplexMatrix matrix_;
    std::vector<double> eigenvalues_;
    std::vector<ComplexMatrix> projectors_;
    Tolerances tol_;
};

/// Sum of the eigenprojectors selected by subset.
ComplexMatrix spectral_projector(const SpectralOperator& a, IndexSet subset);

/// f(A) for f given on eigenvalue indices. Equal f-values (within the
/// operator's grouping radius) fuse their eigenspaces.
SpectralOperator apply_function(const SpectralOperator& a, const ValueMap& f);

/// If a = f(m) for some real f, returns f as a map on m's eigenvalue indices.
std::optional<ValueMap> is_function_of(const SpectralOperator& a, const SpectralOperator& m);

/// Indices i of sigma(A) with f(lambda_i) in f(subset): the fibre that carries
/// the coarse-grained projector.
IndexSet coarse_grained_indices(const ValueMap& f, IndexSet subset, double eps);

/// Spectral projector of f(A) onto f(subset), expressed on A's eigenspaces.
ComplexMatrix coarse_grained_projector(const SpectralOperator& a, const ValueMap& f, IndexSet subset);

class QuantumState {
public:
    enum class Kind { Vector, Density, Projector };

    static QuantumState vector(ComplexVector psi, const Tolerances& tol = {});
    static QuantumState density(ComplexMatrix rho, const Tolerances& tol = {});
    static QuantumState projector(ComplexMatrix p, const Tolerances& tol = {});

    Kind kind() const { return kind_; }
    std::size_t dim() const;
    /// Raw payload: the vector for Kind::Vector, the matrix otherwise.
    const ComplexVector& vector_payload() const { return vector_; }
    const ComplexMatrix& matrix_payload() const { return matrix_; }
    /// Rank of a projector state.
    std::size_t rank() const { return rank_; }
    /// The density matrix this state induces (|psi><psi|/<psi,psi>, rho, or P/n).
    ComplexMatrix density_matrix() const;

private:
    QuantumState() = default;

    Kind kind_ = Kind::Density;
    ComplexVector vector_;
    ComplexMatrix matrix_;
    std::size_t rank_ = 0;
};

std::string to_string(QuantumState::Kind kind);

/// Born probability of the projector p in state s, clamped to [0, 1].
double prob(const QuantumState& s, const ComplexMatrix& p);

} // namespace qsieve
