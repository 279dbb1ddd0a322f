#include "qsieve/spectral.hpp"

#include "qsieve/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qsieve {

// ---------------------------------------------------------------- IndexSet

IndexSet IndexSet::from_indices(std::span<const std::size_t> indices)
{
    std::uint64_t bits = 0;
    for (auto i : indices) {
        if (i >= 64) {
            throw Error(ErrorKind::TooLarge, "eigenvalue index " + std::to_string(i) + " exceeds 63");
        }
        bits |= std::uint64_t {1} << i;
    }
    return IndexSet(bits);
}

IndexSet IndexSet::from_indices(std::initializer_list<std::size_t> indices)
{
    return from_indices(std::span<const std::size_t>(indices.begin(), indices.size()));
}

IndexSet IndexSet::all(std::size_t k)
{
    if (k > 64) {
        throw Error(ErrorKind::TooLarge, "spectrum larger than 64 eigenvalues");
    }
    return IndexSet(k == 64 ? ~std::uint64_t {0} : (std::uint64_t {1} << k) - 1);
}

IndexSet IndexSet::singleton(std::size_t i)
{
    return from_indices({i});
}

std::size_t IndexSet::count() const
{
    return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<std::size_t> IndexSet::indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 64; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

bool IndexSet::fits(std::size_t k) const
{
    return subset_of(all(k));
}

// ---------------------------------------------------------------- helpers

ValueClusters cluster_values(std::span<const double> raw, double eps)
{
    const auto n = raw.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });

    ValueClusters out;
    out.cluster_of.assign(n, 0);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && raw[order[end]] - raw[order[end - 1]] <= eps) {
            ++end;
        }
        const double lo = raw[order[start]];
        const double hi = raw[order[end - 1]];
        if (hi - lo > eps) {
            throw Error(ErrorKind::DegenerateClustering,
                        "values chain from " + std::to_string(lo) + " to " + std::to_string(hi) +
                            " under grouping radius " + std::to_string(eps));
        }
        double sum = 0.0;
        for (auto p = start; p < end; ++p) {
            sum += raw[order[p]];
            out.cluster_of[order[p]] = out.values.size();
        }
        out.values.push_back(sum / static_cast<double>(end - start));
        start = end;
    }
    return out;
}

double max_abs(const ComplexMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol)
{
    if (m.rows() != m.cols()) {
        return false;
    }
    return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

bool is_projector(const ComplexMatrix& p, double tol)
{
    return is_hermitian(p, tol) && max_abs(p * p - p) <= tol;
}

bool projector_leq(const ComplexMatrix& p, const ComplexMatrix& q, double tol)
{
    return max_abs(p * q - p) <= tol;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol)
{
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(a - b) <= tol;
}

namespace {

void require_finite_square(const ComplexMatrix& m, const char* what)
{
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be a non-empty square matrix");
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const auto z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorKind::InvalidArgument, std::string(what) + " has a non-finite entry");
        }
    }
}

} // namespace

// ---------------------------------------------------------------- SpectralOperator

SpectralOperator::SpectralOperator(ComplexMatrix m, std::vector<double> eigenvalues,
                                   std::vector<ComplexMatrix> projectors, Tolerances tol)
    : matrix_(std::move(m)), eigenvalues_(std::move(eigenvalues)), projectors_(std::move(projectors)), tol_(tol)
{
}

SpectralOperator SpectralOperator::decompose(const ComplexMatrix& m, const Tolerances& tol)
{
    require_finite_square(m, "operator matrix");
    if (tol.group <= 0.0) {
        throw Error(ErrorKind::InvalidArgument, "grouping radius must be positive");
    }
    if (!is_hermitian(m, tol.herm)) {
        throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::InvalidArgument, "eigensolver failed");
    }
    const auto& raw = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    std::vector<double> raw_values(raw.data(), raw.data() + raw.size());
    auto clusters = cluster_values(raw_values, tol.group);

    const auto n = m.rows();
    std::vector<ComplexMatrix> projectors(clusters.values.size(), ComplexMatrix::Zero(n, n));
    for (Eigen::Index j = 0; j < n; ++j) {
        projectors[clusters.cluster_of[static_cast<std::size_t>(j)]] += vecs.col(j) * vecs.col(j).adjoint();
    }
    SpectralOperator op(m, std::move(clusters.values), std::move(projectors), tol);
    op.validate();
    return op;
}

SpectralOperator SpectralOperator::from_spectrum(std::vector<double> eigenvalues,
                                                 std::vector<ComplexMatrix> projectors,
                                                 const Tolerances& tol)
{
    if (eigenvalues.empty() || eigenvalues.size() != projectors.size()) {
        throw Error(ErrorKind::InvalidSpectralData, "need one projector per eigenvalue");
    }
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!std::isfinite(eigenvalues[i])) {
            throw Error(ErrorKind::InvalidSpectralData, "non-finite eigenvalue");
        }
        if (i > 0 && eigenvalues[i] - eigenvalues[i - 1] <= tol.group) {
            throw Error(ErrorKind::InvalidSpectralData,
                        "eigenvalues must be ascending and separated by more than the grouping radius");
        }
    }
    const auto n = projectors.front().rows();
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        require_finite_square(projectors[i], "projector");
        if (projectors[i].rows() != n) {
            throw Error(ErrorKind::InvalidSpectralData, "projector dimensions differ");
        }
        m += eigenvalues[i] * projectors[i];
    }
    SpectralOperator op(std::move(m), std::move(eigenvalues), std::move(projectors), tol);
    op.validate();
    return op;
}

void SpectralOperator::validate() const
{
    const auto n = matrix_.rows();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    ComplexMatrix recon = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const auto& p = projectors_[i];
        if (!is_projector(p, tol_.proj)) {
            throw Error(ErrorKind::InvalidSpectralData, "projector " + std::to_string(i) + " is not a Hermitian idempotent");
        }
        if (std::abs(p.trace()) < 0.5) {
            throw Error(ErrorKind::InvalidSpectralData, "projector " + std::to_string(i) + " is zero");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (max_abs(p * projectors_[j]) > tol_.proj) {
                throw Error(ErrorKind::InvalidSpectralData,
                            "projectors " + std::to_string(j) + " and " + std::to_string(i) + " are not orthogonal");
            }
        }
        sum += p;
        recon += eigenvalues_[i] * p;
    }
    if (!approx_equal(sum, ComplexMatrix::Identity(n, n), tol_.proj)) {
        throw Error(ErrorKind::InvalidSpectralData, "projectors do not sum to the identity");
    }
    // Merged eigenvalues move by at most the grouping radius.
    const double scale = std::max(1.0, max_abs(matrix_));
    if (max_abs(recon - matrix_) > (tol_.rec + tol_.group) * scale) {
        throw Error(ErrorKind::DegenerateClustering, "spectral resolution does not reconstruct the matrix");
    }
}

std::optional<std::size_t> SpectralOperator::index_of(double value) const
{
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
        if (std::abs(eigenvalues_[i] - value) <= tol_.group) {
            return i;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- operations

ComplexMatrix spectral_projector(const SpectralOperator& a, IndexSet subset)
{
    if (!subset.fits(a.spectrum_size())) {
        throw Error(ErrorKind::InvalidArgument, "subset refers to eigenvalues outside the spectrum");
    }
    const auto n = static_cast<Eigen::Index>(a.dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (auto i : subset.indices()) {
        out += a.projector(i);
    }
    return out;
}

SpectralOperator apply_function(const SpectralOperator& a, const ValueMap& f)
{
    if (f.size() != a.spectrum_size()) {
        throw Error(ErrorKind::InvalidArgument, "function must be defined on every eigenvalue");
    }
    for (double v : f) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidArgument, "function value is not finite");
        }
    }
    auto clusters = cluster_values(f, a.tolerances().group);
    const auto n = static_cast<Eigen::Index>(a.dim());
    std::vector<ComplexMatrix> projectors(clusters.values.size(), ComplexMatrix::Zero(n, n));
    for (std::size_t i = 0; i < f.size(); ++i) {
        projectors[clusters.cluster_of[i]] += a.projector(i);
    }
    return SpectralOperator::from_spectrum(std::move(clusters.values), std::move(projectors), a.tolerances());
}

std::optional<ValueMap> is_function_of(const SpectralOperator& a, const SpectralOperator& m)
{
    if (a.dim() != m.dim()) {
        throw Error(ErrorKind::InvalidArgument, "operators act on different dimensions");
    }
    const auto& tol = a.tolerances();
    const double scaled = (tol.rec + tol.group) * std::max(1.0, max_abs(a.matrix()));
    const auto n = static_cast<Eigen::Index>(a.dim());
    ValueMap f(m.spectrum_size());
    ComplexMatrix recon = ComplexMatrix::Zero(n, n);
    for (std::size_t mu = 0; mu < m.spectrum_size(); ++mu) {
        const auto& p = m.projector(mu);
        const ComplexMatrix block = p * a.matrix() * p;
        const double c = block.trace().real() / p.trace().real();
        if (max_abs(block - c * p) > scaled) {
            return std::nullopt;
        }
        f[mu] = c;
        recon += c * p;
    }
    if (max_abs(recon - a.matrix()) > scaled) {
        return std::nullopt;
    }
    return f;
}

IndexSet coarse_grained_indices(const ValueMap& f, IndexSet subset, double eps)
{
    if (!subset.fits(f.size())) {
        throw Error(ErrorKind::InvalidArgument, "subset refers to eigenvalues outside the function's domain");
    }
    const auto clusters = cluster_values(f, eps);
    std::uint64_t hit = 0;
    for (auto i : subset.indices()) {
        hit |= std::uint64_t {1} << clusters.cluster_of[i];
    }
    std::vector<std::size_t> fibre;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if ((hit >> clusters.cluster_of[i]) & 1u) {
            fibre.push_back(i);
        }
    }
    return IndexSet::from_indices(fibre);
}

ComplexMatrix coarse_grained_projector(const SpectralOperator& a, const ValueMap& f, IndexSet subset)
{
    if (f.size() != a.spectrum_size()) {
        throw Error(ErrorKind::InvalidArgument, "function must be defined on every eigenvalue");
    }
    return spectral_projector(a, coarse_grained_indices(f, subset, a.tolerances().group));
}

// ---------------------------------------------------------------- QuantumState

QuantumState QuantumState::vector(ComplexVector psi, const Tolerances& tol)
{
    if (psi.size() == 0) {
        throw Error(ErrorKind::InvalidState, "empty state vector");
    }
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (!std::isfinite(psi[i].real()) || !std::isfinite(psi[i].imag())) {
            throw Error(ErrorKind::InvalidState, "state vector has a non-finite entry");
        }
    }
    if (psi.norm() <= tol.proj) {
        throw Error(ErrorKind::ZeroNorm, "state vector has zero norm");
    }
    QuantumState s;
    s.kind_ = Kind::Vector;
    s.vector_ = std::move(psi);
    s.rank_ = 1;
    return s;
}

QuantumState QuantumState::density(ComplexMatrix rho, const Tolerances& tol)
{
    require_finite_square(rho, "density matrix");
    if (!is_hermitian(rho, tol.herm)) {
        throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol.trace) {
        throw Error(ErrorKind::InvalidState, "density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol.psd) {
        throw Error(ErrorKind::InvalidState, "density matrix is not positive semidefinite");
    }
    QuantumState s;
    s.kind_ = Kind::Density;
    s.matrix_ = std::move(rho);
    return s;
}

QuantumState QuantumState::projector(ComplexMatrix p, const Tolerances& tol)
{
    require_finite_square(p, "projector state");
    if (!is_projector(p, tol.proj)) {
        throw Error(ErrorKind::InvalidState, "projector state is not a Hermitian idempotent");
    }
    const double tr = p.trace().real();
    if (tr < 0.5) {
        throw Error(ErrorKind::ZeroNorm, "projector state is zero");
    }
    QuantumState s;
    s.kind_ = Kind::Projector;
    s.matrix_ = std::move(p);
    s.rank_ = static_cast<std::size_t>(std::lround(tr));
    return s;
}

std::size_t QuantumState::dim() const
{
    return kind_ == Kind::Vector ? static_cast<std::size_t>(vector_.size()) : static_cast<std::size_t>(matrix_.rows());
}

ComplexMatrix QuantumState::density_matrix() const
{
    switch (kind_) {
    case Kind::Vector: return vector_ * vector_.adjoint() / vector_.squaredNorm();
    case Kind::Density: return matrix_;
    case Kind::Projector: return matrix_ / static_cast<double>(rank_);
    }
    return matrix_;
}

std::string to_string(QuantumState::Kind kind)
{
    switch (kind) {
    case QuantumState::Kind::Vector: return "vector";
    case QuantumState::Kind::Density: return "density";
    case QuantumState::Kind::Projector: return "projector";
    }
    return "unknown";
}

double prob(const QuantumState& s, const ComplexMatrix& p)
{
    if (static_cast<std::size_t>(p.rows()) != s.dim() || p.rows() != p.cols()) {
        throw Error(ErrorKind::InvalidArgument, "projector and state dimensions differ");
    }
    double value = 0.0;
    switch (s.kind()) {
    case QuantumState::Kind::Vector: {
        const auto& psi = s.vector_payload();
        value = psi.dot(p * psi).real() / psi.squaredNorm();
        break;
    }
    case QuantumState::Kind::Density:
        value = (s.matrix_payload() * p).trace().real();
        break;
    case QuantumState::Kind::Projector:
        value = (s.matrix_payload() * p).trace().real() / static_cast<double>(s.rank());
        break;
    }
    return std::clamp(value, 0.0, 1.0);
}

} // namespace qsieve
