#pragma once

// Random finite quantum systems for property sweeps. Everything is seeded so
// failures reproduce.

#include "qsieve/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#ifndef QSIEVE_DATA_DIR
#define QSIEVE_DATA_DIR "data"
#endif

namespace qsieve::testing {

inline std::string data_path(const std::string& file)
{
    return std::string(QSIEVE_DATA_DIR) + "/" + file;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double normal() { return std::normal_distribution<double> {}(gen_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double> {lo, hi}(gen_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t> {0, n - 1}(gen_); }
    std::size_t between(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t> {lo, hi}(gen_); }
    bool coin() { return index(2) == 1; }
    std::mt19937_64& engine() { return gen_; }

    ComplexMatrix gaussian(std::size_t rows, std::size_t cols)
    {
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = Complex(normal(), normal());
            }
        }
        return m;
    }

    ComplexMatrix unitary(std::size_t n)
    {
        Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, n));
        return qr.householderQ() * ComplexMatrix::Identity(n, n);
    }

    /// k distinct, well separated eigenvalues on a coarse grid.
    std::vector<double> spectrum(std::size_t k)
    {
        std::vector<double> grid;
        for (int v = -6; v <= 6; ++v) {
            grid.push_back(0.5 * v);
        }
        std::shuffle(grid.begin(), grid.end(), gen_);
        grid.resize(k);
        std::sort(grid.begin(), grid.end());
        return grid;
    }

    /// Hermitian matrix of dimension dim with exactly k distinct eigenvalues.
    ComplexMatrix hermitian(std::size_t dim, std::size_t k)
    {
        const auto values = spectrum(k);
        std::vector<double> diag(values.begin(), values.end());
        while (diag.size() < dim) {
            diag.push_back(values[index(k)]);
        }
        std::shuffle(diag.begin(), diag.end(), gen_);
        const auto u = unitary(dim);
        ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            d(i, i) = diag[i];
        }
        return u * d * u.adjoint();
    }

    SpectralOperator operator_with(std::size_t dim, std::size_t k) { return SpectralOperator::decompose(hermitian(dim, k)); }

    ComplexVector vector(std::size_t dim) { return gaussian(dim, 1).col(0); }

    ComplexMatrix density(std::size_t dim)
    {
        const auto g = gaussian(dim, dim);
        ComplexMatrix rho = g * g.adjoint();
        return rho / rho.trace().real();
    }

    ComplexMatrix projector(std::size_t dim, std::size_t rank)
    {
        const auto u = unitary(dim);
        const ComplexMatrix cols = u.leftCols(rank);
        return cols * cols.adjoint();
    }

    /// A value map with random collisions, used as a coarse-graining h.
    ValueMap value_map(std::size_t k)
    {
        const auto targets = spectrum(between(1, k));
        ValueMap out;
        for (std::size_t i = 0; i < k; ++i) {
            out.push_back(targets[index(targets.size())]);
        }
        return out;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qsieve::testing
