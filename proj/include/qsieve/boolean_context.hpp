#pragma once

#include "qsieve/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qsieve {

/// Element of a finite Boolean algebra of projectors: the subset of atoms
/// whose sum it is.
using ElementMask = std::uint32_t;

/// Finite Boolean subalgebra of the projection lattice, given by its atoms:
/// mutually orthogonal nonzero projectors summing to the identity.
class BooleanContext {
public:
    static constexpr std::size_t max_atoms = 20;

    static BooleanContext from_atoms(std::vector<ComplexMatrix> atoms, const Tolerances& tol = {});

    std::size_t dim() const { return static_cast<std::size_t>(atoms_.front().rows()); }
    std::size_t atom_count() const { return atoms_.size(); }
    std::size_t element_count() const { return std::size_t {1} << atoms_.size(); }
    ElementMask full_mask() const { return static_cast<ElementMask>(element_count() - 1); }
    const ComplexMatrix& atom(std::size_t i) const { return atoms_.at(i); }
    const std::vector<ComplexMatrix>& atoms() const { return atoms_; }
    const Tolerances& tolerances() const { return tol_; }

    /// Subset sum of atoms.
    ComplexMatrix element(ElementMask mask) const;
    /// The element equal to p, if p is in this algebra.
    std::optional<ElementMask> element_of(const ComplexMatrix& p) const;

private:
    BooleanContext() = default;
    std::vector<ComplexMatrix> atoms_;
    Tolerances tol_;
};

/// For each atom of sub, the mask of super's atoms summing to it. Throws
/// NotSubalgebra when sub is not contained in super.
std::vector<ElementMask> subalgebra_embedding(const BooleanContext& sub, const BooleanContext& super);

} // namespace qsieve
