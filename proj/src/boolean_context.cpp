#include "qsieve/boolean_context.hpp"

#include "qsieve/errors.hpp"

namespace qsieve {

BooleanContext BooleanContext::from_atoms(std::vector<ComplexMatrix> atoms, const Tolerances& tol)
{
    if (atoms.empty()) {
        throw Error(ErrorKind::InvalidArgument, "a Boolean context needs at least one atom");
    }
    if (atoms.size() > max_atoms) {
        throw Error(ErrorKind::TooLarge, "too many atoms in one context");
    }
    const auto n = atoms.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& p = atoms[i];
        if (p.rows() != n || p.cols() != n) {
            throw Error(ErrorKind::InvalidArgument, "atom " + std::to_string(i) + " has the wrong dimension");
        }
        if (!is_projector(p, tol.proj) || p.trace().real() < 0.5) {
            throw Error(ErrorKind::InvalidArgument, "atom " + std::to_string(i) + " is not a nonzero projector");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (max_abs(p * atoms[j]) > tol.proj) {
                throw Error(ErrorKind::InvalidArgument,
                            "atoms " + std::to_string(j) + " and " + std::to_string(i) + " are not orthogonal");
            }
        }
        sum += p;
    }
    if (!approx_equal(sum, ComplexMatrix::Identity(n, n), tol.proj)) {
        throw Error(ErrorKind::InvalidArgument, "atoms do not resolve the identity");
    }
    BooleanContext w;
    w.atoms_ = std::move(atoms);
    w.tol_ = tol;
    return w;
}

ComplexMatrix BooleanContext::element(ElementMask mask) const
{
    const auto n = atoms_.front().rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if ((mask >> i) & 1u) {
            out += atoms_[i];
        }
    }
    return out;
}

std::optional<ElementMask> BooleanContext::element_of(const ComplexMatrix& p) const
{
    if (p.rows() != atoms_.front().rows() || p.cols() != p.rows()) {
        return std::nullopt;
    }
    ElementMask mask = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (max_abs(p * atoms_[i] - atoms_[i]) <= tol_.proj) {
            mask |= ElementMask {1} << i;
        }
    }
    if (!approx_equal(element(mask), p, tol_.proj)) {
        return std::nullopt;
    }
    return mask;
}

std::vector<ElementMask> subalgebra_embedding(const BooleanContext& sub, const BooleanContext& super)
{
    if (sub.dim() != super.dim()) {
        throw Error(ErrorKind::NotSubalgebra, "contexts act on different dimensions");
    }
    std::vector<ElementMask> out;
    out.reserve(sub.atom_count());
    for (std::size_t b = 0; b < sub.atom_count(); ++b) {
        auto mask = super.element_of(sub.atom(b));
        if (!mask) {
            throw Error(ErrorKind::NotSubalgebra, "atom " + std::to_string(b) + " is not a sum of the larger algebra's atoms");
        }
        out.push_back(*mask);
    }
    return out;
}

} // namespace qsieve
