#pragma once

// Finite instances of the operator category below a fixed operator, the
// spectral algebra functor, the spectral presheaf and the dual presheaf.

#include "qsieve/boolean_context.hpp"
#include "qsieve/sieve.hpp"
#include "qsieve/spectral.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsieve {

/// W_A: the Boolean algebra generated by A's eigenprojectors (atoms in
/// ascending eigenvalue order).
BooleanContext spectral_algebra(const SpectralOperator& a);

/// i_{W_{f(A)} W_A}: the element of W_A equal to E[f(A) in J], J a subset of
/// sigma(f(A)) given as a mask over f(A)'s eigenvalues.
ElementMask embed_element(const CoarseGraining& f, ElementMask target_subset);

/// The down-set of an operator in the quotient category: one object per
/// admissible partition of its spectrum, each with a representative codomain
/// operator (blocks labelled by ordinal).
class DownSetCategory {
public:
    DownSetCategory(SpectralOperator top, SieveMode mode);

    const SpectralOperator& top() const { return top_; }
    SieveMode mode() const { return mode_; }
    std::size_t size() const { return objects_.size(); }
    const Partition& partition(std::size_t i) const { return partitions_.at(i); }
    const SpectralOperator& object(std::size_t i) const { return objects_.at(i); }
    const std::vector<SpectralOperator>& objects() const { return objects_; }
    /// Morphism object(j) -> object(i) exists (j is a coarse-graining of i).
    bool has_morphism(std::size_t from, std::size_t to) const;

private:
    SpectralOperator top_;
    SieveMode mode_;
    std::vector<Partition> partitions_;
    std::vector<SpectralOperator> objects_;
};

/// A two-valued homomorphism W -> {0,1}: determined by the unique atom sent to 1.
struct TwoValuedHom {
    std::shared_ptr<const BooleanContext> context;
    std::size_t chosen_atom = 0;

    bool value(ElementMask element) const { return (element >> chosen_atom) & 1u; }
};

/// D(W): all two-valued homomorphisms of a context.
std::vector<TwoValuedHom> two_valued_homs(const std::shared_ptr<const BooleanContext>& w);

/// D(i_{W2 W1})(chi) = chi restricted to W2.
TwoValuedHom dual_restriction(const TwoValuedHom& chi, const std::shared_ptr<const BooleanContext>& sub);

/// Sigma(f)(lambda) = f(lambda).
double sigma_value(const CoarseGraining& f, std::size_t lambda_index);

struct CheckReport {
    std::size_t checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Naturality of T: Sigma -> D o W at a stage A, exhaustively over every
/// coarse-graining of A, every eigenvalue and every element of W_{f(A)}.
CheckReport check_nat_trans_T(const SpectralOperator& a);
/// The same square for one (f, lambda, J).
CheckReport check_nat_trans_T(const SpectralOperator& a, const CoarseGraining& f, std::size_t lambda_index,
                              ElementMask target_subset);

/// target = map(source), map given on source's eigenvalue indices.
struct FunctionalRelation {
    std::size_t source = 0;
    std::size_t target = 0;
    ValueMap map;
};

/// Every ordered pair (i, j), i != j, with family[j] a function of family[i].
std::vector<FunctionalRelation> detect_relations(std::span<const SpectralOperator> family);

/// Chosen eigenvalue index per family member.
struct SectionAssignment {
    std::vector<std::size_t> values;
};

/// Backtracking search for a global section of the spectral presheaf over a
/// finite family: gamma(target) = map(gamma(source)) for every relation.
/// Declared relations are verified against is_function_of and merged with
/// the detected ones. Members in order, eigenvalues ascending.
std::optional<SectionAssignment> search_sigma_global_section(std::span<const SpectralOperator> family,
                                                             std::span<const FunctionalRelation> declared = {});

} // namespace qsieve
