#pragma once

// Global sections of the dual presheaf over a finite family of Boolean
// contexts: one two-valued homomorphism per context, agreeing on every
// projector two contexts share. No section = a Kochen-Specker obstruction.

#include "qsieve/boolean_context.hpp"
#include "qsieve/spectral.hpp"
#include "qsieve/valuations.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsieve {

/// Canonical key of a projector: Hermitian part rounded to a 1e-6 grid.
struct ProjectorFingerprint {
    std::string key;     // canonical bytes
    std::uint64_t hash;  // FNV-1a of key

    friend bool operator==(const ProjectorFingerprint& a, const ProjectorFingerprint& b) { return a.key == b.key; }
};

ProjectorFingerprint fingerprint(const ComplexMatrix& p);

/// |v><v| / <v,v>. Throws ZeroNorm.
ComplexMatrix ray_projector(const ComplexVector& v, const Tolerances& tol = {});

class ContextFamily {
public:
    static constexpr std::size_t max_context_atoms = 16;

    /// A projector (other than 0 and 1) occurring as a subset sum in two or
    /// more contexts.
    struct SharedProjector {
        ProjectorFingerprint fingerprint;
        std::vector<std::pair<std::size_t, ElementMask>> occurrences;  // (context, mask), ascending
    };

    /// Names default to "W<i>". Throws InvalidArgument on mixed dimensions.
    static ContextFamily from_contexts(std::vector<BooleanContext> contexts, std::vector<std::string> names = {});

    std::size_t dim() const { return contexts_.front().dim(); }
    std::size_t size() const { return contexts_.size(); }
    const BooleanContext& context(std::size_t i) const { return contexts_.at(i); }
    const std::vector<BooleanContext>& contexts() const { return contexts_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<SharedProjector>& shared() const { return shared_; }

    /// The contexts at the given (ascending) indices, names kept.
    ContextFamily subfamily(const std::vector<std::size_t>& keep) const;

private:
    ContextFamily() = default;
    std::vector<BooleanContext> contexts_;
    std::vector<std::string> names_;
    std::vector<SharedProjector> shared_;
};

struct DualSectionWitness {
    std::vector<std::size_t> chosen;  // atom sent to 1, per context
    std::vector<bool> shared_values;  // per ContextFamily::shared() entry
};

/// Deterministic backtracking: contexts in order, atoms ascending; a branch
/// is pruned as soon as two assigned contexts give a shared projector
/// different values. Returns the first witness, if any.
std::optional<DualSectionWitness> search_dual_section(const ContextFamily& fam);

struct WitnessReport {
    std::size_t checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Independent check by direct matrix comparison of every pair of subset sums.
WitnessReport verify_dual_section(const ContextFamily& fam, const DualSectionWitness& w);

/// Greedy removal of contexts while the family stays uncolorable. Throws
/// StillColorable when the family has a section.
ContextFamily minimal_uncolorable_subfamily(const ContextFamily& fam);

/// sum_j (j + 1) P_j: an operator whose spectral algebra is the context.
SpectralOperator context_operator(const BooleanContext& ctx);

/// Explicit partial valuation assigning each context operator the eigenvalue
/// of its chosen atom.
PartialValuation section_to_partial_valuation(const DualSectionWitness& w, const ContextFamily& fam);

} // namespace qsieve
