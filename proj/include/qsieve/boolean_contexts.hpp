#pragma once

// The W side: every Boolean subalgebra of one finite top algebra, the
// canonical coarse-graining between them, and sieve-valued valuations whose
// stages are Boolean algebras rather than operators.
//
// A subalgebra of the top is a partition of the top's atoms; its atoms are
// the block sums. Elements of any node are written as masks over the top's
// atoms (unions of blocks), so inclusion maps are the identity on masks.

#include "qsieve/boolean_context.hpp"
#include "qsieve/partition.hpp"
#include "qsieve/sieve.hpp"
#include "qsieve/spectral.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qsieve {

class SubalgebraPoset {
public:
    static constexpr std::size_t max_atoms = PartitionLattice::max_k;

    /// WithoutConstants drops the trivial algebra {0, 1}.
    explicit SubalgebraPoset(BooleanContext top, SieveMode mode = SieveMode::WithConstants);

    const BooleanContext& top() const { return top_; }
    SieveMode mode() const { return mode_; }
    std::size_t size() const { return nodes_.size(); }
    /// The atom partition of node i.
    const Partition& node(std::size_t i) const { return lattice_->at(nodes_.at(i)); }
    std::size_t top_index() const { return top_node_; }
    std::optional<std::size_t> trivial_index() const { return trivial_node_; }

    /// W_sub is a subalgebra of W_super.
    bool includes(std::size_t sub, std::size_t super) const;
    /// Nodes below w (w included), ascending.
    const std::vector<std::size_t>& below(std::size_t w) const { return below_.at(w); }

    /// Top-atom mask of each atom of node w.
    std::vector<ElementMask> atom_masks(std::size_t w) const;
    /// Every element of node w, ascending by mask.
    std::vector<ElementMask> elements(std::size_t w) const;
    bool contains(std::size_t w, ElementMask element) const;
    ComplexMatrix matrix(ElementMask element) const { return top_.element(element); }
    BooleanContext context(std::size_t w) const;

    /// The node equal to w (as a set of projectors), if any.
    std::optional<std::size_t> node_of(const BooleanContext& w) const;
    std::string node_name(std::size_t w) const { return node(w).to_string(); }

private:
    BooleanContext top_;
    SieveMode mode_;
    std::shared_ptr<const PartitionLattice> lattice_;
    std::vector<std::size_t> nodes_;  // lattice indices
    std::vector<std::vector<std::size_t>> below_;
    std::size_t top_node_ = 0;
    std::optional<std::size_t> trivial_node_;
};

/// The least element of W2 dominating alpha (an element of W1), for
/// W2 a subalgebra of W1. Throws NotSubalgebra / InvalidArgument.
ElementMask canonical_theta(const SubalgebraPoset& poset, std::size_t w1, std::size_t w2, ElementMask alpha);
/// Same on free-standing contexts: alpha and the result are masks over the
/// atoms of w1 and w2 respectively.
ElementMask canonical_theta(const BooleanContext& w1, const BooleanContext& w2, ElementMask alpha);

/// A coarse-graining candidate: (W1, W2, alpha) -> element of W2.
using Theta = std::function<ElementMask(std::size_t w1, std::size_t w2, ElementMask alpha)>;

Theta canonical_theta_of(const SubalgebraPoset& poset);

struct CgAxiomReport {
    std::size_t checked = 0;
    bool valid_ok = true;            // output lies in W2
    bool coarse_graining_ok = true;  // alpha <= theta(alpha)
    bool monotone_ok = true;
    bool retraction_ok = true;
    bool composition_ok = true;
    std::vector<std::string> violations;

    bool ok() const { return valid_ok && coarse_graining_ok && monotone_ok && retraction_ok && composition_ok; }
};

/// Exhaustive check over all comparable pairs and triples and all elements.
CgAxiomReport check_cg_axioms(const SubalgebraPoset& poset);
CgAxiomReport check_cg_axioms(const SubalgebraPoset& poset, const Theta& theta);

/// A sieve on a node W: a down-closed set of subalgebras of W.
class WSieve {
public:
    /// Throws NotASieve unless members are below base and down-closed.
    static WSieve from_members(const SubalgebraPoset& poset, std::size_t base, std::vector<std::size_t> members);
    static WSieve empty(std::size_t base) { return WSieve(base, {}); }
    static WSieve principal(const SubalgebraPoset& poset, std::size_t base);

    std::size_t base() const { return base_; }
    /// Ascending node indices.
    const std::vector<std::size_t>& members() const { return members_; }
    bool contains(std::size_t w) const;
    std::size_t size() const { return members_.size(); }

    /// down(to) intersected with this sieve, as a sieve on to.
    WSieve restrict_to(const SubalgebraPoset& poset, std::size_t to) const;

    friend bool operator==(const WSieve&, const WSieve&) = default;

private:
    WSieve(std::size_t base, std::vector<std::size_t> members) : base_(base), members_(std::move(members)) {}
    std::size_t base_;
    std::vector<std::size_t> members_;
};

std::string to_string(const SubalgebraPoset& poset, const WSieve& s);

/// nu^rho_W(alpha) = { W' <= W | tr(rho theta_{WW'}(alpha)) = 1 }.
WSieve evaluate_w(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w, ElementMask alpha);
WSieve evaluate_w(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w, ElementMask alpha,
                  const Theta& theta);

/// phi: W -> Omega(W), keyed by element mask.
struct LocalValuation {
    std::size_t node = 0;
    std::map<ElementMask, WSieve> values;
};

LocalValuation local_valuation(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w);

struct LocalValuationReport {
    bool total_ok = true;     // defined on every element, each value a sieve on W
    bool null_ok = true;
    bool monotone_ok = true;
    bool exclusive_ok = true;
    bool unit_ok = true;      // informational
    std::vector<std::string> violations;

    bool mandatory_ok() const { return total_ok && null_ok && monotone_ok && exclusive_ok; }
};

/// Null, monotonicity and exclusivity over all element pairs; unit reported.
LocalValuationReport check_local_valuation(const SubalgebraPoset& poset, const LocalValuation& phi);

/// phi restricted along W2 <= W: beta -> down(W2) intersected with phi(beta).
LocalValuation restrict_local_valuation(const SubalgebraPoset& poset, const LocalValuation& phi, std::size_t w2);

struct MatchingReport {
    std::size_t checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// phi_{W2}(theta_{W1W2}(alpha)) = down(W2) intersected with phi_{W1}(alpha), for every
/// comparable pair present in the family and every alpha in W1.
MatchingReport check_matching_family(const SubalgebraPoset& poset, const std::map<std::size_t, LocalValuation>& family,
                                     const Theta& theta);

/// The matching condition for the family nu^rho over the whole poset.
MatchingReport check_w_matching(const QuantumState& rho, const SubalgebraPoset& poset);

} // namespace qsieve
