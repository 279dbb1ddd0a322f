#include "qsieve/boolean_contexts.hpp"

#include "qsieve/errors.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace qsieve {

namespace {

constexpr std::size_t max_messages = 100;

void record(std::vector<std::string>& out, bool& flag, const std::string& message)
{
    flag = false;
    if (out.size() < max_messages) {
        out.push_back(message);
    }
}

bool submask(ElementMask a, ElementMask b) { return (a & ~b) == 0; }

} // namespace

// ---------------------------------------------------------------- poset

SubalgebraPoset::SubalgebraPoset(BooleanContext top, SieveMode mode) : top_(std::move(top)), mode_(mode)
{
    if (top_.atom_count() > max_atoms) {
        throw Error(ErrorKind::TooLarge, "subalgebra poset limited to " + std::to_string(max_atoms) + " atoms");
    }
    lattice_ = PartitionLattice::of(top_.atom_count());
    for (std::size_t i = 0; i < lattice_->size(); ++i) {
        const bool trivial = lattice_->at(i).is_one_block();
        if (trivial && mode_ == SieveMode::WithoutConstants) {
            continue;
        }
        if (trivial) {
            trivial_node_ = nodes_.size();
        }
        if (i == lattice_->discrete_index()) {
            top_node_ = nodes_.size();
        }
        nodes_.push_back(i);
    }
    if (nodes_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "a one-atom top has no non-trivial subalgebras");
    }
    below_.resize(nodes_.size());
    for (std::size_t w = 0; w < nodes_.size(); ++w) {
        for (std::size_t v = 0; v < nodes_.size(); ++v) {
            if (includes(v, w)) {
                below_[w].push_back(v);
            }
        }
    }
}

bool SubalgebraPoset::includes(std::size_t sub, std::size_t super) const
{
    return lattice_->coarsens(nodes_.at(super), nodes_.at(sub));
}

std::vector<ElementMask> SubalgebraPoset::atom_masks(std::size_t w) const
{
    std::vector<ElementMask> out;
    for (const auto& block : node(w).blocks()) {
        ElementMask m = 0;
        for (auto a : block) {
            m |= ElementMask {1} << a;
        }
        out.push_back(m);
    }
    return out;
}

std::vector<ElementMask> SubalgebraPoset::elements(std::size_t w) const
{
    const auto atoms = atom_masks(w);
    std::vector<ElementMask> out;
    const std::size_t count = std::size_t {1} << atoms.size();
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        ElementMask m = 0;
        for (std::size_t b = 0; b < atoms.size(); ++b) {
            if ((s >> b) & 1u) {
                m |= atoms[b];
            }
        }
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool SubalgebraPoset::contains(std::size_t w, ElementMask element) const
{
    if (!submask(element, top_.full_mask())) {
        return false;
    }
    for (auto atom : atom_masks(w)) {
        const auto overlap = atom & element;
        if (overlap != 0 && overlap != atom) {
            return false;
        }
    }
    return true;
}

BooleanContext SubalgebraPoset::context(std::size_t w) const
{
    std::vector<ComplexMatrix> atoms;
    for (auto m : atom_masks(w)) {
        atoms.push_back(top_.element(m));
    }
    return BooleanContext::from_atoms(std::move(atoms), top_.tolerances());
}

std::optional<std::size_t> SubalgebraPoset::node_of(const BooleanContext& w) const
{
    std::vector<ElementMask> embedding;
    try {
        embedding = subalgebra_embedding(w, top_);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::vector<std::size_t> labels(top_.atom_count());
    for (std::size_t b = 0; b < embedding.size(); ++b) {
        for (std::size_t a = 0; a < labels.size(); ++a) {
            if ((embedding[b] >> a) & 1u) {
                labels[a] = b;
            }
        }
    }
    const auto idx = lattice_->index_of(Partition::from_labels(labels));
    const auto it = std::find(nodes_.begin(), nodes_.end(), idx);
    if (it == nodes_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

// ---------------------------------------------------------------- canonical coarse-graining

ElementMask canonical_theta(const SubalgebraPoset& poset, std::size_t w1, std::size_t w2, ElementMask alpha)
{
    if (!poset.includes(w2, w1)) {
        throw Error(ErrorKind::NotSubalgebra,
                    poset.node_name(w2) + " is not a subalgebra of " + poset.node_name(w1));
    }
    if (!poset.contains(w1, alpha)) {
        throw Error(ErrorKind::InvalidArgument, "element is not in the source algebra");
    }
    ElementMask out = 0;
    for (auto atom : poset.atom_masks(w2)) {
        if (atom & alpha) {
            out |= atom;
        }
    }
    return out;
}

ElementMask canonical_theta(const BooleanContext& w1, const BooleanContext& w2, ElementMask alpha)
{
    if (!submask(alpha, w1.full_mask())) {
        throw Error(ErrorKind::InvalidArgument, "element mask exceeds the source algebra");
    }
    const auto embedding = subalgebra_embedding(w2, w1);
    ElementMask out = 0;
    for (std::size_t b = 0; b < embedding.size(); ++b) {
        if (embedding[b] & alpha) {
            out |= ElementMask {1} << b;
        }
    }
    return out;
}

Theta canonical_theta_of(const SubalgebraPoset& poset)
{
    return [&poset](std::size_t w1, std::size_t w2, ElementMask alpha) {
        return canonical_theta(poset, w1, w2, alpha);
    };
}

CgAxiomReport check_cg_axioms(const SubalgebraPoset& poset)
{
    return check_cg_axioms(poset, canonical_theta_of(poset));
}

CgAxiomReport check_cg_axioms(const SubalgebraPoset& poset, const Theta& theta)
{
    CgAxiomReport report;
    auto at = [&](std::size_t w1, std::size_t w2, ElementMask a) {
        std::ostringstream os;
        os << poset.node_name(w1) << " -> " << poset.node_name(w2) << ", alpha " << a;
        return os.str();
    };

    for (std::size_t w1 = 0; w1 < poset.size(); ++w1) {
        const auto elems1 = poset.elements(w1);
        for (auto w2 : poset.below(w1)) {
            std::vector<ElementMask> image(elems1.size());
            for (std::size_t i = 0; i < elems1.size(); ++i) {
                image[i] = theta(w1, w2, elems1[i]);
                ++report.checked;
                if (!poset.contains(w2, image[i])) {
                    record(report.violations, report.valid_ok, "validity: " + at(w1, w2, elems1[i]));
                }
                if (!submask(elems1[i], image[i])) {
                    record(report.violations, report.coarse_graining_ok, "coarse-graining: " + at(w1, w2, elems1[i]));
                }
            }
            for (std::size_t i = 0; i < elems1.size(); ++i) {
                for (std::size_t j = 0; j < elems1.size(); ++j) {
                    if (submask(elems1[i], elems1[j]) && !submask(image[i], image[j])) {
                        record(report.violations, report.monotone_ok,
                               "monotonicity: " + at(w1, w2, elems1[i]) + " vs " + std::to_string(elems1[j]));
                    }
                }
            }
            for (auto beta : poset.elements(w2)) {
                ++report.checked;
                if (theta(w1, w2, beta) != beta) {
                    record(report.violations, report.retraction_ok, "retraction: " + at(w1, w2, beta));
                }
            }
            for (auto w3 : poset.below(w2)) {
                for (std::size_t i = 0; i < elems1.size(); ++i) {
                    ++report.checked;
                    if (!poset.contains(w2, image[i])) {
                        continue;  // already reported as invalid
                    }
                    if (theta(w2, w3, image[i]) != theta(w1, w3, elems1[i])) {
                        record(report.violations, report.composition_ok,
                               "composition via " + poset.node_name(w2) + ": " + at(w1, w3, elems1[i]));
                    }
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------- sieves on W

WSieve WSieve::from_members(const SubalgebraPoset& poset, std::size_t base, std::vector<std::size_t> members)
{
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members) {
        if (m >= poset.size() || !poset.includes(m, base)) {
            throw Error(ErrorKind::NotASieve, "member is not a subalgebra of the base");
        }
        for (auto below : poset.below(m)) {
            if (!std::binary_search(members.begin(), members.end(), below)) {
                throw Error(ErrorKind::NotASieve,
                            "not down-closed: " + poset.node_name(below) + " missing below " + poset.node_name(m));
            }
        }
    }
    return WSieve(base, std::move(members));
}

WSieve WSieve::principal(const SubalgebraPoset& poset, std::size_t base)
{
    return WSieve(base, poset.below(base));
}

bool WSieve::contains(std::size_t w) const
{
    return std::binary_search(members_.begin(), members_.end(), w);
}

WSieve WSieve::restrict_to(const SubalgebraPoset& poset, std::size_t to) const
{
    if (!poset.includes(to, base_)) {
        throw Error(ErrorKind::NotSubalgebra, "restriction target is not below the base");
    }
    std::vector<std::size_t> kept;
    for (auto m : members_) {
        if (poset.includes(m, to)) {
            kept.push_back(m);
        }
    }
    return WSieve(to, std::move(kept));
}

std::string to_string(const SubalgebraPoset& poset, const WSieve& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.members().size(); ++i) {
        out += (i ? ", " : "") + poset.node_name(s.members()[i]);
    }
    return out + "}";
}

WSieve evaluate_w(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w, ElementMask alpha)
{
    return evaluate_w(rho, poset, w, alpha, canonical_theta_of(poset));
}

WSieve evaluate_w(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w, ElementMask alpha,
                  const Theta& theta)
{
    if (rho.dim() != poset.top().dim()) {
        throw Error(ErrorKind::InvalidArgument, "state and algebra act on different dimensions");
    }
    if (!poset.contains(w, alpha)) {
        throw Error(ErrorKind::InvalidArgument, "element is not in the algebra");
    }
    const double one = poset.top().tolerances().one;
    std::vector<std::size_t> members;
    for (auto sub : poset.below(w)) {
        if (prob(rho, poset.matrix(theta(w, sub, alpha))) >= 1.0 - one) {
            members.push_back(sub);
        }
    }
    return WSieve::from_members(poset, w, std::move(members));
}

LocalValuation local_valuation(const QuantumState& rho, const SubalgebraPoset& poset, std::size_t w)
{
    LocalValuation phi {w, {}};
    for (auto alpha : poset.elements(w)) {
        phi.values.emplace(alpha, evaluate_w(rho, poset, w, alpha));
    }
    return phi;
}

LocalValuationReport check_local_valuation(const SubalgebraPoset& poset, const LocalValuation& phi)
{
    LocalValuationReport report;
    const auto elems = poset.elements(phi.node);
    const auto truth = WSieve::principal(poset, phi.node);

    for (auto alpha : elems) {
        const auto it = phi.values.find(alpha);
        if (it == phi.values.end()) {
            record(report.violations, report.total_ok, "undefined on element " + std::to_string(alpha));
            continue;
        }
        try {
            if (it->second.base() != phi.node) {
                throw Error(ErrorKind::NotASieve, "value lives on another stage");
            }
            WSieve::from_members(poset, phi.node, it->second.members());
        } catch (const Error& e) {
            record(report.violations, report.total_ok,
                   "value on element " + std::to_string(alpha) + " is not a sieve: " + e.what());
        }
    }
    if (!report.total_ok) {
        return report;
    }

    if (phi.values.at(0).size() != 0) {
        record(report.violations, report.null_ok, "null: phi(0) = " + to_string(poset, phi.values.at(0)));
    }
    for (auto a : elems) {
        const auto& va = phi.values.at(a);
        for (auto b : elems) {
            const auto& vb = phi.values.at(b);
            if (submask(a, b) && !std::includes(vb.members().begin(), vb.members().end(), va.members().begin(),
                                                va.members().end())) {
                record(report.violations, report.monotone_ok,
                       "monotonicity: " + std::to_string(a) + " <= " + std::to_string(b));
            }
            if ((a & b) == 0 && va == truth && vb == truth) {
                record(report.violations, report.exclusive_ok,
                       "exclusivity: " + std::to_string(a) + " and " + std::to_string(b) + " both true");
            }
        }
    }
    if (!(phi.values.at(elems.back()) == truth)) {
        report.unit_ok = false;
        report.violations.push_back("unit: phi(1) = " + to_string(poset, phi.values.at(elems.back())));
    }
    return report;
}

LocalValuation restrict_local_valuation(const SubalgebraPoset& poset, const LocalValuation& phi, std::size_t w2)
{
    if (!poset.includes(w2, phi.node)) {
        throw Error(ErrorKind::NotSubalgebra, "restriction target is not below the stage");
    }
    LocalValuation out {w2, {}};
    for (auto beta : poset.elements(w2)) {
        out.values.emplace(beta, phi.values.at(beta).restrict_to(poset, w2));
    }
    return out;
}

MatchingReport check_matching_family(const SubalgebraPoset& poset, const std::map<std::size_t, LocalValuation>& family,
                                     const Theta& theta)
{
    MatchingReport report;
    bool ok = true;
    for (const auto& [w1, phi1] : family) {
        for (auto w2 : poset.below(w1)) {
            const auto it = family.find(w2);
            if (it == family.end()) {
                continue;
            }
            for (auto alpha : poset.elements(w1)) {
                ++report.checked;
                const auto& lhs = it->second.values.at(theta(w1, w2, alpha));
                const auto rhs = phi1.values.at(alpha).restrict_to(poset, w2);
                if (!(lhs == rhs)) {
                    std::ostringstream os;
                    os << poset.node_name(w1) << " -> " << poset.node_name(w2) << ", alpha " << alpha << ": "
                       << to_string(poset, lhs) << " vs " << to_string(poset, rhs);
                    record(report.violations, ok, os.str());
                }
            }
        }
    }
    return report;
}

MatchingReport check_w_matching(const QuantumState& rho, const SubalgebraPoset& poset)
{
    std::map<std::size_t, LocalValuation> family;
    for (std::size_t w = 0; w < poset.size(); ++w) {
        family.emplace(w, local_valuation(rho, poset, w));
    }
    return check_matching_family(poset, family, canonical_theta_of(poset));
}

} // namespace qsieve
