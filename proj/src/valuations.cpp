#include "qsieve/valuations.hpp"

#include "qsieve/categories.hpp"
#include "qsieve/errors.hpp"

#include <cmath>
#include <sstream>

namespace qsieve {

Proposition Proposition::make(SpectralOperator op, BorelSubset subset)
{
    if (!subset.fits(op.spectrum_size())) {
        throw Error(ErrorKind::InvalidArgument, "subset refers to eigenvalues outside the spectrum");
    }
    return Proposition {std::move(op), subset};
}

// ---------------------------------------------------------------- partial valuations

PartialValuation PartialValuation::maximal(SpectralOperator m, std::size_t eigen_index)
{
    if (eigen_index >= m.spectrum_size()) {
        throw Error(ErrorKind::InvalidArgument, "eigenvalue index outside the spectrum");
    }
    PartialValuation v;
    v.maximal_ = true;
    v.assignments_.push_back(Assignment {std::move(m), eigen_index});
    return v;
}

PartialValuation PartialValuation::explicit_assignments(std::vector<Assignment> assignments)
{
    std::vector<std::vector<ComplexMatrix>> elements;
    for (const auto& as : assignments) {
        if (as.eigen_index >= as.op.spectrum_size()) {
            throw Error(ErrorKind::InvalidArgument, "eigenvalue index outside the spectrum");
        }
        if (as.op.dim() != assignments.front().op.dim()) {
            throw Error(ErrorKind::InvalidArgument, "assigned operators act on different dimensions");
        }
        auto& list = elements.emplace_back();
        const auto subsets = std::uint64_t {1} << as.op.spectrum_size();
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            list.push_back(spectral_projector(as.op, IndexSet::from_bits(mask)));
        }
    }
    // Two assignments must agree on every projector lying in both spectral algebras.
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double tol = assignments[i].op.tolerances().proj;
            for (std::uint64_t mi = 1; mi + 1 < elements[i].size(); ++mi) {
                for (std::uint64_t mj = 1; mj + 1 < elements[j].size(); ++mj) {
                    if (!approx_equal(elements[i][mi], elements[j][mj], tol)) {
                        continue;
                    }
                    const bool vi = (mi >> assignments[i].eigen_index) & 1u;
                    const bool vj = (mj >> assignments[j].eigen_index) & 1u;
                    if (vi != vj) {
                        throw Error(ErrorKind::InconsistentValuation,
                                    "assignments " + std::to_string(j) + " and " + std::to_string(i) +
                                        " disagree on a shared spectral projector");
                    }
                }
            }
        }
    }
    PartialValuation v;
    v.assignments_ = std::move(assignments);
    return v;
}

std::optional<double> PartialValuation::value_of(const SpectralOperator& b) const
{
    if (b.spectrum_size() == 1) {
        return b.eigenvalues().front();
    }
    for (const auto& as : assignments_) {
        if (auto f = is_function_of(b, as.op)) {
            return (*f)[as.eigen_index];
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- generalized valuations

GeneralizedValuation GeneralizedValuation::from_partial(PartialValuation v, SieveMode mode)
{
    return GeneralizedValuation(std::move(v), 1.0, mode);
}

GeneralizedValuation GeneralizedValuation::from_state(QuantumState s, SieveMode mode)
{
    return GeneralizedValuation(std::move(s), 1.0, mode);
}

GeneralizedValuation GeneralizedValuation::threshold(QuantumState rho, double r, SieveMode mode)
{
    if (!(r > 0.0 && r <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1]");
    }
    GeneralizedValuation nu(std::move(rho), r, mode);
    nu.threshold_ = r;
    return nu;
}

GeneralizedValuation::Kind GeneralizedValuation::kind() const
{
    if (std::holds_alternative<PartialValuation>(source_)) {
        return Kind::FromPartial;
    }
    return threshold_ < 1.0 ? Kind::Threshold : Kind::State;
}

const QuantumState* GeneralizedValuation::state() const
{
    return std::get_if<QuantumState>(&source_);
}

std::string to_string(GeneralizedValuation::Kind kind)
{
    switch (kind) {
    case GeneralizedValuation::Kind::FromPartial: return "partial";
    case GeneralizedValuation::Kind::State: return "state";
    case GeneralizedValuation::Kind::Threshold: return "threshold";
    }
    return "unknown";
}

namespace {

bool probability_passes(const GeneralizedValuation& nu, const ComplexMatrix& projector, const Tolerances& tol)
{
    return prob(*nu.state(), projector) >= nu.threshold_value() - tol.one;
}

// Membership of the coarse-graining with partition pi in nu(A in subset).
bool member(const GeneralizedValuation& nu, const SpectralOperator& a, const Partition& pi, BorelSubset subset)
{
    std::uint64_t blocks_hit = 0;
    for (auto i : subset.indices()) {
        blocks_hit |= std::uint64_t {1} << pi.block_of(i);
    }
    if (const auto* v = nu.partial()) {
        const auto representative = apply_function(a, CoarseGraining::from_partition(pi).values());
        const auto value = v->value_of(representative);
        if (!value) {
            return false;
        }
        const auto block = representative.index_of(*value);
        return block && ((blocks_hit >> *block) & 1u);
    }
    std::vector<std::size_t> fibre;
    for (std::size_t i = 0; i < a.spectrum_size(); ++i) {
        if ((blocks_hit >> pi.block_of(i)) & 1u) {
            fibre.push_back(i);
        }
    }
    return probability_passes(nu, spectral_projector(a, IndexSet::from_indices(fibre)), a.tolerances());
}

void require_dimension(const GeneralizedValuation& nu, const SpectralOperator& a)
{
    if (const auto* s = nu.state(); s && s->dim() != a.dim()) {
        throw Error(ErrorKind::InvalidArgument, "state and operator act on different dimensions");
    }
}

} // namespace

Sieve evaluate(const GeneralizedValuation& nu, const Proposition& p)
{
    require_dimension(nu, p.op);
    if (!p.subset.fits(p.op.spectrum_size())) {
        throw Error(ErrorKind::InvalidArgument, "subset refers to eigenvalues outside the spectrum");
    }
    const auto lattice = PartitionLattice::of(p.op.spectrum_size());
    return Sieve::from_predicate(p.op.spectrum_size(), nu.mode(),
                                 [&](std::size_t j) { return member(nu, p.op, lattice->at(j), p.subset); });
}

Sieve value_sieve(const GeneralizedValuation& nu, const SpectralOperator& a, std::size_t eigen_index)
{
    require_dimension(nu, a);
    if (eigen_index >= a.spectrum_size()) {
        throw Error(ErrorKind::InvalidArgument, "eigenvalue index outside the spectrum");
    }
    const auto lattice = PartitionLattice::of(a.spectrum_size());
    return Sieve::from_predicate(a.spectrum_size(), nu.mode(), [&](std::size_t j) {
        const auto f = CoarseGraining::from_partition(lattice->at(j));
        const auto b = apply_function(a, f.values());
        const double target = sigma_value(f, eigen_index);
        if (const auto* v = nu.partial()) {
            const auto value = v->value_of(b);
            return value && std::abs(*value - target) <= a.tolerances().group;
        }
        const auto idx = b.index_of(target);
        if (!idx) {
            throw Error(ErrorKind::InvalidArgument, "f(a) is not an eigenvalue of f(A)");
        }
        return probability_passes(nu, b.projector(*idx), a.tolerances());
    });
}

FuncReport check_func(const GeneralizedValuation& nu, const SpectralOperator& a, const ValueMap& h, BorelSubset subset)
{
    const auto hcg = CoarseGraining::from_values(h, a.tolerances().group);
    const auto ha = apply_function(a, h);
    std::vector<std::size_t> image;
    for (auto i : subset.indices()) {
        image.push_back(hcg.target_index(i));
    }
    auto coarse = evaluate(nu, Proposition::make(ha, IndexSet::from_indices(image)));
    auto pulled = pullback(evaluate(nu, Proposition::make(a, subset)), hcg);
    return FuncReport {std::move(coarse), std::move(pulled)};
}

AxiomReport check_axioms(const GeneralizedValuation& nu, const SpectralOperator& a)
{
    const auto k = a.spectrum_size();
    const auto subsets = std::uint64_t {1} << k;
    std::vector<Sieve> values;
    values.reserve(subsets);
    for (std::uint64_t m = 0; m < subsets; ++m) {
        values.push_back(evaluate(nu, Proposition::make(a, IndexSet::from_bits(m))));
    }

    AxiomReport report;
    auto violate = [&](const char* axiom, std::uint64_t d1, std::uint64_t d2, std::string detail) {
        report.violations.push_back(AxiomViolation {axiom, IndexSet::from_bits(d1), IndexSet::from_bits(d2),
                                                    std::move(detail)});
    };

    if (values[0].size() != 0) {
        report.null_ok = false;
        violate("null", 0, 0, "nu(A in {}) = " + values[0].to_string());
    }
    for (std::uint64_t d1 = 0; d1 < subsets; ++d1) {
        const bool first_true = classify(values[d1]) == Classification::TotallyTrue;
        for (std::uint64_t d2 = 0; d2 < subsets; ++d2) {
            if ((d1 & ~d2) == 0 && !values[d1].leq(values[d2])) {
                report.monotone_ok = false;
                violate("monotonicity", d1, d2, values[d1].to_string() + " not below " + values[d2].to_string());
            }
            if ((d1 & d2) == 0 && first_true && classify(values[d2]) == Classification::TotallyTrue) {
                report.exclusive_ok = false;
                violate("exclusivity", d1, d2, "both disjoint propositions are totally true");
            }
        }
    }

    const auto lattice = PartitionLattice::of(k);
    for (const auto& p : lattice->partitions()) {
        const auto h = CoarseGraining::from_partition(p).values();
        for (std::uint64_t d = 0; d < subsets; ++d) {
            auto r = check_func(nu, a, h, IndexSet::from_bits(d));
            if (!r.equal()) {
                report.func_ok = false;
                violate("func", d, d,
                        "h = " + p.to_string() + ": " + r.coarse.to_string() + " vs " + r.pulled.to_string());
            }
        }
    }

    report.unit_value = values[subsets - 1];
    report.unit_ok = values[subsets - 1] == Sieve::principal(k, nu.mode());
    return report;
}

std::string to_string(DisjunctionStrength d)
{
    return d == DisjunctionStrength::Equality ? "Equality" : "StrictInequality";
}

DisjunctionStrength check_disjunction_strength(const GeneralizedValuation& nu, const SpectralOperator& a,
                                               BorelSubset first, BorelSubset second)
{
    const auto together = evaluate(nu, Proposition::make(a, first | second));
    const auto separate = heyting_join(evaluate(nu, Proposition::make(a, first)),
                                       evaluate(nu, Proposition::make(a, second)));
    return together == separate ? DisjunctionStrength::Equality : DisjunctionStrength::StrictInequality;
}

Sieve negation(const GeneralizedValuation& nu, const Proposition& p)
{
    return heyting_neg(evaluate(nu, p));
}

PartialValuation extract_partial(const GeneralizedValuation& nu, std::span<const SpectralOperator> family)
{
    std::vector<PartialValuation::Assignment> assignments;
    for (const auto& a : family) {
        std::optional<std::size_t> found;
        for (std::size_t i = 0; i < a.spectrum_size(); ++i) {
            if (classify(evaluate(nu, Proposition::make(a, IndexSet::singleton(i)))) != Classification::TotallyTrue) {
                continue;
            }
            if (found) {
                throw Error(ErrorKind::InconsistentValuation,
                            "two eigenvalues of one operator are totally true; exclusivity fails");
            }
            found = i;
        }
        if (found) {
            assignments.push_back(PartialValuation::Assignment {a, *found});
        }
    }
    return PartialValuation::explicit_assignments(std::move(assignments));
}

ChainReport compare_chain(const QuantumState& psi, const Proposition& p, SieveMode mode)
{
    const auto nu = GeneralizedValuation::from_state(psi, mode);
    const DownSetCategory down(p.op, mode);
    const auto induced = extract_partial(nu, down.objects());
    ChainReport report {evaluate(nu, p), evaluate(GeneralizedValuation::from_partial(induced, mode), p), {}, {}};
    const auto& lattice = report.direct.lattice();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        if (report.direct.contains(i) && !report.via_partial.contains(i)) {
            report.only_direct.push_back(lattice.at(i));
        }
        if (!report.direct.contains(i) && report.via_partial.contains(i)) {
            report.only_via_partial.push_back(lattice.at(i));
        }
    }
    return report;
}

NaturalityReport check_naturality(const GeneralizedValuation& nu, const SpectralOperator& a, const ValueMap& f)
{
    NaturalityReport report;
    const auto fcg = CoarseGraining::from_values(f, a.tolerances().group);
    const auto fa = apply_function(a, f);
    const auto subsets = std::uint64_t {1} << a.spectrum_size();

    for (std::uint64_t d = 0; d < subsets; ++d) {
        const auto subset = IndexSet::from_bits(d);
        std::vector<std::size_t> image;
        for (auto i : subset.indices()) {
            image.push_back(fcg.target_index(i));
        }
        const auto lhs = pullback(evaluate(nu, Proposition::make(a, subset)), fcg);
        const auto rhs = evaluate(nu, Proposition::make(fa, IndexSet::from_indices(image)));
        ++report.checked;
        if (lhs != rhs) {
            std::ostringstream os;
            os << "N square fails for Delta mask " << d << ": " << lhs << " vs " << rhs;
            report.violations.push_back(os.str());
        }
    }

    for (std::size_t i = 0; i < a.spectrum_size(); ++i) {
        const auto at_a = value_sieve(nu, a, i);
        const auto lhs = pullback(at_a, fcg);
        const auto rhs = value_sieve(nu, fa, fcg.target_index(i));
        ++report.checked;
        if (lhs != rhs) {
            std::ostringstream os;
            os << "V square fails at eigenvalue #" << i << ": " << lhs << " vs " << rhs;
            report.violations.push_back(os.str());
        }
        ++report.checked;
        const auto via_singleton = evaluate(nu, Proposition::make(a, IndexSet::singleton(i)));
        if (at_a != via_singleton) {
            std::ostringstream os;
            os << "V = N o {} fails at eigenvalue #" << i << ": " << at_a << " vs " << via_singleton;
            report.violations.push_back(os.str());
        }
    }
    return report;
}

} // namespace qsieve
