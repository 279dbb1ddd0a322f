#include "qsieve/categories.hpp"

#include "qsieve/errors.hpp"

#include <cmath>
#include <sstream>

namespace qsieve {

BooleanContext spectral_algebra(const SpectralOperator& a)
{
    return BooleanContext::from_atoms(a.projectors(), a.tolerances());
}

ElementMask embed_element(const CoarseGraining& f, ElementMask target_subset)
{
    ElementMask out = 0;
    for (std::size_t i = 0; i < f.source_size(); ++i) {
        if ((target_subset >> f.target_index(i)) & 1u) {
            out |= ElementMask {1} << i;
        }
    }
    return out;
}

// ---------------------------------------------------------------- down-set

DownSetCategory::DownSetCategory(SpectralOperator top, SieveMode mode) : top_(std::move(top)), mode_(mode)
{
    const auto lattice = PartitionLattice::of(top_.spectrum_size());
    for (const auto& p : lattice->partitions()) {
        if (mode_ == SieveMode::WithoutConstants && p.is_one_block()) {
            continue;
        }
        partitions_.push_back(p);
        objects_.push_back(apply_function(top_, CoarseGraining::from_partition(p).values()));
    }
}

bool DownSetCategory::has_morphism(std::size_t from, std::size_t to) const
{
    return partitions_.at(to).refines(partitions_.at(from));
}

// ---------------------------------------------------------------- dual presheaf

std::vector<TwoValuedHom> two_valued_homs(const std::shared_ptr<const BooleanContext>& w)
{
    std::vector<TwoValuedHom> out;
    for (std::size_t a = 0; a < w->atom_count(); ++a) {
        out.push_back(TwoValuedHom {w, a});
    }
    return out;
}

TwoValuedHom dual_restriction(const TwoValuedHom& chi, const std::shared_ptr<const BooleanContext>& sub)
{
    const auto embedding = subalgebra_embedding(*sub, *chi.context);
    for (std::size_t b = 0; b < embedding.size(); ++b) {
        if (chi.value(embedding[b])) {
            return TwoValuedHom {sub, b};
        }
    }
    throw Error(ErrorKind::NotSubalgebra, "no atom of the subalgebra dominates the chosen atom");
}

// ---------------------------------------------------------------- spectral presheaf

double sigma_value(const CoarseGraining& f, std::size_t lambda_index)
{
    return f.values().at(lambda_index);
}

CheckReport check_nat_trans_T(const SpectralOperator& a, const CoarseGraining& f, std::size_t lambda_index,
                              ElementMask target_subset)
{
    CheckReport report;
    const auto fa = apply_function(a, f.values());
    const auto wa = spectral_algebra(a);
    const auto wfa = spectral_algebra(fa);
    if (lambda_index >= a.spectrum_size() || target_subset > wfa.full_mask()) {
        throw Error(ErrorKind::InvalidArgument, "eigenvalue or subset outside the spectrum");
    }

    // T_{f(A)}(f(lambda)) evaluated on E[f(A) in J].
    const auto image = fa.index_of(sigma_value(f, lambda_index));
    ++report.checked;
    if (!image) {
        report.violations.push_back("f(lambda) is not an eigenvalue of f(A)");
        return report;
    }
    const bool lhs = (target_subset >> *image) & 1u;

    // T_A(lambda) evaluated on the same projector, located inside W_A by matrix equality.
    const auto embedded = wa.element_of(wfa.element(target_subset));
    if (!embedded) {
        report.violations.push_back("E[f(A) in J] is not an element of W_A");
        return report;
    }
    const bool rhs = (*embedded >> lambda_index) & 1u;
    if (lhs != rhs) {
        std::ostringstream os;
        os << "square fails for partition " << f.partition().to_string() << ", lambda #" << lambda_index
           << ", J mask " << target_subset;
        report.violations.push_back(os.str());
    }
    return report;
}

CheckReport check_nat_trans_T(const SpectralOperator& a)
{
    CheckReport report;
    const auto lattice = PartitionLattice::of(a.spectrum_size());
    for (const auto& p : lattice->partitions()) {
        const auto f = CoarseGraining::from_partition(p);
        const ElementMask subsets = ElementMask {1} << f.target_size();
        for (std::size_t lambda = 0; lambda < a.spectrum_size(); ++lambda) {
            for (ElementMask j = 0; j < subsets; ++j) {
                auto r = check_nat_trans_T(a, f, lambda, j);
                report.checked += r.checked;
                report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------- global sections

std::vector<FunctionalRelation> detect_relations(std::span<const SpectralOperator> family)
{
    std::vector<FunctionalRelation> out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = 0; j < family.size(); ++j) {
            if (i == j) {
                continue;
            }
            if (auto f = is_function_of(family[j], family[i])) {
                out.push_back(FunctionalRelation {i, j, std::move(*f)});
            }
        }
    }
    return out;
}

namespace {

struct CompiledRelation {
    std::size_t source;
    std::size_t target;
    std::vector<std::size_t> image;  // source eigen index -> target eigen index
};

CompiledRelation compile(const FunctionalRelation& r, std::span<const SpectralOperator> family)
{
    const auto& target = family[r.target];
    CompiledRelation c {r.source, r.target, {}};
    for (double v : r.map) {
        auto idx = target.index_of(v);
        if (!idx) {
            throw Error(ErrorKind::InvalidArgument, "relation maps outside the target spectrum");
        }
        c.image.push_back(*idx);
    }
    return c;
}

bool search(std::size_t depth, std::span<const SpectralOperator> family,
            const std::vector<std::vector<const CompiledRelation*>>& closing, std::vector<std::size_t>& values)
{
    if (depth == family.size()) {
        return true;
    }
    for (std::size_t v = 0; v < family[depth].spectrum_size(); ++v) {
        values[depth] = v;
        bool consistent = true;
        for (const auto* r : closing[depth]) {
            if (r->image[values[r->source]] != values[r->target]) {
                consistent = false;
                break;
            }
        }
        if (consistent && search(depth + 1, family, closing, values)) {
            return true;
        }
    }
    return false;
}

} // namespace

std::optional<SectionAssignment> search_sigma_global_section(std::span<const SpectralOperator> family,
                                                             std::span<const FunctionalRelation> declared)
{
    auto relations = detect_relations(family);
    for (const auto& d : declared) {
        if (d.source >= family.size() || d.target >= family.size()) {
            throw Error(ErrorKind::InvalidArgument, "declared relation refers to an unknown operator");
        }
        auto f = is_function_of(family[d.target], family[d.source]);
        bool agrees = f && f->size() == d.map.size();
        for (std::size_t i = 0; agrees && i < d.map.size(); ++i) {
            agrees = std::abs((*f)[i] - d.map[i]) <= family[d.target].tolerances().group;
        }
        if (!agrees) {
            throw Error(ErrorKind::InvalidArgument, "declared functional relation does not hold");
        }
        relations.push_back(d);
    }

    std::vector<CompiledRelation> compiled;
    compiled.reserve(relations.size());
    for (const auto& r : relations) {
        compiled.push_back(compile(r, family));
    }
    // A relation is checked at the depth where its later endpoint is assigned.
    std::vector<std::vector<const CompiledRelation*>> closing(family.size());
    for (const auto& c : compiled) {
        closing[std::max(c.source, c.target)].push_back(&c);
    }
    std::vector<std::size_t> values(family.size(), 0);
    if (!search(0, family, closing, values)) {
        return std::nullopt;
    }
    return SectionAssignment {std::move(values)};
}

} // namespace qsieve
