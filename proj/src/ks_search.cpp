#include "qsieve/ks_search.hpp"

#include "qsieve/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace qsieve {

namespace {

constexpr double grid = 1e6;

void append_int(std::string& out, std::int64_t v)
{
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * b)) & 0xffu));
    }
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

ProjectorFingerprint fingerprint(const ComplexMatrix& p)
{
    const ComplexMatrix h = (p + p.adjoint()) / 2.0;
    std::string key;
    append_int(key, h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            append_int(key, std::llround(h(i, j).real() * grid));
            append_int(key, std::llround(h(i, j).imag() * grid));
        }
    }
    const auto hash = fnv1a(key);
    return ProjectorFingerprint {std::move(key), hash};
}

ComplexMatrix ray_projector(const ComplexVector& v, const Tolerances& tol)
{
    const double n2 = v.squaredNorm();
    if (n2 <= tol.proj) {
        throw Error(ErrorKind::ZeroNorm, "ray vector has zero norm");
    }
    return v * v.adjoint() / n2;
}

// ---------------------------------------------------------------- family

ContextFamily ContextFamily::from_contexts(std::vector<BooleanContext> contexts, std::vector<std::string> names)
{
    if (contexts.empty()) {
        throw Error(ErrorKind::InvalidArgument, "context family is empty");
    }
    if (!names.empty() && names.size() != contexts.size()) {
        throw Error(ErrorKind::InvalidArgument, "one name per context required");
    }
    ContextFamily fam;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (contexts[i].dim() != contexts.front().dim()) {
            throw Error(ErrorKind::InvalidArgument, "contexts act on different dimensions");
        }
        if (contexts[i].atom_count() > max_context_atoms) {
            throw Error(ErrorKind::TooLarge, "context has too many atoms");
        }
        fam.names_.push_back(names.empty() ? "W" + std::to_string(i) : names[i]);
    }
    fam.contexts_ = std::move(contexts);

    std::map<std::string, SharedProjector> by_key;
    for (std::size_t c = 0; c < fam.contexts_.size(); ++c) {
        const auto& ctx = fam.contexts_[c];
        for (ElementMask m = 1; m < ctx.full_mask(); ++m) {
            auto fp = fingerprint(ctx.element(m));
            auto& entry = by_key[fp.key];
            if (entry.occurrences.empty()) {
                entry.fingerprint = std::move(fp);
            }
            entry.occurrences.emplace_back(c, m);
        }
    }
    for (auto& [key, entry] : by_key) {
        if (entry.occurrences.size() > 1) {
            fam.shared_.push_back(std::move(entry));
        }
    }
    return fam;
}

ContextFamily ContextFamily::subfamily(const std::vector<std::size_t>& keep) const
{
    std::vector<BooleanContext> contexts;
    std::vector<std::string> names;
    for (auto i : keep) {
        contexts.push_back(context(i));
        names.push_back(name(i));
    }
    return from_contexts(std::move(contexts), std::move(names));
}

// ---------------------------------------------------------------- search

namespace {

struct Link {
    std::size_t first_context;
    ElementMask first_mask;
    ElementMask second_mask;  // in the context that closes the link
};

bool backtrack(std::size_t depth, const ContextFamily& fam, const std::vector<std::vector<Link>>& closing,
               std::vector<std::size_t>& chosen)
{
    if (depth == fam.size()) {
        return true;
    }
    for (std::size_t a = 0; a < fam.context(depth).atom_count(); ++a) {
        chosen[depth] = a;
        bool consistent = true;
        for (const auto& link : closing[depth]) {
            const bool v1 = (link.first_mask >> chosen[link.first_context]) & 1u;
            const bool v2 = (link.second_mask >> a) & 1u;
            if (v1 != v2) {
                consistent = false;
                break;
            }
        }
        if (consistent && backtrack(depth + 1, fam, closing, chosen)) {
            return true;
        }
    }
    return false;
}

} // namespace

std::optional<DualSectionWitness> search_dual_section(const ContextFamily& fam)
{
    // Chain each shared projector's occurrences; a link is checked when its
    // later context is assigned.
    std::vector<std::vector<Link>> closing(fam.size());
    for (const auto& sp : fam.shared()) {
        for (std::size_t i = 1; i < sp.occurrences.size(); ++i) {
            const auto& [c1, m1] = sp.occurrences[i - 1];
            const auto& [c2, m2] = sp.occurrences[i];
            closing[c2].push_back(Link {c1, m1, m2});
        }
    }
    std::vector<std::size_t> chosen(fam.size(), 0);
    if (!backtrack(0, fam, closing, chosen)) {
        return std::nullopt;
    }
    DualSectionWitness w {chosen, {}};
    for (const auto& sp : fam.shared()) {
        const auto& [c, m] = sp.occurrences.front();
        w.shared_values.push_back((m >> chosen[c]) & 1u);
    }
    return w;
}

WitnessReport verify_dual_section(const ContextFamily& fam, const DualSectionWitness& w)
{
    WitnessReport report;
    if (w.chosen.size() != fam.size()) {
        report.violations.push_back("witness does not cover the family");
        return report;
    }
    for (std::size_t c = 0; c < fam.size(); ++c) {
        ++report.checked;
        if (w.chosen[c] >= fam.context(c).atom_count()) {
            report.violations.push_back("chosen atom out of range in " + fam.name(c));
        }
    }
    if (!report.ok()) {
        return report;
    }
    for (std::size_t c1 = 0; c1 < fam.size(); ++c1) {
        const auto& w1 = fam.context(c1);
        for (std::size_t c2 = c1 + 1; c2 < fam.size(); ++c2) {
            const auto& w2 = fam.context(c2);
            const double tol = std::max(w1.tolerances().proj, w2.tolerances().proj);
            for (ElementMask m1 = 1; m1 < w1.full_mask(); ++m1) {
                const auto p1 = w1.element(m1);
                for (ElementMask m2 = 1; m2 < w2.full_mask(); ++m2) {
                    if (!approx_equal(p1, w2.element(m2), tol)) {
                        continue;
                    }
                    ++report.checked;
                    const bool v1 = (m1 >> w.chosen[c1]) & 1u;
                    const bool v2 = (m2 >> w.chosen[c2]) & 1u;
                    if (v1 != v2) {
                        std::ostringstream os;
                        os << "shared projector valued " << v1 << " in " << fam.name(c1) << " but " << v2 << " in "
                           << fam.name(c2);
                        report.violations.push_back(os.str());
                    }
                }
            }
        }
    }
    return report;
}

ContextFamily minimal_uncolorable_subfamily(const ContextFamily& fam)
{
    if (search_dual_section(fam)) {
        throw Error(ErrorKind::StillColorable, "the family admits a global section");
    }
    std::vector<std::size_t> keep(fam.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        keep[i] = i;
    }
    for (std::size_t pos = 0; pos < keep.size();) {
        if (keep.size() == 1) {
            break;
        }
        auto trial = keep;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
        if (!search_dual_section(fam.subfamily(trial))) {
            keep = std::move(trial);
        } else {
            ++pos;
        }
    }
    return fam.subfamily(keep);
}

SpectralOperator context_operator(const BooleanContext& ctx)
{
    std::vector<double> values;
    for (std::size_t j = 0; j < ctx.atom_count(); ++j) {
        values.push_back(static_cast<double>(j + 1));
    }
    return SpectralOperator::from_spectrum(std::move(values), ctx.atoms(), ctx.tolerances());
}

PartialValuation section_to_partial_valuation(const DualSectionWitness& w, const ContextFamily& fam)
{
    if (w.chosen.size() != fam.size()) {
        throw Error(ErrorKind::InvalidArgument, "witness does not cover the family");
    }
    std::vector<PartialValuation::Assignment> assignments;
    for (std::size_t c = 0; c < fam.size(); ++c) {
        assignments.push_back(PartialValuation::Assignment {context_operator(fam.context(c)), w.chosen[c]});
    }
    return PartialValuation::explicit_assignments(std::move(assignments));
}

} // namespace qsieve
