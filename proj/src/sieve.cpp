#include "qsieve/sieve.hpp"

#include "qsieve/errors.hpp"

#include <ostream>
#include <sstream>

namespace qsieve {

std::string to_string(SieveMode mode)
{
    return mode == SieveMode::WithConstants ? "o" : "ostar";
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::TotallyTrue: return "TotallyTrue";
    case Classification::TotallyFalse: return "TotallyFalse";
    case Classification::MinimallyTrue: return "MinimallyTrue";
    case Classification::Intermediate: return "Intermediate";
    }
    return "Unknown";
}

Sieve::Sieve(std::size_t k, SieveMode mode)
    : lattice_(PartitionLattice::of(k)), mode_(mode), members_(lattice_->size(), false)
{
}

Sieve Sieve::empty(std::size_t k, SieveMode mode)
{
    return Sieve(k, mode);
}

Sieve Sieve::principal(std::size_t k, SieveMode mode)
{
    Sieve s(k, mode);
    for (std::size_t i = 0; i < s.members_.size(); ++i) {
        s.members_[i] = s.admissible(i);
    }
    return s;
}

Sieve Sieve::up_closure(std::size_t k, SieveMode mode, std::span<const Partition> seed)
{
    Sieve s(k, mode);
    for (const auto& p : seed) {
        for (auto j : s.lattice_->coarsenings(s.lattice_->index_of(p))) {
            s.members_[j] = s.admissible(j);
        }
    }
    return s;
}

Sieve Sieve::from_partitions(std::size_t k, SieveMode mode, std::span<const Partition> members)
{
    Sieve s(k, mode);
    for (const auto& p : members) {
        s.members_[s.lattice_->index_of(p)] = true;
    }
    s.require_sieve();
    return s;
}

bool Sieve::admissible(std::size_t index) const
{
    return mode_ == SieveMode::WithConstants || index != lattice_->one_block_index();
}

bool Sieve::contains(const Partition& p) const
{
    return members_[lattice_->index_of(p)];
}

std::size_t Sieve::size() const
{
    std::size_t n = 0;
    for (bool b : members_) {
        n += b ? 1 : 0;
    }
    return n;
}

std::vector<std::size_t> Sieve::member_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i]) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<Partition> Sieve::partitions() const
{
    std::vector<Partition> out;
    for (auto i : member_indices()) {
        out.push_back(lattice_->at(i));
    }
    return out;
}

bool Sieve::is_up_closed() const
{
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (!members_[i]) {
            continue;
        }
        if (!admissible(i)) {
            return false;
        }
        for (auto j : lattice_->coarsenings(i)) {
            if (admissible(j) && !members_[j]) {
                return false;
            }
        }
    }
    return true;
}

void Sieve::require_sieve() const
{
    if (!is_up_closed()) {
        throw Error(ErrorKind::NotASieve, "member set " + to_string() + " is not closed under coarsening");
    }
}

namespace {

void require_same_base(const Sieve& a, const Sieve& b)
{
    if (a.k() != b.k() || a.mode() != b.mode()) {
        throw Error(ErrorKind::BaseMismatch, "sieves live on different stages or modes");
    }
}

} // namespace

bool Sieve::leq(const Sieve& other) const
{
    require_same_base(*this, other);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] && !other.members_[i]) {
            return false;
        }
    }
    return true;
}

std::string Sieve::to_string() const
{
    std::string out = "[";
    bool first = true;
    for (auto i : member_indices()) {
        out += (first ? "" : ", ") + lattice_->at(i).to_string();
        first = false;
    }
    return out + "]";
}

std::ostream& operator<<(std::ostream& os, const Sieve& s)
{
    return os << s.to_string();
}

Sieve heyting_meet(const Sieve& a, const Sieve& b)
{
    require_same_base(a, b);
    Sieve s = a;
    for (std::size_t i = 0; i < s.members_.size(); ++i) {
        s.members_[i] = a.members_[i] && b.members_[i];
    }
    return s;
}

Sieve heyting_join(const Sieve& a, const Sieve& b)
{
    require_same_base(a, b);
    Sieve s = a;
    for (std::size_t i = 0; i < s.members_.size(); ++i) {
        s.members_[i] = a.members_[i] || b.members_[i];
    }
    return s;
}

Sieve heyting_implies(const Sieve& a, const Sieve& b)
{
    require_same_base(a, b);
    Sieve s = a;
    const auto& lattice = a.lattice();
    for (std::size_t i = 0; i < s.members_.size(); ++i) {
        bool holds = a.admissible(i);
        for (auto j : lattice.coarsenings(i)) {
            if (holds && a.admissible(j) && a.members_[j] && !b.members_[j]) {
                holds = false;
            }
        }
        s.members_[i] = holds;
    }
    return s;
}

Sieve heyting_neg(const Sieve& s)
{
    return heyting_implies(s, Sieve::empty(s.k(), s.mode()));
}

Sieve pullback(const Sieve& s, const CoarseGraining& f)
{
    if (f.source_size() != s.k()) {
        throw Error(ErrorKind::BaseMismatch, "coarse-graining does not target the sieve's stage");
    }
    const auto& source = s.lattice();
    const auto target = PartitionLattice::of(f.target_size());
    return Sieve::from_predicate(f.target_size(), s.mode(), [&](std::size_t j) {
        return s.contains(source.index_of(composite_partition(f, target->at(j))));
    });
}

Classification classify(const Sieve& s)
{
    const auto n = s.size();
    if (n == 0) {
        return Classification::TotallyFalse;
    }
    if (s == Sieve::principal(s.k(), s.mode())) {
        return Classification::TotallyTrue;
    }
    if (s.mode() == SieveMode::WithConstants && n == 1 && s.contains(s.lattice().one_block_index())) {
        return Classification::MinimallyTrue;
    }
    return Classification::Intermediate;
}

std::string partition_lattice_dot(std::size_t k, const Sieve* highlight, const std::vector<std::string>& labels)
{
    const auto lattice = PartitionLattice::of(k);
    if (highlight && highlight->k() != k) {
        throw Error(ErrorKind::BaseMismatch, "highlighted sieve lives on a different stage");
    }
    if (!labels.empty() && labels.size() != k) {
        throw Error(ErrorKind::InvalidArgument, "need one label per spectrum element");
    }
    auto name = [&](const Partition& p) {
        if (labels.empty()) {
            return p.to_string();
        }
        std::string out = "{";
        for (std::size_t b = 0; b < p.blocks().size(); ++b) {
            out += b ? ",{" : "{";
            for (std::size_t j = 0; j < p.blocks()[b].size(); ++j) {
                out += (j ? "," : "") + labels[p.blocks()[b][j]];
            }
            out += "}";
        }
        return out + "}";
    };

    std::ostringstream os;
    os << "digraph partition_lattice {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < lattice->size(); ++i) {
        os << "  p" << i << " [label=\"" << name(lattice->at(i)) << "\"";
        if (highlight && highlight->contains(i)) {
            os << ", style=filled, fillcolor=\"lightblue\", penwidth=2";
        }
        os << "];\n";
    }
    for (const auto& [lo, hi] : lattice->covers()) {
        os << "  p" << lo << " -> p" << hi << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace qsieve
