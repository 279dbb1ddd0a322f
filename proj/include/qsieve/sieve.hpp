#pragma once

// Sieves on an operator with k distinct eigenvalues, stored as up-closed sets
// of partitions of its spectrum, and the Heyting algebra they form.

#include "qsieve/partition.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qsieve {

/// Whether constant coarse-grainings r*1 -> A (the one-block partition) are
/// admissible morphisms.
enum class SieveMode { WithConstants, WithoutConstants };

std::string to_string(SieveMode mode);

enum class Classification { TotallyTrue, TotallyFalse, MinimallyTrue, Intermediate };

std::string to_string(Classification c);

class Sieve {
public:
    /// false_A.
    static Sieve empty(std::size_t k, SieveMode mode);
    /// true_A: every admissible partition.
    static Sieve principal(std::size_t k, SieveMode mode);
    /// Smallest sieve containing the (admissible) seed partitions.
    static Sieve up_closure(std::size_t k, SieveMode mode, std::span<const Partition> seed);
    /// Takes an explicit member set; throws NotASieve unless it is up-closed
    /// and admissible.
    static Sieve from_partitions(std::size_t k, SieveMode mode, std::span<const Partition> members);
    /// Builds from a membership predicate over lattice indices, then checks
    /// up-closure (throws NotASieve on failure).
    template <typename Pred>
    static Sieve from_predicate(std::size_t k, SieveMode mode, Pred&& member)
    {
        Sieve s(k, mode);
        for (std::size_t i = 0; i < s.lattice_->size(); ++i) {
            s.members_[i] = s.admissible(i) && member(i);
        }
        s.require_sieve();
        return s;
    }

    std::size_t k() const { return lattice_->k(); }
    SieveMode mode() const { return mode_; }
    const PartitionLattice& lattice() const { return *lattice_; }

    bool admissible(std::size_t index) const;
    bool contains(std::size_t index) const { return members_[index]; }
    bool contains(const Partition& p) const;
    std::size_t size() const;
    /// Members in canonical order.
    std::vector<Partition> partitions() const;
    std::vector<std::size_t> member_indices() const;

    bool is_up_closed() const;
    /// Subset order; throws BaseMismatch across spectra or modes.
    bool leq(const Sieve& other) const;

    friend bool operator==(const Sieve& a, const Sieve& b)
    {
        return a.k() == b.k() && a.mode_ == b.mode_ && a.members_ == b.members_;
    }

    std::string to_string() const;

private:
    Sieve(std::size_t k, SieveMode mode);
    void require_sieve() const;

    std::shared_ptr<const PartitionLattice> lattice_;
    SieveMode mode_;
    std::vector<bool> members_;

    friend Sieve heyting_meet(const Sieve&, const Sieve&);
    friend Sieve heyting_join(const Sieve&, const Sieve&);
    friend Sieve heyting_implies(const Sieve&, const Sieve&);
};

std::ostream& operator<<(std::ostream& os, const Sieve& s);

Sieve heyting_meet(const Sieve& a, const Sieve& b);
Sieve heyting_join(const Sieve& a, const Sieve& b);
Sieve heyting_implies(const Sieve& a, const Sieve& b);
Sieve heyting_neg(const Sieve& s);

/// Omega(f)(S): sieve on the target B of f: B -> A. A partition rho of
/// sigma(B) belongs iff its composite with f lies in S.
Sieve pullback(const Sieve& s, const CoarseGraining& f);

Classification classify(const Sieve& s);

/// Hasse diagram of the coarsening order, one node per partition; members of
/// highlight (if given) are filled. labels, if non-empty, names the k
/// spectrum elements in block notation.
std::string partition_lattice_dot(std::size_t k, const Sieve* highlight = nullptr,
                                  const std::vector<std::string>& labels = {});

} // namespace qsieve
