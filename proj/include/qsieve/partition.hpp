#pragma once

// Set partitions of a finite spectrum {0..k-1} and the coarsening lattice
// they form. A partition stands for the equivalence class of a
// coarse-graining morphism f(A) -> A: eigenvalues in one block are sent to
// the same value.

#include "qsieve/spectral.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace qsieve {

class Partition {
public:
    using Block = std::vector<std::size_t>;

    /// Builds from arbitrary block labels (element i goes to block labels[i]).
    static Partition from_labels(std::span<const std::size_t> labels);
    /// Validates disjointness and coverage of {0..k-1}.
    static Partition from_blocks(std::vector<Block> blocks, std::size_t k);
    static Partition discrete(std::size_t k);
    static Partition one_block(std::size_t k);
    /// Eigenvalue indices with equal values (within eps) share a block.
    static Partition from_values(const ValueMap& values, double eps);

    std::size_t size() const { return block_of_.size(); }
    std::size_t block_count() const { return blocks_.size(); }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t block_of(std::size_t i) const { return block_of_.at(i); }
    /// Restricted growth string: the canonical encoding.
    const std::vector<std::size_t>& labels() const { return block_of_; }

    bool is_one_block() const { return blocks_.size() == 1; }
    bool is_discrete() const { return blocks_.size() == block_of_.size(); }
    /// True when every block of *this lies inside a block of other.
    bool refines(const Partition& other) const;
    bool coarsens(const Partition& other) const { return other.refines(*this); }

    /// Index notation, e.g. {{0,2},{1}}.
    std::string to_string() const;

    friend bool operator==(const Partition&, const Partition&) = default;
    /// Lexicographic order on the sorted block lists.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b);

private:
    Partition() = default;
    std::vector<Block> blocks_;
    std::vector<std::size_t> block_of_;
};

/// All partitions of {0..k-1}, in canonical (lexicographic) order, with the
/// coarsening relation precomputed.
class PartitionLattice {
public:
    static constexpr std::size_t max_k = 7;

    /// Shared, cached instance; throws TooLarge above max_k.
    static std::shared_ptr<const PartitionLattice> of(std::size_t k);

    std::size_t k() const { return k_; }
    std::size_t size() const { return partitions_.size(); }
    const Partition& at(std::size_t i) const { return partitions_.at(i); }
    const std::vector<Partition>& partitions() const { return partitions_; }
    std::size_t index_of(const Partition& p) const;
    std::size_t one_block_index() const { return one_block_; }
    std::size_t discrete_index() const { return discrete_; }

    /// Partition j coarsens partition i (j is reachable from i by merging blocks).
    bool coarsens(std::size_t i, std::size_t j) const { return leq_[i * size() + j]; }
    const std::vector<std::size_t>& coarsenings(std::size_t i) const { return up_[i]; }
    /// Covering pairs (i, j): j coarsens i by merging exactly two blocks.
    const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }

    explicit PartitionLattice(std::size_t k);

private:
    std::size_t k_;
    std::vector<Partition> partitions_;
    std::vector<bool> leq_;
    std::vector<std::vector<std::size_t>> up_;
    std::vector<std::pair<std::size_t, std::size_t>> covers_;
    std::size_t one_block_ = 0;
    std::size_t discrete_ = 0;
};

std::size_t bell_number(std::size_t k);

/// A concrete coarse-graining B = f(A) -> A given by the values f takes on
/// sigma(A). The partition forgets the labels; the target index of an
/// eigenvalue is the rank of its value in sigma(B).
class CoarseGraining {
public:
    static CoarseGraining from_values(ValueMap values, double eps = Tolerances {}.group);
    /// Labels each block by its ordinal.
    static CoarseGraining from_partition(const Partition& p);
    static CoarseGraining identity(std::size_t k);

    std::size_t source_size() const { return values_.size(); }
    std::size_t target_size() const { return target_values_.size(); }
    const ValueMap& values() const { return values_; }
    const std::vector<double>& target_values() const { return target_values_; }
    std::size_t target_index(std::size_t i) const { return target_index_.at(i); }
    const Partition& partition() const { return partition_; }

private:
    CoarseGraining() = default;
    ValueMap values_;
    std::vector<double> target_values_;
    std::vector<std::size_t> target_index_;
    Partition partition_ = Partition::discrete(0);
};

/// f o g for f: B -> A and g: C -> B (g's source is f's target).
CoarseGraining compose(const CoarseGraining& f, const CoarseGraining& g);

/// The partition of f's source obtained by pulling back a partition of f's
/// target: i ~ j iff their images lie in the same block of rho.
Partition composite_partition(const CoarseGraining& f, const Partition& rho);

} // namespace qsieve
