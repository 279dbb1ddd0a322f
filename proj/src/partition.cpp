#include "qsieve/partition.hpp"

#include "qsieve/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace qsieve {

Partition Partition::from_labels(std::span<const std::size_t> labels)
{
    Partition p;
    std::map<std::size_t, std::size_t> renumber;
    p.block_of_.reserve(labels.size());
    for (auto label : labels) {
        auto [it, inserted] = renumber.try_emplace(label, renumber.size());
        if (inserted) {
            p.blocks_.emplace_back();
        }
        p.blocks_[it->second].push_back(p.block_of_.size());
        p.block_of_.push_back(it->second);
    }
    return p;
}

Partition Partition::from_blocks(std::vector<Block> blocks, std::size_t k)
{
    std::vector<std::size_t> labels(k, k);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) {
            throw Error(ErrorKind::InvalidArgument, "partition has an empty block");
        }
        for (auto i : blocks[b]) {
            if (i >= k) {
                throw Error(ErrorKind::InvalidArgument, "partition element " + std::to_string(i) + " out of range");
            }
            if (labels[i] != k) {
                throw Error(ErrorKind::InvalidArgument, "element " + std::to_string(i) + " appears in two blocks");
            }
            labels[i] = b;
        }
    }
    if (std::find(labels.begin(), labels.end(), k) != labels.end()) {
        throw Error(ErrorKind::InvalidArgument, "partition does not cover every element");
    }
    return from_labels(labels);
}

Partition Partition::discrete(std::size_t k)
{
    std::vector<std::size_t> labels(k);
    for (std::size_t i = 0; i < k; ++i) {
        labels[i] = i;
    }
    return from_labels(labels);
}

Partition Partition::one_block(std::size_t k)
{
    std::vector<std::size_t> labels(k, 0);
    return from_labels(labels);
}

Partition Partition::from_values(const ValueMap& values, double eps)
{
    return from_labels(cluster_values(values, eps).cluster_of);
}

bool Partition::refines(const Partition& other) const
{
    if (size() != other.size()) {
        throw Error(ErrorKind::BaseMismatch, "partitions of different sets");
    }
    for (const auto& block : blocks_) {
        const auto target = other.block_of_[block.front()];
        for (auto i : block) {
            if (other.block_of_[i] != target) {
                return false;
            }
        }
    }
    return true;
}

std::string Partition::to_string() const
{
    std::string out = "{";
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        out += b ? ",{" : "{";
        for (std::size_t j = 0; j < blocks_[b].size(); ++j) {
            out += (j ? "," : "") + std::to_string(blocks_[b][j]);
        }
        out += "}";
    }
    return out + "}";
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b)
{
    if (auto c = a.size() <=> b.size(); c != 0) {
        return c;
    }
    return a.blocks_ <=> b.blocks_;
}

// ---------------------------------------------------------------- lattice

namespace {

void enumerate_rgs(std::size_t k, std::vector<std::size_t>& labels, std::size_t max_label,
                   std::vector<Partition>& out)
{
    if (labels.size() == k) {
        out.push_back(Partition::from_labels(labels));
        return;
    }
    const std::size_t limit = labels.empty() ? 0 : max_label + 1;
    for (std::size_t l = 0; l <= limit; ++l) {
        labels.push_back(l);
        enumerate_rgs(k, labels, std::max(max_label, l), out);
        labels.pop_back();
    }
}

} // namespace

PartitionLattice::PartitionLattice(std::size_t k) : k_(k)
{
    if (k > max_k) {
        throw Error(ErrorKind::TooLarge, "partition lattices are limited to spectra of size " + std::to_string(max_k));
    }
    std::vector<std::size_t> labels;
    enumerate_rgs(k, labels, 0, partitions_);
    std::sort(partitions_.begin(), partitions_.end());

    const auto n = partitions_.size();
    leq_.assign(n * n, false);
    up_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (partitions_[i].refines(partitions_[j])) {
                leq_[i * n + j] = true;
                up_[i].push_back(j);
                if (partitions_[j].block_count() + 1 == partitions_[i].block_count()) {
                    covers_.emplace_back(i, j);
                }
            }
        }
        if (partitions_[i].is_one_block()) {
            one_block_ = i;
        }
        if (partitions_[i].is_discrete()) {
            discrete_ = i;
        }
    }
}

std::shared_ptr<const PartitionLattice> PartitionLattice::of(std::size_t k)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const PartitionLattice>> cache;
    if (k > max_k) {
        throw Error(ErrorKind::TooLarge, "partition lattices are limited to spectra of size " + std::to_string(max_k));
    }
    std::lock_guard lock(mutex);
    auto& slot = cache[k];
    if (!slot) {
        slot = std::make_shared<const PartitionLattice>(k);
    }
    return slot;
}

std::size_t PartitionLattice::index_of(const Partition& p) const
{
    if (p.size() != k_) {
        throw Error(ErrorKind::BaseMismatch, "partition of " + std::to_string(p.size()) + " elements in lattice of " +
                                                 std::to_string(k_));
    }
    auto it = std::lower_bound(partitions_.begin(), partitions_.end(), p);
    return static_cast<std::size_t>(it - partitions_.begin());
}

std::size_t bell_number(std::size_t k)
{
    // Bell triangle.
    std::vector<std::size_t> row {1};
    for (std::size_t n = 0; n < k; ++n) {
        std::vector<std::size_t> next {row.back()};
        for (auto v : row) {
            next.push_back(next.back() + v);
        }
        row = std::move(next);
    }
    return row.front();
}

// ---------------------------------------------------------------- coarse-graining

CoarseGraining CoarseGraining::from_values(ValueMap values, double eps)
{
    auto clusters = cluster_values(values, eps);
    CoarseGraining f;
    f.values_ = std::move(values);
    f.target_values_ = std::move(clusters.values);
    f.target_index_ = std::move(clusters.cluster_of);
    f.partition_ = Partition::from_labels(f.target_index_);
    return f;
}

CoarseGraining CoarseGraining::from_partition(const Partition& p)
{
    ValueMap values(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        values[i] = static_cast<double>(p.block_of(i));
    }
    return from_values(std::move(values));
}

CoarseGraining CoarseGraining::identity(std::size_t k)
{
    return from_partition(Partition::discrete(k));
}

CoarseGraining compose(const CoarseGraining& f, const CoarseGraining& g)
{
    if (g.source_size() != f.target_size()) {
        throw Error(ErrorKind::BaseMismatch, "coarse-grainings are not composable");
    }
    ValueMap values(f.source_size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = g.values()[f.target_index(i)];
    }
    return CoarseGraining::from_values(std::move(values));
}

Partition composite_partition(const CoarseGraining& f, const Partition& rho)
{
    if (rho.size() != f.target_size()) {
        throw Error(ErrorKind::BaseMismatch, "partition is not on the coarse-graining's target spectrum");
    }
    std::vector<std::size_t> labels(f.source_size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = rho.block_of(f.target_index(i));
    }
    return Partition::from_labels(labels);
}

} // namespace qsieve
