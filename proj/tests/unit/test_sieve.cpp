#include "oracles.hpp"
#include "support.hpp"

#include "qsieve/errors.hpp"
#include "qsieve/sieve.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qsieve;

namespace {

Partition blocks(std::vector<Partition::Block> b, std::size_t k)
{
    return Partition::from_blocks(std::move(b), k);
}

Sieve from_mask(std::size_t k, SieveMode mode, std::uint64_t mask)
{
    return Sieve::from_predicate(k, mode, [&](std::size_t i) { return ((mask >> i) & 1u) != 0; });
}

} // namespace

TEST_CASE("partitions are canonical")
{
    const std::vector<std::size_t> labels {7, 3, 7, 3};
    const auto p = Partition::from_labels(labels);
    CHECK(p.labels() == std::vector<std::size_t> {0, 1, 0, 1});
    CHECK(p.to_string() == "{{0,2},{1,3}}");
    CHECK(p == blocks({{1, 3}, {2, 0}}, 4));
    CHECK(Partition::discrete(4).refines(p));
    CHECK(p.refines(Partition::one_block(4)));
    CHECK_FALSE(Partition::one_block(4).refines(p));
    CHECK_THROWS_AS(blocks({{0, 1}, {1, 2}}, 3), Error);
    CHECK_THROWS_AS(blocks({{0}, {2}}, 3), Error);

    const auto v = Partition::from_values({2.0, -1.0, 2.0 + 1e-12}, 1e-8);
    CHECK(v.to_string() == "{{0,2},{1}}");
}

TEST_CASE("lattice sizes are Bell numbers")
{
    // Bell numbers from the recurrence B(n+1) = sum C(n,i) B(i).
    std::vector<std::size_t> bell {1};
    for (std::size_t n = 0; n < 7; ++n) {
        std::size_t next = 0;
        std::size_t binom = 1;
        for (std::size_t i = 0; i <= n; ++i) {
            next += binom * bell[i];
            binom = binom * (n - i) / (i + 1);
        }
        bell.push_back(next);
    }
    for (std::size_t k = 1; k <= 7; ++k) {
        CHECK(PartitionLattice::of(k)->size() == bell[k]);
        CHECK(bell_number(k) == bell[k]);
    }
    CHECK_THROWS_AS(PartitionLattice::of(8), Error);
}

TEST_CASE("lattice order agrees with label refinement")
{
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto l = PartitionLattice::of(k);
        for (std::size_t i = 0; i < l->size(); ++i) {
            for (std::size_t j = 0; j < l->size(); ++j) {
                CHECK(l->coarsens(i, j) == oracle::refines(l->at(i), l->at(j)));
            }
        }
        for (const auto& [lo, hi] : l->covers()) {
            CHECK(l->at(lo).block_count() == l->at(hi).block_count() + 1);
            CHECK(l->coarsens(lo, hi));
        }
        CHECK(l->at(l->one_block_index()).is_one_block());
        CHECK(l->at(l->discrete_index()).is_discrete());
    }
}

TEST_CASE("sieve construction")
{
    const auto pair = blocks({{0, 2}, {1}}, 3);
    const auto s = Sieve::up_closure(3, SieveMode::WithConstants, std::vector {pair});
    CHECK(s.size() == 2);
    CHECK(s.contains(Partition::one_block(3)));
    CHECK(to_string(classify(s)) == "Intermediate");

    const auto star = Sieve::up_closure(3, SieveMode::WithoutConstants, std::vector {pair});
    CHECK(star.size() == 1);

    CHECK_THROWS_AS(Sieve::from_partitions(3, SieveMode::WithConstants, std::vector {pair}), Error);
    CHECK_THROWS_AS(Sieve::from_partitions(3, SieveMode::WithoutConstants, std::vector {Partition::one_block(3)}),
                    Error);
    CHECK(Sieve::principal(3, SieveMode::WithConstants).size() == 5);
    CHECK(Sieve::principal(3, SieveMode::WithoutConstants).size() == 4);
    CHECK_THROWS_AS(s.leq(star), Error);
}

TEST_CASE("classification")
{
    using M = SieveMode;
    CHECK(classify(Sieve::empty(3, M::WithConstants)) == Classification::TotallyFalse);
    CHECK(classify(Sieve::principal(3, M::WithConstants)) == Classification::TotallyTrue);
    CHECK(classify(Sieve::up_closure(3, M::WithConstants, std::vector {Partition::one_block(3)})) ==
          Classification::MinimallyTrue);
    // The only stage of a constant operator is the constant itself; without
    // constants there is nothing to be true at.
    CHECK(classify(Sieve::principal(1, M::WithoutConstants)) == Classification::TotallyFalse);
    CHECK(classify(Sieve::principal(1, M::WithConstants)) == Classification::TotallyTrue);
}

TEST_CASE("Heyting operations agree with brute force at k = 3")
{
    for (auto mode : {SieveMode::WithConstants, SieveMode::WithoutConstants}) {
        const auto ups = oracle::all_up_sets(3, mode);
        CHECK(ups.size() == (mode == SieveMode::WithConstants ? 10u : 9u));
        for (auto a : ups) {
            const auto sa = from_mask(3, mode, a);
            CHECK(oracle::mask_of(heyting_neg(sa)) == oracle::implication(ups, a, 0));
            for (auto b : ups) {
                const auto sb = from_mask(3, mode, b);
                CHECK(oracle::mask_of(heyting_meet(sa, sb)) == (a & b));
                CHECK(oracle::mask_of(heyting_join(sa, sb)) == (a | b));
                CHECK(oracle::mask_of(heyting_implies(sa, sb)) == oracle::implication(ups, a, b));
            }
        }
    }
}

TEST_CASE("excluded middle fails in general")
{
    const auto s = Sieve::up_closure(3, SieveMode::WithConstants, std::vector {blocks({{0, 2}, {1}}, 3)});
    const auto lem = heyting_join(s, heyting_neg(s));
    CHECK(lem.leq(Sieve::principal(3, SieveMode::WithConstants)));
    CHECK_FALSE(lem == Sieve::principal(3, SieveMode::WithConstants));
    CHECK(s.leq(heyting_neg(heyting_neg(s))));
}

TEST_CASE("pullback is functorial")
{
    testing::Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const auto k = rng.between(1, 5);
        const auto mode = rng.coin() ? SieveMode::WithConstants : SieveMode::WithoutConstants;
        const auto lattice = PartitionLattice::of(k);
        std::vector<Partition> seed {lattice->at(rng.index(lattice->size()))};
        const auto s = Sieve::up_closure(k, mode, seed);
        CHECK(pullback(s, CoarseGraining::identity(k)) == s);

        const auto f = CoarseGraining::from_values(rng.value_map(k));
        const auto g = CoarseGraining::from_values(rng.value_map(f.target_size()));
        CHECK(pullback(pullback(s, f), g) == pullback(s, compose(f, g)));
    }
}

TEST_CASE("pullback of the spin-1 squaring map")
{
    // Pulling the pair sieve on S_x back along lambda -> lambda^2 gives true
    // on S_x^2.
    const auto s = Sieve::up_closure(3, SieveMode::WithConstants, std::vector {blocks({{0, 2}, {1}}, 3)});
    const auto sq = CoarseGraining::from_values({1.0, 0.0, 1.0});
    CHECK(pullback(s, sq) == Sieve::principal(2, SieveMode::WithConstants));
}

TEST_CASE("DOT export")
{
    const auto dot = partition_lattice_dot(3, nullptr, {"-1", "0", "1"});
    CHECK(std::count(dot.begin(), dot.end(), '\n') == 3 + 5 + 6 + 1);
    CHECK(dot.find("{{-1,1},{0}}") != std::string::npos);
    const auto s = Sieve::up_closure(3, SieveMode::WithConstants, std::vector {blocks({{0, 2}, {1}}, 3)});
    const auto lit = partition_lattice_dot(3, &s);
    std::size_t filled = 0;
    for (auto pos = lit.find("filled"); pos != std::string::npos; pos = lit.find("filled", pos + 1)) {
        ++filled;
    }
    CHECK(filled == 2);
    CHECK(partition_lattice_dot(1).find("p0") != std::string::npos);
}
