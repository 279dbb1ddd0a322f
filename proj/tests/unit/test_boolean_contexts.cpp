#include "support.hpp"

#include "qsieve/boolean_contexts.hpp"
#include "qsieve/categories.hpp"
#include "qsieve/errors.hpp"
#include "qsieve/io.hpp"

#include <doctest.h>

using namespace qsieve;

namespace {

constexpr auto O = SieveMode::WithConstants;
constexpr auto Ostar = SieveMode::WithoutConstants;

BooleanContext diagonal_top(std::size_t n)
{
    std::vector<ComplexMatrix> atoms;
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        p(i, i) = 1.0;
        atoms.push_back(p);
    }
    return BooleanContext::from_atoms(atoms);
}

BooleanContext random_top(testing::Rng& rng, std::size_t dim, std::size_t atoms)
{
    return spectral_algebra(rng.operator_with(dim, atoms));
}

std::size_t node_for(const SubalgebraPoset& poset, const Partition& p)
{
    for (std::size_t i = 0; i < poset.size(); ++i) {
        if (poset.node(i) == p) {
            return i;
        }
    }
    FAIL("node not found");
    return 0;
}

// Smallest element of w2 dominating alpha, by matrix comparison only.
ElementMask brute_theta(const SubalgebraPoset& poset, std::size_t w2, ElementMask alpha)
{
    const ComplexMatrix a = poset.matrix(alpha);
    std::optional<ElementMask> best;
    for (auto e : poset.elements(w2)) {
        const ComplexMatrix m = poset.matrix(e);
        if (!approx_equal(m * a, a, 1e-9)) {
            continue;
        }
        if (!best || approx_equal(m * poset.matrix(*best), m, 1e-9)) {
            best = e;
        }
    }
    REQUIRE(best.has_value());
    return *best;
}

struct SpinOne {
    SystemFile sys = load_system(testing::data_path("spin_one.json"));
    BooleanContext top = spectral_algebra(sys.op("Sx").op);
    const QuantumState& psi = sys.state("psi").state;
};

} // namespace

TEST_CASE("subalgebra poset sizes")
{
    CHECK(SubalgebraPoset(diagonal_top(1)).size() == 1);
    CHECK(SubalgebraPoset(diagonal_top(3)).size() == 5);
    CHECK(SubalgebraPoset(diagonal_top(3), Ostar).size() == 4);
    CHECK(SubalgebraPoset(diagonal_top(4)).size() == 15);
    CHECK(SubalgebraPoset(diagonal_top(5)).size() == 52);
    CHECK_THROWS_AS(SubalgebraPoset(diagonal_top(1), Ostar), Error);

    const SubalgebraPoset p(diagonal_top(3));
    REQUIRE(p.trivial_index().has_value());
    CHECK(p.elements(*p.trivial_index()) == std::vector<ElementMask> {0, 0b111});
    CHECK(p.elements(p.top_index()).size() == 8);
    for (std::size_t w = 0; w < p.size(); ++w) {
        CHECK(p.includes(w, p.top_index()));
        CHECK(p.includes(*p.trivial_index(), w));
        CHECK(p.node_of(p.context(w)) == std::optional<std::size_t> {w});
    }
}

TEST_CASE("canonical coarse-graining on spin-1")
{
    SpinOne s;
    const SubalgebraPoset poset(s.top);
    const auto sq = node_for(poset, Partition::from_blocks({{0, 2}, {1}}, 3));
    // P_{+1} goes to P_{-1} + P_{+1}.
    CHECK(canonical_theta(poset, poset.top_index(), sq, 0b100) == 0b101);
    CHECK(canonical_theta(poset, poset.top_index(), sq, 0b010) == 0b010);
    CHECK(canonical_theta(poset, poset.top_index(), *poset.trivial_index(), 0b010) == 0b111);
    CHECK(canonical_theta(poset, poset.top_index(), *poset.trivial_index(), 0) == 0);
    CHECK_THROWS_AS(canonical_theta(poset, sq, poset.top_index(), 0b010), Error);

    // The free-standing version speaks in atoms of each context.
    const auto w2 = spectral_algebra(apply_function(s.sys.op("Sx").op, {1.0, 0.0, 1.0}));
    CHECK(canonical_theta(s.top, w2, 0b100) == 0b10);

    for (std::size_t w1 = 0; w1 < poset.size(); ++w1) {
        for (auto w : poset.below(w1)) {
            for (auto alpha : poset.elements(w1)) {
                CHECK(canonical_theta(poset, w1, w, alpha) == brute_theta(poset, w, alpha));
            }
        }
    }
}

TEST_CASE("coarse-graining axioms hold exhaustively")
{
    testing::Rng rng(17);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u}) {
        const SubalgebraPoset poset(random_top(rng, n, n));
        const auto r = check_cg_axioms(poset);
        CHECK(r.ok());
        CHECK(r.checked > 0);
    }
    // A non-monotone, non-dominating candidate is caught.
    const SubalgebraPoset poset(diagonal_top(3));
    const Theta bad = [](std::size_t, std::size_t, ElementMask a) { return static_cast<ElementMask>(a ^ 0b111); };
    const auto r = check_cg_axioms(poset, bad);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.coarse_graining_ok);
    CHECK_FALSE(r.violations.empty());
}

TEST_CASE("W sieves")
{
    const SubalgebraPoset poset(diagonal_top(3));
    const auto top = poset.top_index();
    const auto triv = *poset.trivial_index();
    CHECK(WSieve::principal(poset, top).size() == 5);
    CHECK_THROWS_AS(WSieve::from_members(poset, top, {top}), Error);
    const auto s = WSieve::from_members(poset, top, {triv});
    CHECK(s.contains(triv));
    CHECK_FALSE(s.contains(top));
    CHECK(s.restrict_to(poset, triv) == WSieve::principal(poset, triv));
    CHECK(WSieve::empty(top).restrict_to(poset, triv).size() == 0);
}

TEST_CASE("W valuation of the spin-1 state")
{
    SpinOne s;
    const SubalgebraPoset poset(s.top);
    const auto sq = node_for(poset, Partition::from_blocks({{0, 2}, {1}}, 3));
    const auto v = evaluate_w(s.psi, poset, poset.top_index(), 0b100);
    std::vector<std::size_t> expected {sq, *poset.trivial_index()};
    std::sort(expected.begin(), expected.end());
    CHECK(v.members() == expected);

    const SubalgebraPoset star(s.top, Ostar);
    const auto sq_star = node_for(star, Partition::from_blocks({{0, 2}, {1}}, 3));
    CHECK(evaluate_w(s.psi, star, star.top_index(), 0b100).members() == std::vector<std::size_t> {sq_star});
}

TEST_CASE("local valuations")
{
    testing::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = rng.between(2, 4);
        const SubalgebraPoset poset(random_top(rng, n, n));
        const auto rho = QuantumState::density(rng.density(n));
        for (std::size_t w = 0; w < poset.size(); ++w) {
            const auto phi = local_valuation(rho, poset, w);
            const auto r = check_local_valuation(poset, phi);
            CHECK(r.mandatory_ok());
            CHECK(r.unit_ok);
        }
    }

    const SubalgebraPoset poset(diagonal_top(3));
    const auto top = poset.top_index();
    LocalValuation never {top, {}};
    for (auto e : poset.elements(top)) {
        never.values.emplace(e, WSieve::empty(top));
    }
    const auto rn = check_local_valuation(poset, never);
    CHECK(rn.mandatory_ok());
    CHECK_FALSE(rn.unit_ok);

    auto broken = local_valuation(QuantumState::density(ComplexMatrix::Identity(3, 3) / 3.0), poset, top);
    broken.values.at(0) = WSieve::principal(poset, top);
    const auto rb = check_local_valuation(poset, broken);
    CHECK_FALSE(rb.null_ok);
    CHECK_FALSE(rb.violations.empty());

    LocalValuation partial {top, {}};
    partial.values.emplace(0, WSieve::empty(top));
    CHECK_FALSE(check_local_valuation(poset, partial).total_ok);
}

TEST_CASE("state valuations form a matching family")
{
    testing::Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = rng.between(1, 4);
        const SubalgebraPoset poset(random_top(rng, n, n), rng.coin() || n == 1 ? O : Ostar);
        const auto rho = QuantumState::density(rng.density(n));
        const auto r = check_w_matching(rho, poset);
        CHECK(r.ok());
        for (std::size_t w = 0; w < poset.size(); ++w) {
            const auto phi = local_valuation(rho, poset, w);
            for (auto w2 : poset.below(w)) {
                const auto res = restrict_local_valuation(poset, phi, w2);
                CHECK(res.values == local_valuation(rho, poset, w2).values);
            }
        }
    }

    SpinOne s;
    const SubalgebraPoset poset(s.top);
    std::map<std::size_t, LocalValuation> family;
    for (std::size_t w = 0; w < poset.size(); ++w) {
        family.emplace(w, local_valuation(s.psi, poset, w));
    }
    CHECK(check_matching_family(poset, family, canonical_theta_of(poset)).ok());
    // Forget one stage of one value at the top.
    auto& v = family.at(poset.top_index()).values.at(0b100);
    v = WSieve::empty(poset.top_index());
    CHECK_FALSE(check_matching_family(poset, family, canonical_theta_of(poset)).ok());
}
