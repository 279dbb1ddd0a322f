#include "oracles.hpp"
#include "support.hpp"

#include "qsieve/boolean_contexts.hpp"
#include "qsieve/categories.hpp"
#include "qsieve/errors.hpp"
#include "qsieve/io.hpp"
#include "qsieve/ks_search.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qsieve;

namespace {

BooleanContext basis_context(const ComplexMatrix& u)
{
    std::vector<ComplexMatrix> atoms;
    for (Eigen::Index i = 0; i < u.cols(); ++i) {
        atoms.push_back(ray_projector(u.col(i)));
    }
    return BooleanContext::from_atoms(atoms);
}

ErrorKind kind_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
}

} // namespace

TEST_CASE("fingerprints ignore rounding noise")
{
    testing::Rng rng(2);
    const auto p = rng.projector(3, 1);
    ComplexMatrix noisy = p;
    noisy(0, 1) += 1e-12;
    CHECK(fingerprint(p) == fingerprint(noisy));
    CHECK(fingerprint(p).hash == fingerprint(noisy).hash);
    CHECK_FALSE(fingerprint(p) == fingerprint(ComplexMatrix(ComplexMatrix::Identity(3, 3) - p)));
    CHECK(kind_of([] { ray_projector(ComplexVector::Zero(2)); }) == ErrorKind::ZeroNorm);
}

TEST_CASE("a single context is always colorable")
{
    testing::Rng rng(6);
    const auto fam = ContextFamily::from_contexts({basis_context(rng.unitary(3))});
    CHECK(fam.shared().empty());
    const auto w = search_dual_section(fam);
    REQUIRE(w.has_value());
    CHECK(w->chosen == std::vector<std::size_t> {0});
    CHECK(verify_dual_section(fam, *w).ok());
    CHECK(kind_of([&] { minimal_uncolorable_subfamily(fam); }) == ErrorKind::StillColorable);
}

TEST_CASE("mixed dimensions are rejected")
{
    testing::Rng rng(7);
    CHECK(kind_of([&] {
              ContextFamily::from_contexts({basis_context(rng.unitary(2)), basis_context(rng.unitary(3))});
          }) == ErrorKind::InvalidArgument);
}

TEST_CASE("qubit families are colorable")
{
    const auto fam = load_contexts(testing::data_path("qubit_contexts.json"));
    const auto w = search_dual_section(fam);
    REQUIRE(w.has_value());
    CHECK(verify_dual_section(fam, *w).ok());

    testing::Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BooleanContext> ctxs;
        const auto n = rng.between(1, 5);
        const auto shared = rng.unitary(2);
        for (std::size_t i = 0; i < n; ++i) {
            // Reuse a basis now and then so that projectors get shared.
            ctxs.push_back(basis_context(rng.coin() ? shared : rng.unitary(2)));
        }
        const auto f = ContextFamily::from_contexts(ctxs);
        const auto wit = search_dual_section(f);
        REQUIRE(wit.has_value());
        CHECK(verify_dual_section(f, *wit).ok());
        CHECK(oracle::exhaustive_coloring(ctxs).has_value());
    }
}

TEST_CASE("a tampered witness is rejected")
{
    testing::Rng rng(13);
    const auto u = rng.unitary(3);
    const auto fam = ContextFamily::from_contexts({basis_context(u), basis_context(u)});
    CHECK(fam.shared().size() == 6);
    auto w = search_dual_section(fam);
    REQUIRE(w.has_value());
    CHECK(w->chosen[0] == w->chosen[1]);
    w->chosen[1] = (w->chosen[0] + 1) % 3;
    CHECK_FALSE(verify_dual_section(fam, *w).ok());
}

TEST_CASE("the 18-ray family in dimension four has no section")
{
    const auto fam = load_contexts(testing::data_path("ks18_dim4.json"));
    REQUIRE(fam.size() == 9);
    CHECK(fam.dim() == 4);
    // Every ray sits in exactly two bases.
    std::size_t rays = 0;
    for (const auto& sp : fam.shared()) {
        if (sp.occurrences.size() == 2 && std::popcount(sp.occurrences[0].second) == 1) {
            ++rays;
        }
    }
    CHECK(rays == 18);
    CHECK_FALSE(search_dual_section(fam).has_value());
    CHECK_FALSE(oracle::exhaustive_coloring(fam.contexts()).has_value());

    const auto minimal = minimal_uncolorable_subfamily(fam);
    CHECK(minimal.size() == 9);
    // Every proper subfamily is colorable.
    for (std::size_t drop = 0; drop < fam.size(); ++drop) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (i != drop) {
                keep.push_back(i);
            }
        }
        const auto sub = fam.subfamily(keep);
        const auto w = search_dual_section(sub);
        REQUIRE(w.has_value());
        CHECK(verify_dual_section(sub, *w).ok());
    }
}

TEST_CASE("redundant contexts are stripped by minimisation")
{
    testing::Rng rng(15);
    const auto fam = load_contexts(testing::data_path("ks18_dim4.json"));
    auto ctxs = fam.contexts();
    auto names = fam.names();
    ctxs.insert(ctxs.begin() + 3, basis_context(rng.unitary(4)));
    names.insert(names.begin() + 3, "extra");
    const auto bigger = ContextFamily::from_contexts(ctxs, names);
    const auto minimal = minimal_uncolorable_subfamily(bigger);
    CHECK(minimal.size() == 9);
    CHECK(std::find(minimal.names().begin(), minimal.names().end(), "extra") == minimal.names().end());
}

TEST_CASE("colorability does not depend on context order")
{
    testing::Rng rng(19);
    const auto fam = load_contexts(testing::data_path("ks18_dim4.json"));
    auto ctxs = fam.contexts();
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(ctxs.begin(), ctxs.end(), rng.engine());
        CHECK_FALSE(search_dual_section(ContextFamily::from_contexts(ctxs)).has_value());
    }
    // Dropping one basis and shuffling stays colorable.
    ctxs.pop_back();
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(ctxs.begin(), ctxs.end(), rng.engine());
        const auto f = ContextFamily::from_contexts(ctxs);
        const auto w = search_dual_section(f);
        REQUIRE(w.has_value());
        CHECK(verify_dual_section(f, *w).ok());
    }
}

TEST_CASE("families of nested subalgebras are colorable")
{
    testing::Rng rng(24);
    const auto top = spectral_algebra(rng.operator_with(4, 4));
    const SubalgebraPoset poset(top);
    std::vector<BooleanContext> ctxs;
    for (std::size_t w = 0; w < poset.size(); ++w) {
        ctxs.push_back(poset.context(w));
    }
    const auto fam = ContextFamily::from_contexts(ctxs);
    const auto w = search_dual_section(fam);
    REQUIRE(w.has_value());
    CHECK(verify_dual_section(fam, *w).ok());
}

TEST_CASE("sections give consistent partial valuations")
{
    const auto fam = load_contexts(testing::data_path("qubit_contexts.json"));
    const auto w = search_dual_section(fam);
    REQUIRE(w.has_value());
    const auto pv = section_to_partial_valuation(*w, fam);
    REQUIRE(pv.assignments().size() == fam.size());
    const auto nu = GeneralizedValuation::from_partial(pv, SieveMode::WithConstants);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto op = context_operator(fam.context(i));
        CHECK(op.spectrum_size() == fam.context(i).atom_count());
        CHECK(*pv.value_of(op) == doctest::Approx(static_cast<double>(w->chosen[i] + 1)));
        const auto chosen = Proposition::make(op, IndexSet::singleton(w->chosen[i]));
        CHECK(classify(evaluate(nu, chosen)) == Classification::TotallyTrue);
    }

    // Two bases sharing one ray in dimension three.
    testing::Rng rng(27);
    const auto u = rng.unitary(3);
    ComplexMatrix v = u;
    v.col(1) = (u.col(1) + u.col(2)) / std::sqrt(2.0);
    v.col(2) = (u.col(1) - u.col(2)) / std::sqrt(2.0);
    const auto chain = ContextFamily::from_contexts({basis_context(u), basis_context(v)});
    const auto cw = search_dual_section(chain);
    REQUIRE(cw.has_value());
    CHECK(verify_dual_section(chain, *cw).ok());
    CHECK_NOTHROW(section_to_partial_valuation(*cw, chain));
}
