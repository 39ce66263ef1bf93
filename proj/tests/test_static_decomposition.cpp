#include <doctest.h>

#include "lqsynth/static_decomposition.hpp"

#include "support/test_utils.hpp"

#include <algorithm>

using namespace lqsynth;
using namespace lqsynth::testing;

namespace {

cmat squeeze_full(const rvec& x) {
    const index_t m = x.size();
    cmat full = cmat::Zero(2 * m, 2 * m);
    for (index_t i = 0; i < m; ++i) {
        full(i, i) = std::cosh(x(i));
        full(i, m + i) = std::sinh(x(i));
        full(m + i, i) = std::sinh(x(i));
        full(m + i, m + i) = std::cosh(x(i));
    }
    return full;
}

doubled_matrix build_bogoliubov(const cmat& u2, const rvec& x, const cmat& u1) {
    const cmat full = doubled_matrix(u2, cmat::Zero(u2.rows(), u2.cols())).full() *
                      squeeze_full(x) *
                      doubled_matrix(u1, cmat::Zero(u1.rows(), u1.cols())).full();
    return doubled_matrix::from_full(full, 1e-10);
}

}  // namespace

TEST_CASE("elementary device matrices have the advertised structure") {
    CHECK(std::abs(phase_matrix(0.7)(0, 0) - std::polar(1.0, 0.7)) < 1e-15);

    const cmat bs = beam_splitter_matrix(0.6, 0.3, -0.4, 0.2);
    CHECK(max_abs(bs.adjoint() * bs - cmat::Identity(2, 2)) < 1e-14);
    CHECK(std::abs(bs(0, 0)) == doctest::Approx(std::cos(0.3)));
    CHECK(std::abs(bs(0, 1)) == doctest::Approx(std::sin(0.3)));

    const cmat sq = squeezer_matrix(0.5, 0.2, -0.1);
    CHECK(is_bogoliubov(sq, 1e-12));
    CHECK(std::abs(sq(0, 0)) == doctest::Approx(std::cosh(0.5)));
    CHECK(std::abs(sq(0, 1)) == doctest::Approx(std::sinh(0.5)));

    static_element e;
    e.kind = static_element::op::beam_split;
    e.theta = 0.6;
    e.phi = 0.3;
    e.psi = -0.4;
    e.zeta = 0.2;
    CHECK(max_abs(elementary_matrix(e) - bs) == 0.0);
}

TEST_CASE("reck_decompose rebuilds random unitaries from at most m(m-1)/2 splitters") {
    auto rng = make_rng(401);
    for (index_t m = 1; m <= 6; ++m) {
        const cmat u = random_unitary(rng, m);
        const static_decomposition dec = reck_decompose(u);
        CHECK(dec.passive);
        CHECK(dec.n_channels == m);
        index_t n_bs = 0;
        for (const static_element& e : dec.elements) {
            CHECK(e.kind != static_element::op::squeeze);
            if (e.kind == static_element::op::beam_split) ++n_bs;
        }
        CHECK(n_bs <= m * (m - 1) / 2);
        CHECK(max_abs(remultiply(dec) - u) < 1e-8);
    }
}

TEST_CASE("reck_decompose of a diagonal unitary needs no beam splitters") {
    cmat d = cmat::Zero(3, 3);
    d(0, 0) = std::polar(1.0, 0.3);
    d(1, 1) = std::polar(1.0, -1.2);
    d(2, 2) = 1.0;
    const static_decomposition dec = reck_decompose(d);
    for (const static_element& e : dec.elements)
        CHECK(e.kind == static_element::op::phase_shift);
    CHECK(max_abs(remultiply(dec) - d) < 1e-12);
}

TEST_CASE("reck_decompose rejects non-unitary input") {
    cmat a = cmat::Identity(2, 2) * 2.0;
    CHECK_THROWS_AS(reck_decompose(a), structure_error);
}

TEST_CASE("bloch_messiah recovers the squeezing multiset on built inputs") {
    auto rng = make_rng(409);
    for (int trial = 0; trial < 20; ++trial) {
        const index_t m = 2 + static_cast<index_t>(trial % 3);
        rvec x(m);
        for (index_t i = 0; i < m; ++i) x(i) = (trial + i) % 3 == 0 ? 0.0 : 0.2 + 0.3 * ((i + trial) % 4);
        const doubled_matrix r = build_bogoliubov(random_unitary(rng, m), x, random_unitary(rng, m));

        const bloch_messiah_factors f = bloch_messiah(r);
        std::vector<double> got(f.x.data(), f.x.data() + f.x.size());
        std::vector<double> want(x.data(), x.data() + x.size());
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);

        const cmat rec = doubled_matrix(f.u2, cmat::Zero(m, m)).full() * squeeze_full(f.x) *
                         doubled_matrix(f.u1, cmat::Zero(m, m)).full();
        CHECK(max_abs(rec - r.full()) < 1e-8 * std::max(1.0, max_abs(r.full())));
        CHECK(max_abs(f.u1.adjoint() * f.u1 - cmat::Identity(m, m)) < 1e-10);
        CHECK(max_abs(f.u2.adjoint() * f.u2 - cmat::Identity(m, m)) < 1e-10);
    }
}

TEST_CASE("bloch_messiah handles repeated squeezing values") {
    auto rng = make_rng(419);
    rvec x(3);
    x << 0.7, 0.7, 0.7;
    const doubled_matrix r = build_bogoliubov(random_unitary(rng, 3), x, random_unitary(rng, 3));
    const bloch_messiah_factors f = bloch_messiah(r);
    for (index_t i = 0; i < 3; ++i) CHECK(f.x(i) == doctest::Approx(0.7).epsilon(1e-8));
    const cmat rec = doubled_matrix(f.u2, cmat::Zero(3, 3)).full() * squeeze_full(f.x) *
                     doubled_matrix(f.u1, cmat::Zero(3, 3)).full();
    CHECK(max_abs(rec - r.full()) < 1e-7);
}

TEST_CASE("bloch_messiah canonicalizes unitary input to u2 only") {
    auto rng = make_rng(421);
    const cmat u = random_unitary(rng, 3);
    const doubled_matrix r(u, cmat::Zero(3, 3));
    const bloch_messiah_factors f = bloch_messiah(r);
    CHECK(max_abs(f.x) < 1e-10);
    CHECK(max_abs(f.u1 - cmat::Identity(3, 3)) < 1e-12);
    CHECK(max_abs(f.u2 - u) < 1e-8);
}

TEST_CASE("decompose_static covers passive and general networks end to end") {
    auto rng = make_rng(431);

    const cmat u = random_unitary(rng, 4);
    const static_decomposition pd = decompose_static(u, true);
    CHECK(pd.passive);
    CHECK(max_abs(remultiply(pd) - u) < 1e-8);

    const doubled_matrix r = random_bogoliubov(rng, 3);
    const static_decomposition gd = decompose_static(r.full(), false);
    CHECK_FALSE(gd.passive);
    bool has_squeeze = false;
    for (const static_element& e : gd.elements)
        if (e.kind == static_element::op::squeeze) has_squeeze = true;
    CHECK(has_squeeze);
    CHECK(max_abs(remultiply(gd) - r.full()) < 1e-7);

    CHECK_THROWS_AS(decompose_static(cmat::Identity(2, 2) * 1.5, true), structure_error);
    CHECK_THROWS_AS(decompose_static(cmat::Identity(4, 4) * 1.5, false), structure_error);
}
