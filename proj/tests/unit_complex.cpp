#include <doctest.h>

#include "fixtures.hpp"
#include "kh/complex.hpp"

using namespace kh;

TEST_CASE("unknot slices") {
    KhComplex kc(fx::unknot());
    CHECK(kc.total_generators() == 2);
    REQUIRE(kc.slices().size() == 2);
    CHECK(kc.slice_dim(0, -1) == 1); // the '+'-circle state
    CHECK(kc.slice_dim(0, +1) == 1); // the '-'-circle state
    const ChainSlice& low = kc.slices().at({0, -1});
    CHECK(low.generators[0].signs == 0); // '+' on the single circle
}

TEST_CASE("two-component unlink slices") {
    KhComplex kc(fx::unlink2());
    CHECK(kc.total_generators() == 4);
    CHECK(kc.slice_dim(0, -2) == 1);
    CHECK(kc.slice_dim(0, 0) == 2);
    CHECK(kc.slice_dim(0, 2) == 1);
}

TEST_CASE("trefoil generator count matches the state sum") {
    LinkDiagram d = fx::trefoil_r();
    // independent enumeration: sum over states of 2^{circles}
    int64_t expected = 0;
    for (State s = 0; s < 8; ++s) expected += int64_t(1) << resolve(d, s).n_circles;
    KhComplex kc(d);
    CHECK(kc.total_generators() == expected);
    int64_t from_slices = 0;
    for (const auto& [ij, sl] : kc.slices()) from_slices += static_cast<int64_t>(sl.generators.size());
    CHECK(from_slices == expected);
}

TEST_CASE("generator cap") {
    CHECK_THROWS_AS(KhComplex(fx::trefoil_r(), 10), CapExceeded);
}

TEST_CASE("incidence conditions") {
    LinkDiagram d = fx::trefoil_r();
    // markers differing at two crossings
    CHECK(incidence(d, {0b000, 0}, {0b011, 0}) == 0);
    // marker changing - to + (wrong direction)
    CHECK(incidence(d, {0b001, 0}, {0b000, 0}) == 0);

    // all-positive state has circles {1,3,5} and {2,4,6}; flipping crossing 0 joins them
    REQUIRE(resolve(d, 0b000).n_circles == 2);
    REQUIRE(resolve(d, 0b001).n_circles == 1);
    // join of two '+' circles: not listed in condition III
    CHECK(incidence(d, {0b000, 0b00}, {0b001, 0b0}) == 0);
    CHECK(incidence(d, {0b000, 0b00}, {0b001, 0b1}) == 0);
    // mixed-sign join gives '+' with sign +1 (no negative markers after crossing 0)
    CHECK(incidence(d, {0b000, 0b10}, {0b001, 0b0}) == 1);
    CHECK(incidence(d, {0b000, 0b01}, {0b001, 0b0}) == 1);
    CHECK(incidence(d, {0b000, 0b10}, {0b001, 0b1}) == 0);
    // both-negative join gives '-'
    CHECK(incidence(d, {0b000, 0b11}, {0b001, 0b1}) == 1);
    CHECK(incidence(d, {0b000, 0b11}, {0b001, 0b0}) == 0);

    // split of a '+' circle into two '+' circles, no negative markers after: +1
    REQUIRE(resolve(d, 0b011).n_circles == 2);
    CHECK(incidence(d, {0b001, 0b0}, {0b011, 0b00}) == 1);
    // same split but with a negative marker after the changed crossing: -1
    CHECK(incidence(d, {0b010, 0b0}, {0b011, 0b00}) == -1);
    // split of a '-' circle: the two mixed-sign results appear
    CHECK(incidence(d, {0b001, 0b1}, {0b011, 0b01}) == 1);
    CHECK(incidence(d, {0b001, 0b1}, {0b011, 0b10}) == 1);
    CHECK(incidence(d, {0b001, 0b1}, {0b011, 0b11}) == 0);
}

TEST_CASE("unknot matrices for nu and X") {
    KhComplex kc(fx::unknot());
    SparseIntMatrix nu = kc.build_matrix({DiffKind::nu, 0}, 0, -1);
    REQUIRE(nu.n_rows == 1);
    REQUIRE(nu.n_cols == 1);
    CHECK(nu.entries.size() == 1);
    CHECK(nu.entries[0].value == 1);

    SparseIntMatrix x_hi = kc.build_matrix({DiffKind::x, 0}, 0, +1);
    CHECK(x_hi.n_rows == 1);
    CHECK(x_hi.entries.size() == 1);
    SparseIntMatrix x_lo = kc.build_matrix({DiffKind::x, 0}, 0, -1);
    CHECK(x_lo.n_rows == 0); // nothing below
    CHECK(x_lo.entries.empty());

    SparseIntMatrix d0 = kc.build_matrix({DiffKind::khovanov_d, 0}, 0, -1);
    CHECK(d0.entries.empty());
}

TEST_CASE("ring validation") {
    KhComplex kc(fx::trefoil_r());
    CHECK_THROWS_AS(kc.build_matrix({DiffKind::lee_phi, 0}, 0, 1), ComplexError);
    CHECK_THROWS_AS(kc.build_matrix({DiffKind::lee_phi, 2}, 0, 1), ComplexError);
    CHECK_THROWS_AS(kc.build_matrix({DiffKind::phi_plus_d, 4}, 0, 1), ComplexError);
    CHECK_NOTHROW(kc.build_matrix({DiffKind::lee_phi, 3}, 0, 1));
    CHECK_NOTHROW(kc.build_matrix({DiffKind::lee_phi, 5}, 0, 1));
}

TEST_CASE("reduced slices of the unknot") {
    LinkDiagram u = fx::unknot();
    KhComplex kc(u);
    const auto& red = kc.reduced_slices();
    REQUIRE(red.size() == 1);
    CHECK(red.count({0, 0}) == 1);
    CHECK(red.at({0, 0}).generators.size() == 1);
}

TEST_CASE("reduced generator count bounded by full count") {
    KhComplex kc(fx::trefoil_r());
    for (const auto& [ij, sl] : kc.reduced_slices()) {
        int64_t full = kc.slice_dim(ij.first, ij.second - 1);
        CHECK(static_cast<int64_t>(sl.generators.size()) <= full);
    }
}

TEST_CASE("ab basis dimensions match slice totals") {
    KhComplex kc(fx::hopf_pos());
    int64_t total = 0;
    for (int i : kc.ab_i_support()) total += kc.ab_dim(i);
    CHECK(total == kc.total_generators());
}

TEST_CASE("bidegrees of the differentials") {
    CHECK(bidegree_of(DiffKind::khovanov_d) == std::pair<int, int>{1, 0});
    CHECK(bidegree_of(DiffKind::nu) == std::pair<int, int>{0, 2});
    CHECK(bidegree_of(DiffKind::x) == std::pair<int, int>{0, -2});
    CHECK(bidegree_of(DiffKind::lee_phi) == std::pair<int, int>{1, 4});
}
