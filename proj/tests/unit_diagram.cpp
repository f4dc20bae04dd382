#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "kh/diagram.hpp"

using namespace kh;

TEST_CASE("parse_pd basics") {
    LinkDiagram d = fx::trefoil_r();
    CHECK(d.n_crossings() == 3);
    CHECK(d.m_components() == 1);
    CHECK(d.n_edges() == 6);
    for (int c = 0; c < 3; ++c) CHECK(d.crossing_sign(c) == 1);
    CHECK(d.writhe() == 3);

    LinkDiagram l = fx::trefoil_l();
    for (int c = 0; c < 3; ++c) CHECK(l.crossing_sign(c) == -1);
    CHECK(l.writhe() == -3);

    LinkDiagram u = LinkDiagram::parse_pd("unlink 2");
    CHECK(u.n_crossings() == 0);
    CHECK(u.m_components() == 2);
    CHECK(u.writhe() == 0);
}

TEST_CASE("parse_pd rejects bad labels") {
    // an edge label appearing once
    CHECK_THROWS_AS(LinkDiagram::parse_pd("X[1,4,2,3] X[3,6,4,7]"), ParseError);
    // malformed tuple
    CHECK_THROWS_AS(LinkDiagram::parse_pd("X[1,4,2] X[3,6,4,5]"), ParseError);
    CHECK_THROWS_AS(LinkDiagram::parse_pd(""), ParseError);
    CHECK_THROWS_AS(LinkDiagram::parse_pd("X[0,1,1,0]"), ParseError);
}

TEST_CASE("mirror negates signs") {
    for (const LinkDiagram& d : {fx::trefoil_r(), fx::figure8(), fx::hopf_pos()}) {
        LinkDiagram m = d.mirror();
        REQUIRE(m.n_crossings() == d.n_crossings());
        for (int c = 0; c < d.n_crossings(); ++c)
            CHECK(m.crossing_sign(c) == -d.crossing_sign(c));
        CHECK(m.writhe() == -d.writhe());
    }
}

TEST_CASE("writhe invariant under relabeling and crossing order") {
    LinkDiagram d = fx::trefoil_r();
    // shift every label by 10
    LinkDiagram shifted = LinkDiagram::parse_pd("X[11,15,12,14] X[15,13,16,12] X[13,11,14,16]");
    CHECK(shifted.writhe() == d.writhe());
    for (int c = 0; c < 3; ++c) CHECK(shifted.crossing_sign(c) == d.crossing_sign(c));

    LinkDiagram perm = d.permuted({2, 0, 1});
    CHECK(perm.writhe() == d.writhe());

    // normalized text round-trips and is relabel-invariant
    CHECK(LinkDiagram::parse_pd(d.normalized_pd()).writhe() == 3);
    CHECK(diagram_hash(LinkDiagram::parse_pd(shifted.normalized_pd())) == diagram_hash(d));
}

TEST_CASE("resolve counts circles") {
    LinkDiagram d = fx::trefoil_r();
    CHECK(resolve(d, 0b000).n_circles == 2); // all positive markers
    CHECK(resolve(d, 0b111).n_circles == 3); // all negative markers
    CHECK(resolve(fx::unknot(), 0).n_circles == 1);

    // flipping one marker changes the circle count by exactly 1
    std::mt19937 rng(7);
    for (int trial = 0; trial < 16; ++trial) {
        std::vector<int> word;
        int strands = 2 + static_cast<int>(rng() % 3);
        int len = 1 + static_cast<int>(rng() % 6);
        for (int t = 0; t < len; ++t) {
            int g = 1 + static_cast<int>(rng() % (strands - 1));
            word.push_back(rng() % 2 ? g : -g);
        }
        LinkDiagram b = fx::braid(strands, word);
        for (State s = 0; s < (State(1) << b.n_crossings()); ++s) {
            Resolution r = resolve(b, s);
            for (int c = 0; c < b.n_crossings(); ++c) {
                Resolution r2 = resolve(b, s ^ (State(1) << c));
                CHECK(std::abs(r.n_circles - r2.n_circles) == 1);
            }
        }
    }
}

TEST_CASE("linking numbers") {
    LinkDiagram hopf = fx::hopf_pos();
    REQUIRE(hopf.m_components() == 2);
    auto lk = linking_numbers(hopf);
    CHECK(lk[0][1] == 1);
    CHECK(lk[1][0] == 1);

    auto lk0 = linking_numbers(fx::unlink2());
    CHECK(lk0[0][1] == 0);

    CHECK(linking_numbers(fx::trefoil_r()).empty());

    // disjoint union of two trefoils: no crossings between components
    LinkDiagram two = LinkDiagram::parse_pd(std::string(fx::TREFOIL_R) + " \xE2\x8A\x94 " +
                                            fx::TREFOIL_R);
    CHECK(two.m_components() == 2);
    CHECK(two.n_crossings() == 6);
    CHECK(two.writhe() == 6);
    auto lk2 = linking_numbers(two);
    CHECK(lk2[0][1] == 0);
}

TEST_CASE("disjoint union with unlink blocks") {
    LinkDiagram d = LinkDiagram::parse_pd(std::string(fx::TREFOIL_R) + " \xE2\x8A\x94 unlink 1");
    CHECK(d.m_components() == 2);
    CHECK(d.free_loops() == 1);
    CHECK(d.n_crossings() == 3);
    Resolution r = resolve(d, 0);
    CHECK(r.n_circles == 3); // 2 trefoil circles + 1 free loop
}

TEST_CASE("base point defaults to the lowest label") {
    LinkDiagram d = fx::trefoil_r();
    CHECK(d.label_of_edge(d.base_edge()) == 1);
    d.set_base_point(4);
    CHECK(d.label_of_edge(d.base_edge()) == 4);
    CHECK_THROWS_AS(d.set_base_point(99), ParseError);
}

TEST_CASE("census format round trip") {
    std::string text = "3_1\tX[1,5,2,4] X[5,3,6,2] X[3,1,4,6]\tsignature=-2\talternating=true\n"
                       "# comment\n"
                       "unknot\tunlink 1\n";
    auto entries = parse_census(text);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "3_1");
    CHECK(entries[0].meta.signature == -2);
    CHECK(entries[0].meta.alternating == true);
    CHECK(!entries[0].meta.split.has_value());
    auto again = parse_census(format_census_entry(entries[0]) + "\n");
    REQUIRE(again.size() == 1);
    CHECK(again[0].meta.signature == entries[0].meta.signature);
    CHECK_THROWS_AS(parse_census("badline\n"), ParseError);
}

TEST_CASE("braid closures have the letter signs") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> word;
        int strands = 2 + static_cast<int>(rng() % 3);
        int len = 1 + static_cast<int>(rng() % 8);
        for (int t = 0; t < len; ++t) {
            int g = 1 + static_cast<int>(rng() % (strands - 1));
            word.push_back(rng() % 2 ? g : -g);
        }
        LinkDiagram d = fx::braid(strands, word);
        REQUIRE(d.n_crossings() == len);
        for (int c = 0; c < len; ++c)
            CHECK(d.crossing_sign(c) == (word[c] > 0 ? 1 : -1));
    }
}
