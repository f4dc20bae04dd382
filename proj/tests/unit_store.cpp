#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "kh/pipeline.hpp"
#include "kh/store.hpp"

using namespace kh;

namespace {

ResultRecord trefoil_record() {
    LinkDiagram d = fx::trefoil_r();
    ComputeOptions opt;
    opt.mod_primes = {2, 3};
    Computation c = compute_homology(d, opt);
    ResultRecord r;
    r.name = "3_1";
    r.pd = d.normalized_pd();
    r.diagram_hash = diagram_hash(d);
    r.n_crossings = d.n_crossings();
    r.m_components = d.m_components();
    r.table = c.table;
    r.table.meta.signature = -2;
    r.table.meta.alternating = true;
    r.classification = classify(r.table, c.modp_betti, std::nullopt);
    r.kh = khovanov_polynomial(r.table);
    r.kh_t = torsion_polynomial(r.table);
    r.euler = graded_euler(r.table);
    r.jones = jones_reduced(r.table);
    r.timing_ms = 5;
    return r;
}

} // namespace

TEST_CASE("group entry grammar") {
    AbelianGroup g;
    CHECK(group_entry(g).empty());
    g.rank = 2;
    g.torsion[2] = 1;
    g.torsion[4] = 1;
    CHECK(group_entry(g) == "2[1,1]"); // Z^2 + Z_2 + Z_4
    AbelianGroup t;
    t.torsion[2] = 1;
    CHECK(group_entry(t) == "[1]");
    AbelianGroup z4only;
    z4only.rank = 1;
    z4only.torsion[4] = 1;
    CHECK(group_entry(z4only) == "1[0,1]"); // missing Z_2 renders as 0
    AbelianGroup plain;
    plain.rank = 3;
    CHECK(group_entry(plain) == "3");

    AbelianGroup back = parse_group_entry("2[1,1]");
    CHECK(back == g);
    CHECK(parse_group_entry("3") == plain);
    CHECK(parse_group_entry("[1]") == t);
    CHECK(parse_group_entry("1[0,1]") == z4only);
}

TEST_CASE("record json round trip") {
    ResultRecord r = trefoil_record();
    std::string text = record_to_json(r);
    ResultRecord back = record_from_json(text);
    CHECK(back.name == r.name);
    CHECK(back.diagram_hash == r.diagram_hash);
    CHECK(back.table.groups == r.table.groups);
    REQUIRE(back.table.reduced.has_value());
    CHECK(*back.table.reduced == *r.table.reduced);
    CHECK(back.table.meta.signature == r.table.meta.signature);
    CHECK(back.kh == r.kh);
    CHECK(back.kh_t == r.kh_t);
    CHECK(back.euler == r.euler);
    CHECK(back.jones == r.jones);
    CHECK(back.classification.h_class == r.classification.h_class);
    CHECK(back.classification.t_class == r.classification.t_class);
    CHECK(back.classification.s_value == r.classification.s_value);
    CHECK(back.classification.diagonal_support == r.classification.diagonal_support);
}

TEST_CASE("store write, hit, read and index") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "kh_store_test";
    fs::remove_all(dir);
    ResultRecord r = trefoil_record();
    store_write(dir.string(), r);
    CHECK(store_has(dir.string(), "3_1", r.diagram_hash));
    CHECK(!store_has(dir.string(), "3_1", r.diagram_hash + 1));
    CHECK(!store_has(dir.string(), "missing", 0));
    ResultRecord back = store_read(dir.string(), "3_1");
    CHECK(back.table.groups == r.table.groups);
    store_write_index(dir.string(), {r});
    CHECK(fs::exists(dir / "index.csv"));
    fs::remove_all(dir);
}

TEST_CASE("table rendering") {
    ResultRecord r = trefoil_record();
    std::string text = render_table(r.table, true);
    // the Z2 at (3,7) renders as "[1]" somewhere in the table
    CHECK(text.find("[1]") != std::string::npos);
    // reduced rows are marked
    CHECK(text.find('~') != std::string::npos);
    std::string line = classification_line(r);
    CHECK(line.find("H-slim") != std::string::npos);
    CHECK(line.find("T-thin") != std::string::npos);
}
