#ifndef KH_STORE_HPP
#define KH_STORE_HPP

#include <cstdint>
#include <string>

#include "kh/invariants.hpp"

namespace kh {

struct ResultRecord {
    std::string name;
    std::string pd;           // normalized PD text
    uint64_t diagram_hash = 0;
    int n_crossings = 0;
    int m_components = 1;
    HomologyTable table;      // carries meta and optional reduced table
    ThinnessReport classification;
    BigradedPoly kh;
    TorsionPoly kh_t;
    LaurentPoly euler;        // K_L(q)
    LaurentPoly jones;        // J_L(q)
    int64_t timing_ms = 0;
};

// Appendix-style entry: rank, then torsion multiplicities by ascending prime
// power in square brackets; "2[1,1]" is Z^2 + Z_2 + Z_4. Trivial groups render
// as the empty string.
std::string group_entry(const AbelianGroup& g);
AbelianGroup parse_group_entry(const std::string& text);

// ASCII homology table, columns i and rows j; with_reduced interleaves the
// even rows of the reduced table between the main rows.
std::string render_table(const HomologyTable& t, bool with_reduced);

std::string record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const std::string& text);

// one JSON document per entry, written atomically; file name derives from the
// entry name
void store_write(const std::string& dir, const ResultRecord& r);
bool store_has(const std::string& dir, const std::string& name, uint64_t diagram_hash);
ResultRecord store_read(const std::string& dir, const std::string& name);
// name, crossings, h_class, t_class, total rank, torsion orders present, d(L)
void store_write_index(const std::string& dir, const std::vector<ResultRecord>& records);

std::string classification_line(const ResultRecord& r);

} // namespace kh

#endif
