#ifndef KH_DIAGRAM_HPP
#define KH_DIAGRAM_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kh {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One crossing of a planar diagram. slot[0..3] are internal edge ids listed
// counterclockwise starting from the incoming under-strand, so the under-strand
// runs slot[0] -> slot[2] and the over-strand occupies slot[1] and slot[3].
struct Crossing {
    std::array<int, 4> slot{};
    int over_in = 3;  // 1 or 3: which over slot is the incoming end
};

// A Kauffman state: bit c set means the marker at crossing c is negative.
// A positive marker selects the smoothing pairing (slot0,slot1),(slot2,slot3);
// a negative marker pairs (slot0,slot3),(slot1,slot2).
using State = uint32_t;

struct Resolution {
    int n_circles = 0;
    // edge -> circle index; circles are numbered by ascending minimal edge id,
    // crossing-free unknot components occupy the trailing indices.
    std::vector<int> circle_of_edge;
    int base_circle = 0;
};

struct LinkMetadata {
    std::optional<int> signature;
    std::optional<bool> alternating;
    std::optional<bool> split;
    std::optional<bool> prime;
    std::optional<int64_t> basepoint;   // external edge label
    std::optional<std::string> same_as; // another census entry of the same link
    std::optional<std::string> mirror_of;
    std::optional<int> torus2; // k when the entry is the (2,k) torus link
};

class LinkDiagram {
  public:
    // Parses PD-code text: whitespace/comma separated X[a,b,c,d] tuples,
    // the reserved token "unlink N", and blocks joined by the disjoint-union
    // mark "⊔" which get block-disjoint edge labels.
    static LinkDiagram parse_pd(const std::string& text);

    int n_crossings() const { return static_cast<int>(crossings_.size()); }
    int n_edges() const { return static_cast<int>(labels_.size()); }
    int free_loops() const { return free_loops_; }
    int m_components() const { return n_cycles_ + free_loops_; }
    int writhe() const { return writhe_; }

    int crossing_sign(int c) const { return crossings_[c].over_in == 3 ? +1 : -1; }
    const Crossing& crossing(int c) const { return crossings_[c]; }

    int succ(int e) const { return succ_[e]; }
    int component_of_edge(int e) const { return comp_of_edge_[e]; }
    int64_t label_of_edge(int e) const { return labels_[e]; }
    int edge_of_label(int64_t label) const;

    // Base edge id; -1 when the diagram has no edges (base sits on a free loop).
    int base_edge() const { return base_edge_; }
    void set_base_point(int64_t label);

    std::string name;

    // Writes a canonical PD string whose labels depend only on the crossing
    // order and the component structure, not on the input labels.
    std::string normalized_pd() const;

    // Over/under swapped at every crossing (tuples rotated so that the slot
    // convention still holds).
    LinkDiagram mirror() const;

    // Same diagram with crossings listed in the given order.
    LinkDiagram permuted(const std::vector<int>& order) const;

  private:
    std::vector<Crossing> crossings_;
    std::vector<int64_t> labels_;     // edge id -> external label
    std::vector<int> succ_;           // edge id -> next edge id along orientation
    std::vector<int> comp_of_edge_;   // edge id -> component index
    int n_cycles_ = 0;
    int free_loops_ = 0;
    int writhe_ = 0;
    int base_edge_ = -1;

    static LinkDiagram build(std::vector<std::array<int64_t, 4>> tuples, int free_loops);
};

int state_sigma(const LinkDiagram& d, State s);

// Circles of the smoothing selected by s, via union-find over the edge arcs.
Resolution resolve(const LinkDiagram& d, State s);

// l[k][l] = half the signed count of crossings between components k and l;
// empty for diagrams with fewer than two components.
std::vector<std::vector<int64_t>> linking_numbers(const LinkDiagram& d);

// Census file: one entry per line, `name <tab> pd [<tab> key=value ...]`.
struct CensusEntry {
    std::string name;
    std::string pd;
    LinkMetadata meta;
};
std::vector<CensusEntry> parse_census(const std::string& text);
std::string format_census_entry(const CensusEntry& e);

uint64_t diagram_hash(const LinkDiagram& d);

} // namespace kh

#endif
