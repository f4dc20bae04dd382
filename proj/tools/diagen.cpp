#include "diagen.hpp"

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kh::diagen {

namespace {

// A 4-valent planar map under construction. Ports of a crossing are listed
// counterclockwise: 0 = upper-left, 1 = lower-left, 2 = lower-right,
// 3 = upper-right (braid strands run downward). Arcs are kept in a union-find
// so that boundary caps can splice open arcs together.
struct MapBuilder {
    struct Cross {
        bool under02; // true: the strand through ports 0 and 2 is the under-strand
        int arc_at[4] = {-1, -1, -1, -1};
    };
    std::vector<Cross> crossings;
    std::vector<int> parent;                          // arc union-find
    std::vector<std::vector<std::pair<int, int>>> ends; // root -> attached (crossing, port)
    int free_loops = 0;

    int new_arc() {
        parent.push_back(static_cast<int>(parent.size()));
        ends.emplace_back();
        return parent.back();
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void attach(int arc, int c, int port) {
        int r = find(arc);
        crossings[c].arc_at[port] = r;
        ends[r].push_back({c, port});
        if (ends[r].size() > 2) throw std::logic_error("arc attached three times");
    }
    // splice two open arcs into one (a boundary cap)
    void merge(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) {
            if (ends[ra].size() >= 2) throw std::logic_error("closing a completed arc");
            ++free_loops; // an open arc capped onto itself
            return;
        }
        parent[rb] = ra;
        for (auto e : ends[rb]) ends[ra].push_back(e);
        ends[rb].clear();
        if (ends[ra].size() > 2) throw std::logic_error("splice produced a triple end");
    }

    std::string emit_pd() {
        const int n = static_cast<int>(crossings.size());
        // canonicalize arc ids at the ports
        for (auto& x : crossings)
            for (int p = 0; p < 4; ++p) x.arc_at[p] = find(x.arc_at[p]);
        for (const auto& x : crossings)
            for (int p = 0; p < 4; ++p)
                if (ends[x.arc_at[p]].size() != 2) throw std::logic_error("open arc at emit time");

        std::vector<std::array<int64_t, 4>> label(n, {0, 0, 0, 0});
        std::vector<std::array<bool, 4>> entry{};
        entry.assign(n, {false, false, false, false});
        std::vector<char> port_done(static_cast<size_t>(n) * 4, 0);

        struct ArcStep {
            int c_exit, p_exit, c_enter, p_enter;
        };
        std::vector<std::vector<ArcStep>> comps;
        // start walks at upper ports so braid strands keep their downward
        // orientation; a braid-closure component always enters some crossing
        // from above
        for (int c0 = 0; c0 < n; ++c0) {
            for (int p0 : {0, 3, 1, 2}) {
                if (port_done[c0 * 4 + p0]) continue;
                std::vector<ArcStep> walk;
                int c = c0, p = p0;
                do {
                    entry[c][p] = true;
                    port_done[c * 4 + p] = 1;
                    int q = p ^ 2; // exit the opposite port
                    port_done[c * 4 + q] = 1;
                    int arc = crossings[c].arc_at[q];
                    auto [c1, p1] = ends[arc][0] == std::make_pair(c, q) ? ends[arc][1]
                                                                         : ends[arc][0];
                    walk.push_back({c, q, c1, p1});
                    c = c1;
                    p = p1;
                } while (!(c == c0 && p == p0));
                comps.push_back(std::move(walk));
            }
        }
        // Two-arc components that never pass under are ambiguous in PD
        // notation: the label-succession convention attributes the x -> x+1
        // transition to the earlier crossing. Rotate the labeling so that the
        // convention reconstructs the true over-strand directions.
        int64_t next_label = 1;
        for (auto& walk : comps) {
            size_t start = 0;
            if (walk.size() == 2) {
                bool pure_over = true;
                for (const ArcStep& st : walk) {
                    bool under = crossings[st.c_enter].under02 ? (st.p_enter == 0 || st.p_enter == 2)
                                                               : (st.p_enter == 1 || st.p_enter == 3);
                    if (under) pure_over = false;
                }
                if (pure_over && walk[0].c_enter > walk[1].c_enter) start = 1;
            }
            for (size_t t = 0; t < walk.size(); ++t) {
                const ArcStep& st = walk[(start + t) % walk.size()];
                label[st.c_exit][st.p_exit] = next_label;
                label[st.c_enter][st.p_enter] = next_label;
                ++next_label;
            }
        }
        std::ostringstream os;
        for (int c = 0; c < n; ++c) {
            int a = -1;
            for (int p : crossings[c].under02 ? std::array<int, 2>{0, 2} : std::array<int, 2>{1, 3})
                if (entry[c][p]) a = p;
            if (a < 0) throw std::logic_error("no incoming under-strand at a crossing");
            os << (c ? " " : "") << "X[" << label[c][a] << ',' << label[c][(a + 1) % 4] << ','
               << label[c][(a + 2) % 4] << ',' << label[c][(a + 3) % 4] << ']';
        }
        if (free_loops > 0) {
            if (n > 0) os << ' ';
            os << "unlink " << free_loops;
        }
        return os.str();
    }
};

struct BraidRun {
    MapBuilder mb;
    std::vector<int> top;    // arc ids of the top stubs
    std::vector<int> bottom; // arc ids of the bottom stubs
};

BraidRun run_braid(int strands, const std::vector<int>& word) {
    if (strands < 2) throw std::invalid_argument("braid needs at least 2 strands");
    BraidRun run;
    std::vector<int> wires(strands);
    for (int k = 0; k < strands; ++k) {
        wires[k] = run.mb.new_arc();
        run.top.push_back(wires[k]);
    }
    for (int letter : word) {
        int g = std::abs(letter);
        if (g < 1 || g >= strands) throw std::invalid_argument("braid letter out of range");
        MapBuilder::Cross x;
        x.under02 = letter > 0; // positive: the right strand passes over
        run.mb.crossings.push_back(x);
        int c = static_cast<int>(run.mb.crossings.size()) - 1;
        run.mb.attach(wires[g - 1], c, 0); // upper-left
        run.mb.attach(wires[g], c, 3);     // upper-right
        wires[g - 1] = run.mb.new_arc();
        wires[g] = run.mb.new_arc();
        run.mb.attach(wires[g - 1], c, 1); // lower-left
        run.mb.attach(wires[g], c, 2);     // lower-right
    }
    run.bottom = wires;
    return run;
}

} // namespace

std::string braid_pd(int strands, const std::vector<int>& word) {
    BraidRun run = run_braid(strands, word);
    for (int k = 0; k < strands; ++k) run.mb.merge(run.bottom[k], run.top[k]);
    return run.mb.emit_pd();
}

std::string plat_pd(const std::vector<int>& word) {
    BraidRun run = run_braid(4, word);
    run.mb.merge(run.top[0], run.top[1]);
    run.mb.merge(run.top[2], run.top[3]);
    run.mb.merge(run.bottom[0], run.bottom[1]);
    run.mb.merge(run.bottom[2], run.bottom[3]);
    return run.mb.emit_pd();
}

std::string rational_pd(const std::vector<int>& cf) {
    if (cf.empty()) throw std::invalid_argument("empty continued fraction");
    std::vector<int> terms = cf;
    for (int a : terms)
        if (a < 1) throw std::invalid_argument("continued fraction terms must be >= 1");
    // the plat word needs an odd number of twist regions so the last one is a
    // middle twist; [..., a] = [..., a-1, 1] keeps the fraction and the
    // crossing count
    if (terms.size() % 2 == 0) {
        int a = terms.back();
        terms.back() = a - 1;
        terms.push_back(1);
        if (terms[terms.size() - 2] == 0)
            throw std::invalid_argument("continued fraction must end with a term >= 2");
    }
    std::vector<int> word;
    for (size_t t = 0; t < terms.size(); ++t)
        for (int r = 0; r < terms[t]; ++r) word.push_back(t % 2 == 0 ? 2 : -1);
    return plat_pd(word);
}

std::pair<int64_t, int64_t> cf_fraction(const std::vector<int>& cf) {
    int64_t p = cf.back(), q = 1;
    for (size_t t = cf.size() - 1; t-- > 0;) {
        int64_t np = cf[t] * p + q;
        q = p;
        p = np;
    }
    return {p, q};
}

bool is_alternating(const LinkDiagram& d) {
    if (d.n_crossings() == 0) return true;
    const int E = d.n_edges();
    // passage type where edge e terminates: 1 = under, 0 = over
    std::vector<int> type(E, -1);
    for (int c = 0; c < d.n_crossings(); ++c) {
        const Crossing& x = d.crossing(c);
        type[x.slot[0]] = 1;
        type[x.over_in == 3 ? x.slot[3] : x.slot[1]] = 0;
    }
    std::vector<char> seen(E, 0);
    for (int e0 = 0; e0 < E; ++e0) {
        if (seen[e0]) continue;
        for (int e = e0; !seen[e]; e = d.succ(e)) {
            seen[e] = 1;
            if (type[e] == type[d.succ(e)]) return false;
        }
    }
    return true;
}

int alternating_signature(const LinkDiagram& d) {
    Resolution all_a = resolve(d, 0);
    int c_plus = 0;
    for (int c = 0; c < d.n_crossings(); ++c)
        if (d.crossing_sign(c) > 0) ++c_plus;
    return all_a.n_circles - 1 - c_plus;
}

} // namespace kh::diagen
