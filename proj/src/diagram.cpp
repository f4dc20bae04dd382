#include "kh/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace kh {

namespace {

struct Token {
    enum Kind { Tuple, Unlink } kind;
    std::array<int64_t, 4> t{};
    int64_t n = 0;
};

// Tokenizes one PD block: X[a,b,c,d] tuples and "unlink N".
std::vector<Token> tokenize_block(const std::string& text) {
    std::vector<Token> out;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    // between top-level tokens a comma is also a separator
    auto skip_separators = [&] {
        while (i < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
            ++i;
    };
    auto parse_int = [&]() -> int64_t {
        skip_ws();
        size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw ParseError("expected integer in PD code near '" + text.substr(start, 12) + "'");
        return std::stoll(text.substr(start, i - start));
    };
    skip_separators();
    while (i < text.size()) {
        if (text[i] == 'X' || text[i] == 'x') {
            ++i;
            skip_ws();
            if (i >= text.size() || text[i] != '[') throw ParseError("malformed tuple: expected '[' after X");
            ++i;
            Token tok;
            tok.kind = Token::Tuple;
            for (int k = 0; k < 4; ++k) {
                tok.t[k] = parse_int();
                skip_ws();
                if (k < 3) {
                    if (i >= text.size() || text[i] != ',') throw ParseError("malformed tuple: expected ','");
                    ++i;
                }
            }
            skip_ws();
            if (i >= text.size() || text[i] != ']') throw ParseError("malformed tuple: expected ']'");
            ++i;
            out.push_back(tok);
        } else if (text.compare(i, 6, "unlink") == 0) {
            i += 6;
            Token tok;
            tok.kind = Token::Unlink;
            tok.n = parse_int();
            if (tok.n < 1) throw ParseError("unlink count must be positive");
            out.push_back(tok);
        } else {
            throw ParseError("unexpected character '" + text.substr(i, 1) + "' in PD code");
        }
        skip_separators();
    }
    return out;
}

std::vector<std::string> split_disjoint_union(const std::string& text) {
    static const std::string mark = "\xE2\x8A\x94"; // U+2294
    std::vector<std::string> blocks;
    size_t pos = 0;
    while (true) {
        size_t hit = text.find(mark, pos);
        if (hit == std::string::npos) {
            blocks.push_back(text.substr(pos));
            break;
        }
        blocks.push_back(text.substr(pos, hit - pos));
        pos = hit + mark.size();
    }
    return blocks;
}

} // namespace

LinkDiagram LinkDiagram::parse_pd(const std::string& text) {
    std::vector<std::array<int64_t, 4>> tuples;
    int free_loops = 0;
    int64_t offset = 0;
    for (const std::string& block : split_disjoint_union(text)) {
        int64_t block_max = 0;
        for (const Token& tok : tokenize_block(block)) {
            if (tok.kind == Token::Unlink) {
                free_loops += static_cast<int>(tok.n);
                continue;
            }
            std::array<int64_t, 4> t = tok.t;
            for (int64_t& v : t) {
                if (v < 1) throw ParseError("edge labels must be positive integers");
                block_max = std::max(block_max, v);
                v += offset;
            }
            tuples.push_back(t);
        }
        offset += block_max;
    }
    if (tuples.empty() && free_loops == 0)
        throw ParseError("empty PD code");
    return build(std::move(tuples), free_loops);
}

LinkDiagram LinkDiagram::build(std::vector<std::array<int64_t, 4>> tuples, int free_loops) {
    LinkDiagram d;
    d.free_loops_ = free_loops;

    // Dense edge ids ordered by external label.
    std::map<int64_t, int> id_of;
    for (const auto& t : tuples)
        for (int64_t v : t) id_of.emplace(v, 0);
    {
        int next = 0;
        for (auto& [label, id] : id_of) {
            id = next++;
            d.labels_.push_back(label);
        }
    }
    const int E = static_cast<int>(d.labels_.size());
    const int n = static_cast<int>(tuples.size());
    if (n > 0 && E != 2 * n)
        throw ParseError("a diagram with " + std::to_string(n) + " crossings needs " +
                         std::to_string(2 * n) + " distinct edge labels, got " + std::to_string(E));

    d.crossings_.resize(n);
    // occurrence list per edge: (crossing, slot)
    std::vector<std::vector<std::pair<int, int>>> occ(E);
    for (int c = 0; c < n; ++c) {
        for (int k = 0; k < 4; ++k) {
            int e = id_of[tuples[c][k]];
            d.crossings_[c].slot[k] = e;
            occ[e].push_back({c, k});
        }
    }
    for (int e = 0; e < E; ++e)
        if (occ[e].size() != 2)
            throw ParseError("edge label " + std::to_string(d.labels_[e]) + " appears " +
                             std::to_string(occ[e].size()) + " times (must be exactly 2)");

    // Orientation reconstruction. Every edge has one end where it enters a
    // crossing (IN) and one where it leaves (OUT). Under-strand slots are
    // forced: slot0 = IN, slot2 = OUT. Over slots (1,3) carry one IN and one
    // OUT; propagate the per-edge constraint to a fixpoint and fall back on
    // the label-succession convention (succ(e) = e+1 up to the component wrap)
    // for components that never pass under.
    constexpr int UNKNOWN = 0, IN = 1, OUT = 2;
    std::vector<std::array<int, 4>> dir(n, {UNKNOWN, UNKNOWN, UNKNOWN, UNKNOWN});
    std::vector<int> succ(E, -1), pred(E, -1);

    auto other_occ = [&](int e, int c, int k) -> std::pair<int, int> {
        const auto& v = occ[e];
        if (v[0] == std::make_pair(c, k)) return v[1];
        return v[0];
    };

    auto claim = [&](int from, int to) {
        if (succ[from] != -1 && succ[from] != to)
            throw ParseError("inconsistent orientation tracing at edge label " +
                             std::to_string(d.labels_[from]));
        if (pred[to] != -1 && pred[to] != from)
            throw ParseError("inconsistent orientation tracing at edge label " +
                             std::to_string(d.labels_[to]));
        succ[from] = to;
        pred[to] = from;
    };

    std::vector<std::pair<int, int>> work;
    auto set_dir = [&](int c, int k, int v) {
        if (dir[c][k] == v) return;
        if (dir[c][k] != UNKNOWN)
            throw ParseError("inconsistent orientation tracing at crossing " + std::to_string(c + 1));
        dir[c][k] = v;
        work.push_back({c, k});
    };

    for (int c = 0; c < n; ++c) {
        set_dir(c, 0, IN);
        set_dir(c, 2, OUT);
    }
    auto propagate = [&] {
        while (!work.empty()) {
            auto [c, k] = work.back();
            work.pop_back();
            int e = d.crossings_[c].slot[k];
            auto [c2, k2] = other_occ(e, c, k);
            set_dir(c2, k2, dir[c][k] == IN ? OUT : IN);
            // the partner over slot takes the opposite role
            if (k == 1 || k == 3) set_dir(c, k ^ 2, dir[c][k] == IN ? OUT : IN);
            if (k2 == 1 || k2 == 3) set_dir(c2, k2 ^ 2, dir[c2][k2] == IN ? OUT : IN);
        }
    };
    propagate();

    // record every decided transition into succ/pred
    auto claim_decided = [&] {
        for (int c = 0; c < n; ++c) {
            const auto& x = d.crossings_[c];
            claim(x.slot[0], x.slot[2]);
            if (dir[c][1] == IN)
                claim(x.slot[1], x.slot[3]);
            else if (dir[c][3] == IN)
                claim(x.slot[3], x.slot[1]);
        }
    };
    claim_decided();

    for (int c = 0; c < n; ++c) {
        if (dir[c][1] != UNKNOWN) continue;
        // components that are over-strands everywhere: use label succession
        int64_t b = d.labels_[d.crossings_[c].slot[1]];
        int64_t dd = d.labels_[d.crossings_[c].slot[3]];
        int eb = d.crossings_[c].slot[1], ed = d.crossings_[c].slot[3];
        bool b_in;
        if (dd == b + 1)
            b_in = true;
        else if (b == dd + 1)
            b_in = false;
        else
            b_in = b > dd; // wrap: the larger label closes the component
        int from = b_in ? eb : ed, to = b_in ? ed : eb;
        if (succ[from] != -1 || pred[to] != -1) std::swap(from, to); // transition already used
        set_dir(c, from == eb ? 1 : 3, IN);
        propagate();
        claim_decided();
    }

    for (int e = 0; e < E; ++e)
        if (succ[e] == -1 || pred[e] == -1)
            throw ParseError("inconsistent orientation tracing at edge label " +
                             std::to_string(d.labels_[e]));
    d.succ_ = succ;

    // components = cycles of succ
    d.comp_of_edge_.assign(E, -1);
    int comp = 0;
    for (int e = 0; e < E; ++e) {
        if (d.comp_of_edge_[e] != -1) continue;
        for (int x = e; d.comp_of_edge_[x] == -1; x = succ[x]) d.comp_of_edge_[x] = comp;
        ++comp;
    }
    d.n_cycles_ = comp;

    // over_in slot and sign per crossing
    d.writhe_ = 0;
    for (int c = 0; c < n; ++c) {
        d.crossings_[c].over_in = (dir[c][3] == IN) ? 3 : 1;
        d.writhe_ += d.crossing_sign(c);
    }

    d.base_edge_ = E > 0 ? 0 : -1; // lowest label (ids are label-ordered)
    return d;
}

int LinkDiagram::edge_of_label(int64_t label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        throw ParseError("no edge with label " + std::to_string(label));
    return static_cast<int>(it - labels_.begin());
}

void LinkDiagram::set_base_point(int64_t label) {
    base_edge_ = edge_of_label(label);
}

std::string LinkDiagram::normalized_pd() const {
    const int E = n_edges();
    std::vector<int64_t> new_label(E, 0);
    int64_t next = 1;
    for (const Crossing& x : crossings_) {
        for (int k = 0; k < 4; ++k) {
            int e = x.slot[k];
            if (new_label[e] != 0) continue;
            for (int cur = e; new_label[cur] == 0; cur = succ_[cur]) new_label[cur] = next++;
        }
    }
    std::ostringstream os;
    bool first = true;
    for (const Crossing& x : crossings_) {
        if (!first) os << ' ';
        first = false;
        os << "X[" << new_label[x.slot[0]] << ',' << new_label[x.slot[1]] << ','
           << new_label[x.slot[2]] << ',' << new_label[x.slot[3]] << ']';
    }
    if (free_loops_ > 0) {
        if (!first) os << ' ';
        os << "unlink " << free_loops_;
    }
    return os.str();
}

LinkDiagram LinkDiagram::mirror() const {
    std::vector<std::array<int64_t, 4>> tuples;
    tuples.reserve(crossings_.size());
    for (const Crossing& x : crossings_) {
        // swap over/under: the old over-in slot becomes the new incoming under
        std::array<int64_t, 4> t{};
        int start = x.over_in;
        for (int k = 0; k < 4; ++k) t[k] = labels_[x.slot[(start + k) % 4]];
        tuples.push_back(t);
    }
    LinkDiagram m = build(std::move(tuples), free_loops_);
    m.name = name.empty() ? "" : name + "!";
    return m;
}

LinkDiagram LinkDiagram::permuted(const std::vector<int>& order) const {
    std::vector<std::array<int64_t, 4>> tuples;
    tuples.reserve(crossings_.size());
    for (int c : order) {
        const Crossing& x = crossings_.at(c);
        std::array<int64_t, 4> t{};
        for (int k = 0; k < 4; ++k) t[k] = labels_[x.slot[k]];
        tuples.push_back(t);
    }
    LinkDiagram p = build(std::move(tuples), free_loops_);
    p.name = name;
    return p;
}

int state_sigma(const LinkDiagram& d, State s) {
    int neg = __builtin_popcount(s);
    return d.n_crossings() - 2 * neg;
}

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};
} // namespace

Resolution resolve(const LinkDiagram& d, State s) {
    const int E = d.n_edges();
    UnionFind uf(E);
    for (int c = 0; c < d.n_crossings(); ++c) {
        const Crossing& x = d.crossing(c);
        if (s >> c & 1) { // negative marker
            uf.unite(x.slot[0], x.slot[3]);
            uf.unite(x.slot[1], x.slot[2]);
        } else { // positive marker
            uf.unite(x.slot[0], x.slot[1]);
            uf.unite(x.slot[2], x.slot[3]);
        }
    }
    Resolution r;
    r.circle_of_edge.assign(E, -1);
    int next = 0;
    for (int e = 0; e < E; ++e) {
        int root = uf.find(e);
        if (r.circle_of_edge[root] == -1) r.circle_of_edge[root] = next++;
        r.circle_of_edge[e] = r.circle_of_edge[root];
    }
    r.n_circles = next + d.free_loops();
    r.base_circle = d.base_edge() >= 0 ? r.circle_of_edge[d.base_edge()]
                                       : (d.free_loops() > 0 ? next : 0);
    return r;
}

std::vector<std::vector<int64_t>> linking_numbers(const LinkDiagram& d) {
    const int m = d.m_components();
    if (m < 2) return {};
    std::vector<std::vector<int64_t>> twice(m, std::vector<int64_t>(m, 0));
    for (int c = 0; c < d.n_crossings(); ++c) {
        const Crossing& x = d.crossing(c);
        int under = d.component_of_edge(x.slot[0]);
        int over = d.component_of_edge(x.slot[1]);
        if (under == over) continue;
        twice[under][over] += d.crossing_sign(c);
        twice[over][under] += d.crossing_sign(c);
    }
    for (auto& row : twice)
        for (auto& v : row) v /= 2;
    return twice;
}

std::vector<CensusEntry> parse_census(const std::string& text) {
    std::vector<CensusEntry> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, tab - pos));
            pos = tab + 1;
        }
        if (fields.size() < 2)
            throw ParseError("census line " + std::to_string(lineno) + ": need `name<TAB>pd`");
        CensusEntry e;
        e.name = fields[0];
        e.pd = fields[1];
        for (size_t f = 2; f < fields.size(); ++f) {
            if (fields[f].empty()) continue;
            size_t eq = fields[f].find('=');
            if (eq == std::string::npos)
                throw ParseError("census line " + std::to_string(lineno) + ": metadata needs key=value");
            std::string key = fields[f].substr(0, eq), val = fields[f].substr(eq + 1);
            if (key == "signature")
                e.meta.signature = std::stoi(val);
            else if (key == "alternating")
                e.meta.alternating = (val == "true" || val == "1");
            else if (key == "split")
                e.meta.split = (val == "true" || val == "1");
            else if (key == "prime")
                e.meta.prime = (val == "true" || val == "1");
            else if (key == "basepoint")
                e.meta.basepoint = std::stoll(val);
            else if (key == "same")
                e.meta.same_as = val;
            else if (key == "mirror")
                e.meta.mirror_of = val;
            else if (key == "torus2")
                e.meta.torus2 = std::stoi(val);
            else
                throw ParseError("census line " + std::to_string(lineno) + ": unknown key " + key);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string format_census_entry(const CensusEntry& e) {
    std::ostringstream os;
    os << e.name << '\t' << e.pd;
    if (e.meta.signature) os << "\tsignature=" << *e.meta.signature;
    if (e.meta.alternating) os << "\talternating=" << (*e.meta.alternating ? "true" : "false");
    if (e.meta.split) os << "\tsplit=" << (*e.meta.split ? "true" : "false");
    if (e.meta.prime) os << "\tprime=" << (*e.meta.prime ? "true" : "false");
    if (e.meta.basepoint) os << "\tbasepoint=" << *e.meta.basepoint;
    if (e.meta.same_as) os << "\tsame=" << *e.meta.same_as;
    if (e.meta.mirror_of) os << "\tmirror=" << *e.meta.mirror_of;
    if (e.meta.torus2) os << "\ttorus2=" << *e.meta.torus2;
    return os.str();
}

uint64_t diagram_hash(const LinkDiagram& d) {
    std::string s = d.normalized_pd();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace kh
