#include "kh/complex.hpp"

#include <algorithm>

namespace kh {

namespace {

// lexicographic order on the marker word ('+' < '-'), then the sign word
struct GenLess {
    int n_crossings;
    const std::vector<Resolution>* res;
    bool operator()(const EnhancedState& a, const EnhancedState& b) const {
        for (int k = 0; k < n_crossings; ++k) {
            int wa = a.markers >> k & 1, wb = b.markers >> k & 1;
            if (wa != wb) return wa < wb;
        }
        int la = (*res)[a.markers].n_circles, lb = (*res)[b.markers].n_circles;
        for (int k = 0; k < std::min(la, lb); ++k) {
            int wa = a.signs >> k & 1, wb = b.signs >> k & 1;
            if (wa != wb) return wa < wb;
        }
        return la < lb;
    }
};

int popcount64(uint64_t v) { return __builtin_popcountll(v); }

// One marker flip s -> s' at crossing c (+ to -). Describes how circles merge
// or split and how the unaffected circles correspond.
struct Transition {
    bool join = false;
    int a1 = 0, a2 = 0; // source circles at the crossing (a1 == a2 for a split)
    int z1 = 0, z2 = 0; // target circles (z1 == z2 for a join)
    std::vector<int> map_s_to_t;
};

Transition make_transition(const LinkDiagram& d, const std::vector<Resolution>& res, State s, int c) {
    const State t = s | (State(1) << c);
    const Resolution& rs = res[s];
    const Resolution& rt = res[t];
    const Crossing& x = d.crossing(c);
    Transition tr;
    tr.a1 = rs.circle_of_edge[x.slot[0]];
    tr.a2 = rs.circle_of_edge[x.slot[2]];
    tr.z1 = rt.circle_of_edge[x.slot[0]];
    tr.z2 = rt.circle_of_edge[x.slot[1]];
    tr.join = tr.a1 != tr.a2;
    tr.map_s_to_t.assign(rs.n_circles, -1);
    const int E = d.n_edges();
    for (int e = 0; e < E; ++e) tr.map_s_to_t[rs.circle_of_edge[e]] = rt.circle_of_edge[e];
    const int edge_circles_s = rs.n_circles - d.free_loops();
    const int edge_circles_t = rt.n_circles - d.free_loops();
    for (int f = 0; f < d.free_loops(); ++f)
        tr.map_s_to_t[edge_circles_s + f] = edge_circles_t + f;
    return tr;
}

// number of negative markers in s strictly after crossing c, determining (-1)^t
int sign_exponent(State s, int c) { return __builtin_popcount(s >> (c + 1)); }

} // namespace

std::pair<int, int> bidegree_of(DiffKind k) {
    switch (k) {
        case DiffKind::khovanov_d: return {1, 0};
        case DiffKind::nu: return {0, 2};
        case DiffKind::x: return {0, -2};
        case DiffKind::lee_phi: return {1, 4};
        case DiffKind::phi_plus_d: return {1, 0};
    }
    return {0, 0};
}

KhComplex::KhComplex(const LinkDiagram& d, int64_t generator_cap) : d_(d) {
    const int n = d_.n_crossings();
    if (n > 28) throw CapExceeded("diagram has too many crossings for state enumeration");
    const State n_states = State(1) << n;

    res_.reserve(n_states);
    total_generators_ = 0;
    for (State s = 0; s < n_states; ++s) {
        res_.push_back(resolve(d_, s));
        total_generators_ += int64_t(1) << res_.back().n_circles;
        if (total_generators_ > generator_cap)
            throw CapExceeded("generator cap exceeded (" + std::to_string(generator_cap) +
                              "); raise it explicitly for large diagrams");
    }

    const int w = d_.writhe();
    for (State s = 0; s < n_states; ++s) {
        const int sigma = state_sigma(d_, s);
        const int circles = res_[s].n_circles;
        const int i = (w - sigma) / 2;
        for (uint64_t signs = 0; signs < (uint64_t(1) << circles); ++signs) {
            const int tau = circles - 2 * popcount64(signs);
            const int j = -(sigma + 2 * tau - 3 * w) / 2;
            ChainSlice& sl = slices_[{i, j}];
            sl.i = i;
            sl.j = j;
            sl.generators.push_back({s, signs});
        }
    }
    GenLess less{n, &res_};
    for (auto& [key, sl] : slices_) std::sort(sl.generators.begin(), sl.generators.end(), less);
}

const std::map<std::pair<int, int>, ChainSlice>& KhComplex::reduced_slices() const {
    build_reduced();
    return reduced_;
}

void KhComplex::build_reduced() const {
    if (reduced_built_) return;
    reduced_built_ = true;
    for (const auto& [key, sl] : slices_) {
        for (const EnhancedState& g : sl.generators) {
            if (g.signs >> res_[g.markers].base_circle & 1) continue; // need '+'
            ChainSlice& rsl = reduced_[{key.first, key.second + 1}];
            rsl.i = key.first;
            rsl.j = key.second + 1;
            rsl.generators.push_back(g);
        }
    }
    // source order is sorted already; the filtered order stays sorted
}

void KhComplex::build_ab() const {
    if (ab_built_) return;
    ab_built_ = true;
    for (const auto& [key, sl] : slices_) {
        ChainSlice& ab = ab_slices_[key.first];
        ab.i = key.first;
        ab.generators.insert(ab.generators.end(), sl.generators.begin(), sl.generators.end());
    }
    GenLess less{d_.n_crossings(), &res_};
    for (auto& [key, sl] : ab_slices_) std::sort(sl.generators.begin(), sl.generators.end(), less);
}

int64_t KhComplex::slice_dim(int i, int j) const {
    auto it = slices_.find({i, j});
    return it == slices_.end() ? 0 : static_cast<int64_t>(it->second.generators.size());
}

int KhComplex::find_in(const ChainSlice& sl, const EnhancedState& g) const {
    GenLess less{d_.n_crossings(), &res_};
    auto it = std::lower_bound(sl.generators.begin(), sl.generators.end(), g, less);
    if (it == sl.generators.end() || it->markers != g.markers || it->signs != g.signs)
        throw ComplexError("internal: generator missing from target slice");
    return static_cast<int>(it - sl.generators.begin());
}

int KhComplex::grade_i(State s) const { return (d_.writhe() - state_sigma(d_, s)) / 2; }

int KhComplex::grade_j(State s, uint64_t signs) const {
    const int tau = res_[s].n_circles - 2 * popcount64(signs);
    return -(state_sigma(d_, s) + 2 * tau - 3 * d_.writhe()) / 2;
}

SparseIntMatrix KhComplex::build_matrix(DifferentialKind kind, int i, int j) const {
    if (kind.kind == DiffKind::lee_phi || kind.kind == DiffKind::phi_plus_d) {
        if (kind.mod == 0 || kind.mod == 2 || !is_prime(kind.mod))
            throw ComplexError("invalid ring: this differential needs an odd prime modulus");
    } else if (kind.mod != 0 && !is_prime(kind.mod)) {
        throw ComplexError("invalid ring: modulus must be prime");
    }
    if (kind.kind == DiffKind::phi_plus_d) return ab_matrix(i);

    auto [di, dj] = bidegree_of(kind.kind);
    static const ChainSlice empty_slice;
    auto at = [&](int a, int b) -> const ChainSlice& {
        auto it = slices_.find({a, b});
        return it == slices_.end() ? empty_slice : it->second;
    };
    const ChainSlice& src = at(i, j);
    const ChainSlice& dst = at(i + di, j + dj);
    SparseIntMatrix m;
    m.n_rows = static_cast<int>(dst.generators.size());
    m.n_cols = static_cast<int>(src.generators.size());
    if (m.n_rows == 0 || m.n_cols == 0) return m;

    const int n = d_.n_crossings();
    for (int col = 0; col < m.n_cols; ++col) {
        const EnhancedState& g = src.generators[col];
        const Resolution& rs = res_[g.markers];

        if (kind.kind == DiffKind::nu) {
            for (int k = 0; k < rs.n_circles; ++k) {
                if (g.signs >> k & 1) continue; // need '+'
                EnhancedState h{g.markers, g.signs | (uint64_t(1) << k)};
                m.add(find_in(dst, h), col, 1);
            }
            continue;
        }
        if (kind.kind == DiffKind::x) {
            const int bc = rs.base_circle;
            if (g.signs >> bc & 1) { // '-' on the base circle flips to '+'
                EnhancedState h{g.markers, g.signs & ~(uint64_t(1) << bc)};
                m.add(find_in(dst, h), col, 1);
            }
            continue;
        }

        for (int c = 0; c < n; ++c) {
            if (g.markers >> c & 1) continue; // need a positive marker to flip
            Transition tr = make_transition(d_, res_, g.markers, c);
            const State s2 = g.markers | (State(1) << c);
            const int val = (sign_exponent(g.markers, c) & 1) ? -1 : 1;

            uint64_t base = 0; // unaffected circles keep their signs
            for (int k = 0; k < rs.n_circles; ++k) {
                if (k == tr.a1 || k == tr.a2) continue;
                if (g.signs >> k & 1) base |= uint64_t(1) << tr.map_s_to_t[k];
            }
            const bool n1 = g.signs >> tr.a1 & 1;
            const bool n2 = g.signs >> tr.a2 & 1;

            if (kind.kind == DiffKind::khovanov_d) {
                if (tr.join) {
                    if (n1 && n2) // both negative -> negative
                        m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z1)}), col, val);
                    else if (n1 != n2) // mixed -> positive
                        m.add(find_in(dst, {s2, base}), col, val);
                } else {
                    if (!n1) { // positive splits into two positives
                        m.add(find_in(dst, {s2, base}), col, val);
                    } else { // negative splits into mixed pairs, both ways
                        m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z1)}), col, val);
                        m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z2)}), col, val);
                    }
                }
            } else { // lee_phi
                if (tr.join) {
                    if (!n1 && !n2) // both positive -> negative
                        m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z1)}), col, val);
                } else {
                    if (!n1) // positive splits into two negatives
                        m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z1) | (uint64_t(1) << tr.z2)}),
                              col, val);
                }
            }
        }
    }
    return m;
}

SparseIntMatrix KhComplex::reduced_matrix(int i, int jt) const {
    build_reduced();
    static const ChainSlice empty_slice;
    auto at = [&](int a, int b) -> const ChainSlice& {
        auto it = reduced_.find({a, b});
        return it == reduced_.end() ? empty_slice : it->second;
    };
    const ChainSlice& src = at(i, jt);
    const ChainSlice& dst = at(i + 1, jt);
    SparseIntMatrix m;
    m.n_rows = static_cast<int>(dst.generators.size());
    m.n_cols = static_cast<int>(src.generators.size());
    if (m.n_rows == 0 || m.n_cols == 0) return m;

    const int n = d_.n_crossings();
    for (int col = 0; col < m.n_cols; ++col) {
        const EnhancedState& g = src.generators[col];
        const Resolution& rs = res_[g.markers];
        for (int c = 0; c < n; ++c) {
            if (g.markers >> c & 1) continue;
            Transition tr = make_transition(d_, res_, g.markers, c);
            const State s2 = g.markers | (State(1) << c);
            const int val = (sign_exponent(g.markers, c) & 1) ? -1 : 1;
            uint64_t base = 0;
            for (int k = 0; k < rs.n_circles; ++k) {
                if (k == tr.a1 || k == tr.a2) continue;
                if (g.signs >> k & 1) base |= uint64_t(1) << tr.map_s_to_t[k];
            }
            const bool n1 = g.signs >> tr.a1 & 1;
            const bool n2 = g.signs >> tr.a2 & 1;
            auto emit = [&](uint64_t signs) {
                // the subcomplex is closed under d; targets stay base-positive
                m.add(find_in(dst, {s2, signs}), col, val);
            };
            if (tr.join) {
                if (n1 && n2)
                    emit(base | (uint64_t(1) << tr.z1));
                else if (n1 != n2)
                    emit(base);
            } else {
                if (!n1) {
                    emit(base);
                } else {
                    emit(base | (uint64_t(1) << tr.z1));
                    emit(base | (uint64_t(1) << tr.z2));
                }
            }
        }
    }
    return m;
}

std::vector<int> KhComplex::ab_i_support() const {
    build_ab();
    std::vector<int> out;
    for (const auto& [i, sl] : ab_slices_) out.push_back(i);
    return out;
}

int64_t KhComplex::ab_dim(int i) const {
    build_ab();
    auto it = ab_slices_.find(i);
    return it == ab_slices_.end() ? 0 : static_cast<int64_t>(it->second.generators.size());
}

SparseIntMatrix KhComplex::ab_matrix(int i) const {
    build_ab();
    static const ChainSlice empty_slice;
    auto at = [&](int a) -> const ChainSlice& {
        auto it = ab_slices_.find(a);
        return it == ab_slices_.end() ? empty_slice : it->second;
    };
    const ChainSlice& src = at(i);
    const ChainSlice& dst = at(i + 1);
    SparseIntMatrix m;
    m.n_rows = static_cast<int>(dst.generators.size());
    m.n_cols = static_cast<int>(src.generators.size());
    if (m.n_rows == 0 || m.n_cols == 0) return m;

    const int n = d_.n_crossings();
    for (int col = 0; col < m.n_cols; ++col) {
        const EnhancedState& g = src.generators[col]; // bit = label b
        const Resolution& rs = res_[g.markers];
        for (int c = 0; c < n; ++c) {
            if (g.markers >> c & 1) continue;
            Transition tr = make_transition(d_, res_, g.markers, c);
            const State s2 = g.markers | (State(1) << c);
            const int val = (sign_exponent(g.markers, c) & 1) ? -1 : 1;
            uint64_t base = 0;
            for (int k = 0; k < rs.n_circles; ++k) {
                if (k == tr.a1 || k == tr.a2) continue;
                if (g.signs >> k & 1) base |= uint64_t(1) << tr.map_s_to_t[k];
            }
            const bool b1 = g.signs >> tr.a1 & 1;
            const bool b2 = g.signs >> tr.a2 & 1;
            if (tr.join) {
                if (b1 != b2) continue; // mixed labels vanish
                if (!b1) { // a,a -> a with +-2
                    m.add(find_in(dst, {s2, base}), col, 2 * val);
                } else { // b,b -> b with -+2
                    m.add(find_in(dst, {s2, base | (uint64_t(1) << tr.z1)}), col, -2 * val);
                }
            } else {
                // splits copy the label onto both circles with +-1
                uint64_t signs = base;
                if (b1) signs |= (uint64_t(1) << tr.z1) | (uint64_t(1) << tr.z2);
                m.add(find_in(dst, {s2, signs}), col, val);
            }
        }
    }
    return m;
}

int incidence(const LinkDiagram& d, const EnhancedState& s1, const EnhancedState& s2) {
    const State diff = s1.markers ^ s2.markers;
    // condition I: markers differ at exactly one crossing, + in S1, - in S2
    if (__builtin_popcount(diff) != 1) return 0;
    const int c = __builtin_ctz(diff);
    if ((s1.markers >> c & 1) || !(s2.markers >> c & 1)) return 0;

    Resolution r1 = resolve(d, s1.markers);
    Resolution r2 = resolve(d, s2.markers);
    const Crossing& x = d.crossing(c);
    const int a1 = r1.circle_of_edge[x.slot[0]];
    const int a2 = r1.circle_of_edge[x.slot[2]];
    const int z1 = r2.circle_of_edge[x.slot[0]];
    const int z2 = r2.circle_of_edge[x.slot[1]];
    const bool join = a1 != a2;

    // condition II: common circles carry the same signs
    std::vector<int> map_s_to_t(r1.n_circles, -1);
    for (int e = 0; e < d.n_edges(); ++e) map_s_to_t[r1.circle_of_edge[e]] = r2.circle_of_edge[e];
    const int ec1 = r1.n_circles - d.free_loops();
    const int ec2 = r2.n_circles - d.free_loops();
    for (int f = 0; f < d.free_loops(); ++f) map_s_to_t[ec1 + f] = ec2 + f;
    for (int k = 0; k < r1.n_circles; ++k) {
        if (k == a1 || k == a2) continue;
        if ((s1.signs >> k & 1) != (s2.signs >> map_s_to_t[k] & 1)) return 0;
    }

    const bool n1 = s1.signs >> a1 & 1;
    const bool n2 = s1.signs >> a2 & 1;
    bool ok = false;
    if (join) {
        const bool nz = s2.signs >> z1 & 1;
        ok = (n1 && n2 && nz) || (n1 != n2 && !nz);
    } else {
        const bool m1 = s2.signs >> z1 & 1;
        const bool m2 = s2.signs >> z2 & 1;
        ok = (!n1 && !m1 && !m2) || (n1 && m1 != m2);
    }
    if (!ok) return 0;
    return (__builtin_popcount(s1.markers >> (c + 1)) & 1) ? -1 : 1;
}

} // namespace kh
