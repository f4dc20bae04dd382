#include "kh/invariants.hpp"

#include <algorithm>
#include <sstream>

namespace kh {

int64_t HomologyTable::total_rank() const {
    int64_t r = 0;
    for (const auto& [ij, g] : groups) r += g.rank;
    return r;
}

bool HomologyTable::has_torsion() const {
    for (const auto& [ij, g] : groups)
        if (!g.torsion.empty()) return true;
    return false;
}

bool HomologyTable::torsion_two_power_only() const {
    for (const auto& [ij, g] : groups)
        if (!g.torsion_only_prime(2)) return false;
    return true;
}

void BigradedPoly::add(int ti, int qj, int64_t v) {
    if (v == 0) return;
    auto it = c.find({ti, qj});
    if (it == c.end()) {
        c.emplace(std::make_pair(ti, qj), v);
    } else {
        it->second += v;
        if (it->second == 0) c.erase(it);
    }
}

bool BigradedPoly::nonnegative() const {
    for (const auto& [k, v] : c)
        if (v < 0) return false;
    return true;
}

std::string BigradedPoly::to_string() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c) {
        if (!first) os << (v >= 0 ? " + " : " - ");
        else if (v < 0) os << "-";
        first = false;
        int64_t a = std::abs(v);
        bool named = false;
        if (a != 1 || (k.first == 0 && k.second == 0)) {
            os << a;
            named = true;
        }
        if (k.first != 0) {
            if (named) os << "*";
            os << "t";
            if (k.first != 1) os << "^" << k.first;
            named = true;
        }
        if (k.second != 0) {
            if (named) os << "*";
            os << "q";
            if (k.second != 1) os << "^" << k.second;
        }
    }
    return os.str();
}

BigradedPoly mul(const BigradedPoly& a, const BigradedPoly& b) {
    BigradedPoly out;
    for (const auto& [ka, va] : a.c)
        for (const auto& [kb, vb] : b.c) out.add(ka.first + kb.first, ka.second + kb.second, va * vb);
    return out;
}

BigradedPoly sub(const BigradedPoly& a, const BigradedPoly& b) {
    BigradedPoly out = a;
    for (const auto& [k, v] : b.c) out.add(k.first, k.second, -v);
    return out;
}

std::optional<BigradedPoly> divide_exact(const BigradedPoly& a, const BigradedPoly& b) {
    if (b.zero()) return std::nullopt;
    if (a.zero()) return BigradedPoly{};
    // exact quotient support is pinned by the factor supports (Z[t,q] has no
    // zero divisors, so extreme layers cannot cancel)
    auto bounds = [](const BigradedPoly& p) {
        int tmin = p.c.begin()->first.first, tmax = tmin;
        int qmin = p.c.begin()->first.second, qmax = qmin;
        for (const auto& [k, v] : p.c) {
            (void)v;
            tmin = std::min(tmin, k.first);
            tmax = std::max(tmax, k.first);
            qmin = std::min(qmin, k.second);
            qmax = std::max(qmax, k.second);
        }
        return std::array<int, 4>{tmin, tmax, qmin, qmax};
    };
    auto ab = bounds(a), bb = bounds(b);
    BigradedPoly rem = a, quot;
    auto lead = std::prev(b.c.end()); // largest (t, q)
    while (!rem.zero()) {
        auto rl = std::prev(rem.c.end());
        if (rl->second % lead->second != 0) return std::nullopt;
        int dt = rl->first.first - lead->first.first;
        int dq = rl->first.second - lead->first.second;
        if (dt < ab[0] - bb[0] || dt > ab[1] - bb[1] || dq < ab[2] - bb[2] || dq > ab[3] - bb[3])
            return std::nullopt;
        int64_t f = rl->second / lead->second;
        quot.add(dt, dq, f);
        for (const auto& [k, v] : b.c) rem.add(k.first + dt, k.second + dq, -v * f);
        // the leading term must strictly decrease
        if (!rem.zero() && !(std::prev(rem.c.end())->first < rl->first)) return std::nullopt;
    }
    return quot;
}

void LaurentPoly::add(int qj, int64_t v) {
    if (v == 0) return;
    auto it = c.find(qj);
    if (it == c.end()) {
        c.emplace(qj, v);
    } else {
        it->second += v;
        if (it->second == 0) c.erase(it);
    }
}

int64_t LaurentPoly::at(int qj) const {
    auto it = c.find(qj);
    return it == c.end() ? 0 : it->second;
}

std::string LaurentPoly::to_string() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c) {
        if (!first) os << (v >= 0 ? " + " : " - ");
        else if (v < 0) os << "-";
        first = false;
        int64_t a = std::abs(v);
        if (a != 1 || k == 0) os << a;
        if (k != 0) {
            if (a != 1) os << "*";
            os << "q";
            if (k != 1) os << "^" << k;
        }
    }
    return os.str();
}

LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ka, va] : a.c)
        for (const auto& [kb, vb] : b.c) out.add(ka + kb, va * vb);
    return out;
}

std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.zero()) return std::nullopt;
    if (a.zero()) return LaurentPoly{};
    const int qlo = a.c.begin()->first - b.c.begin()->first;      // smallest quotient exponent
    const int qhi = a.c.rbegin()->first - b.c.rbegin()->first;    // largest quotient exponent
    LaurentPoly rem = a, quot;
    auto lead = std::prev(b.c.end());
    while (!rem.zero()) {
        auto rl = std::prev(rem.c.end());
        if (rl->second % lead->second != 0) return std::nullopt;
        int dq = rl->first - lead->first;
        if (dq < qlo || dq > qhi) return std::nullopt;
        int64_t f = rl->second / lead->second;
        quot.add(dq, f);
        for (const auto& [k, v] : b.c) rem.add(k + dq, -v * f);
        if (!rem.zero() && std::prev(rem.c.end())->first >= rl->first) return std::nullopt;
    }
    return quot;
}

std::string to_string(HClass h) {
    switch (h) {
        case HClass::H_slim: return "H-slim";
        case HClass::H_thin: return "H-thin";
        case HClass::H_thick: return "H-thick";
    }
    return "?";
}

std::string to_string(TClass t) {
    switch (t) {
        case TClass::T_thin: return "T-thin";
        case TClass::WT_thin: return "WT-thin";
        case TClass::T_rich: return "T-rich";
        case TClass::T_thick: return "T-thick";
    }
    return "?";
}

BigradedPoly khovanov_polynomial(const HomologyTable& t) {
    BigradedPoly p;
    for (const auto& [ij, g] : t.groups) p.add(ij.first, ij.second, g.rank);
    return p;
}

LaurentPoly graded_euler(const HomologyTable& t) {
    LaurentPoly p;
    for (const auto& [ij, g] : t.groups) p.add(ij.second, (ij.first & 1) ? -g.rank : g.rank);
    return p;
}

LaurentPoly jones_reduced(const HomologyTable& t) {
    LaurentPoly k = graded_euler(t);
    LaurentPoly qq;
    qq.add(1, 1);
    qq.add(-1, 1);
    if (k.zero()) return {};
    auto j = divide_exact(k, qq);
    if (!j) throw InvariantError("K_L(q) is not divisible by q + 1/q");
    if (t.reduced) {
        LaurentPoly jr;
        for (const auto& [ij, g] : *t.reduced) jr.add(ij.second, (ij.first & 1) ? -g.rank : g.rank);
        if (!(jr == *j))
            throw InvariantError("reduced Euler characteristic disagrees with K_L/(q+1/q): " +
                                 jr.to_string() + " vs " + j->to_string());
    }
    return *j;
}

bool jones_alternating(const LaurentPoly& jones) {
    if (jones.zero()) return true;
    int gamma = ((jones.c.begin()->first % 2) + 2) % 2;
    int eps = 0;
    for (const auto& [e, v] : jones.c) {
        if (((e % 2) + 2) % 2 != gamma) return false; // mixed parity
        int k = (e - gamma) / 2;
        int s = (v > 0 ? 1 : -1) * ((k % 2 == 0) ? 1 : -1);
        if (eps == 0)
            eps = s;
        else if (s != eps)
            return false;
    }
    return true;
}

int64_t determinant(const LaurentPoly& jones) {
    if (jones_alternating(jones)) {
        int64_t sum = 0;
        for (const auto& [e, v] : jones.c) sum += std::abs(v);
        return sum;
    }
    // exact evaluation at q = sqrt(-1)
    int64_t re = 0, im = 0;
    for (const auto& [e, v] : jones.c) {
        switch (((e % 4) + 4) % 4) {
            case 0: re += v; break;
            case 1: im += v; break;
            case 2: re -= v; break;
            case 3: im -= v; break;
        }
    }
    mpz_class norm = mpz_class(re) * re + mpz_class(im) * im;
    mpz_class root = sqrt(norm);
    if (root * root != norm)
        throw InvariantError("|J(sqrt(-1))| is not an integer");
    return root.get_si();
}

std::set<int> diagonal_support(const HomologyTable& t) {
    std::set<int> out;
    for (const auto& [ij, g] : t.groups)
        if (!g.trivial()) out.insert(2 * ij.first - ij.second);
    return out;
}

HClass h_classify(const HomologyTable& t) {
    std::set<int> supp = diagonal_support(t);
    if (supp.empty()) return HClass::H_slim;
    int lo = *supp.begin(), hi = *supp.rbegin();
    if (hi - lo > 2) return HClass::H_thick;
    // upper diagonal (larger j) is the smaller b = 2i - j
    for (const auto& [ij, g] : t.groups)
        if (2 * ij.first - ij.second == lo && !g.torsion.empty()) return HClass::H_thin;
    return HClass::H_slim;
}

bool modp_thin(const std::map<Bidegree, int64_t>& betti) {
    std::set<int> supp;
    for (const auto& [ij, b] : betti)
        if (b != 0) supp.insert(2 * ij.first - ij.second);
    if (supp.empty()) return true;
    return *supp.rbegin() - *supp.begin() <= 2;
}

namespace {

// table of (i,j) -> rank as a polynomial-like map
std::map<Bidegree, int64_t> rank_table(const HomologyTable& t) {
    std::map<Bidegree, int64_t> h;
    for (const auto& [ij, g] : t.groups)
        if (g.rank != 0) h[ij] = g.rank;
    return h;
}

// exceptional block: for each E subset of {2..m}, a term (t q^2)^{2 sum l_{k,l}}
std::map<int, int64_t> link_block(int m, const std::vector<std::vector<int64_t>>& lk) {
    std::map<int, int64_t> block; // t-exponent e -> coefficient
    const int parts = m - 1;
    for (uint32_t mask = 0; mask < (uint32_t(1) << parts); ++mask) {
        int64_t e = 0;
        for (int k = 0; k < m; ++k) {
            bool k_in = k > 0 && (mask >> (k - 1) & 1);
            if (!k_in) continue;
            for (int l = 0; l < m; ++l) {
                bool l_in = l > 0 && (mask >> (l - 1) & 1);
                if (!l_in) e += lk[k][l];
            }
        }
        block[static_cast<int>(2 * e)] += 1;
    }
    return block;
}

struct TryResult {
    bool ok = false;
    std::map<Bidegree, int64_t> g;
};

TryResult try_shift(const std::map<Bidegree, int64_t>& h, int s, const std::map<int, int64_t>& block) {
    // R = h - q^{s-1}(1+q^2) * block(t q^2)
    std::map<Bidegree, int64_t> r = h;
    for (const auto& [e, coeff] : block) {
        for (int dq : {-1, +1}) {
            Bidegree key{e, s + dq + 2 * e};
            r[key] -= coeff;
            if (r[key] == 0) r.erase(key);
        }
    }
    // R must equal (1 + t q^4) * G with G >= 0
    TryResult out;
    std::map<int, std::map<int, int64_t>> classes; // (j - 4i) -> i -> coeff
    for (const auto& [ij, v] : r) {
        if (v == 0) continue;
        classes[ij.second - 4 * ij.first][ij.first] = v;
    }
    for (const auto& [cls, line] : classes) {
        int64_t carry = 0;
        int prev_i = line.begin()->first - 1;
        for (const auto& [i, v] : line) {
            if (i != prev_i + 1 && carry != 0) return {};
            if (i != prev_i + 1) carry = 0;
            int64_t gi = v - carry;
            if (gi < 0) return {};
            if (gi > 0) out.g[{i, cls + 4 * i}] = gi;
            carry = gi;
            prev_i = i;
        }
        if (carry != 0) return {};
    }
    out.ok = true;
    return out;
}

} // namespace

KnightMove knight_move_decompose(const HomologyTable& t,
                                 const std::optional<std::vector<std::vector<int64_t>>>& linking) {
    KnightMove km;
    const int m = t.m_components;
    std::map<Bidegree, int64_t> h = rank_table(t);
    if (h.empty()) {
        km.ok = false;
        km.reason = "empty rank table";
        return km;
    }
    std::map<int, int64_t> block;
    if (m == 1) {
        block[0] = 1;
    } else if (linking) {
        block = link_block(m, *linking);
    } else {
        km.ok = false;
        km.link_block_checked = false;
        km.reason = "knight-move unchecked (no linking numbers for a multi-component link)";
        return km;
    }

    int min_j = h.begin()->second, max_j = min_j;
    int64_t span = 0;
    for (const auto& [ij, v] : h) {
        min_j = std::min(min_j, ij.second);
        max_j = std::max(max_j, ij.second);
    }
    for (const auto& [e, coeff] : block) span = std::max<int64_t>(span, std::abs(e));

    std::vector<std::pair<int, TryResult>> hits;
    const int lo = min_j - 1 - 2 * static_cast<int>(span);
    const int hi = max_j + 1 + 2 * static_cast<int>(span);
    for (int s = lo; s <= hi; ++s) {
        if (m == 1 && (s % 2) != 0) continue; // knots have even shift
        TryResult res = try_shift(h, s, block);
        if (res.ok) hits.push_back({s, std::move(res)});
    }
    for (const auto& [s, res] : hits) km.candidates.push_back(s);
    if (hits.size() != 1) {
        km.ok = false;
        km.reason = hits.empty() ? "no shift admits a knight-move decomposition"
                                 : "ambiguous decomposition (several shifts fit)";
        return km;
    }
    km.ok = true;
    km.s = hits[0].first;
    km.g = std::move(hits[0].second.g);
    for (const auto& [ij, v] : km.g) km.kh_prime.add(ij.first, ij.second - km.s + 1, v);

    // H-thin tables: Kh' should be a polynomial in t q^2
    bool thin_shape = true;
    std::map<int, int64_t> a;
    for (const auto& [k, v] : km.kh_prime.c) {
        if (k.second != 2 * k.first) {
            thin_shape = false;
            break;
        }
        a[k.first] = v;
    }
    if (thin_shape) km.thin_coeffs = std::move(a);
    return km;
}

TClass classify_torsion(const HomologyTable& t, const KnightMove& km, std::string* reason) {
    auto why = [&](const std::string& r) {
        if (reason) *reason = r;
    };
    if (!t.torsion_two_power_only()) {
        why("torsion of order other than a power of 2 is present");
        return TClass::T_thick;
    }
    if (!km.ok) {
        why("knight-move decomposition failed: " + km.reason);
        return TClass::T_thick;
    }
    // compare t_2 / T_2 at (i, j) with g^{i-1, j-2}
    std::set<Bidegree> keys;
    for (const auto& [ij, g] : t.groups)
        if (!g.torsion.empty()) keys.insert(ij);
    for (const auto& [ij, v] : km.g) keys.insert({ij.first + 1, ij.second + 2});

    bool only_order_two = true;
    for (const auto& [ij, g] : t.groups)
        for (const auto& [pk, mult] : g.torsion)
            if (pk != 2) only_order_two = false;

    bool t2_matches = true, big_t2_matches = true, excess = false;
    for (const Bidegree& ij : keys) {
        int64_t pair_value = 0;
        auto git = km.g.find({ij.first - 1, ij.second - 2});
        if (git != km.g.end()) pair_value = git->second;
        int64_t t2 = 0, big_t2 = 0;
        auto hit = t.groups.find(ij);
        if (hit != t.groups.end()) {
            t2 = hit->second.t(2);
            big_t2 = hit->second.T(2);
        }
        if (t2 != pair_value) t2_matches = false;
        if (big_t2 != pair_value) big_t2_matches = false;
        if (big_t2 > pair_value) excess = true;
    }
    if (only_order_two && t2_matches) {
        why("");
        return TClass::T_thin;
    }
    if (big_t2_matches) {
        why("");
        return TClass::WT_thin;
    }
    if (excess) {
        why("");
        return TClass::T_rich;
    }
    why("2-torsion falls short of the knight-move pairing somewhere");
    return TClass::T_thick;
}

TorsionPoly torsion_polynomial(const HomologyTable& t) {
    TorsionPoly tp;
    for (const auto& [ij, g] : t.groups)
        for (const auto& [pk, mult] : g.torsion)
            if (mult != 0) tp.c[{ij.first, pk, ij.second}] = mult;
    return tp;
}

BigradedPoly torsion_poly_two_collapsed(const TorsionPoly& tp) {
    BigradedPoly out;
    for (const auto& [key, mult] : tp.c) {
        auto [i, pk, j] = key;
        int64_t v = pk;
        while (v % 2 == 0) v /= 2;
        if (v == 1) out.add(i, j, mult);
    }
    return out;
}

ThinnessReport classify(const HomologyTable& t,
                        const std::map<int64_t, std::map<Bidegree, int64_t>>& modp_betti,
                        const std::optional<std::vector<std::vector<int64_t>>>& linking) {
    ThinnessReport rep;
    rep.diagonal_support = diagonal_support(t);
    rep.h_class = h_classify(t);
    for (const auto& [p, betti] : modp_betti) rep.mod_p_thin[p] = modp_thin(betti);
    KnightMove km = knight_move_decompose(t, linking);
    rep.t_class = classify_torsion(t, km, &rep.t_reason);
    if (km.ok) {
        rep.s_value = km.s;
        rep.knight_poly = km.kh_prime;
    }
    rep.outside_stated_scope = (t.m_components >= 2 && rep.h_class == HClass::H_thick);
    return rep;
}

} // namespace kh
