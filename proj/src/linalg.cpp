#include "kh/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cstdlib>
#include <set>
#include <sstream>

namespace kh {

int64_t AbelianGroup::T(int64_t p) const {
    int64_t total = 0;
    for (const auto& [pk, mult] : torsion) {
        int64_t v = pk;
        while (v % p == 0) v /= p;
        if (v == 1) total += mult;
    }
    return total;
}

bool AbelianGroup::torsion_only_prime(int64_t p) const {
    for (const auto& [pk, mult] : torsion) {
        (void)mult;
        int64_t v = pk;
        while (v % p == 0) v /= p;
        if (v != 1) return false;
    }
    return true;
}

std::string AbelianGroup::to_string() const {
    std::ostringstream os;
    bool first = true;
    if (rank > 0) {
        os << "Z";
        if (rank > 1) os << "^" << rank;
        first = false;
    }
    for (const auto& [pk, mult] : torsion) {
        for (int64_t i = 0; i < mult; ++i) {
            if (!first) os << " + ";
            os << "Z" << pk;
            first = false;
        }
    }
    if (first) os << "0";
    return os.str();
}

namespace {

// The elimination runs on plain 64-bit integers with checked arithmetic and
// falls back to GMP integers when anything overflows; entries start in
// {-2..2} and generally stay small under unit pivots.
struct ElimOverflow {};

inline int64_t vmul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ElimOverflow{};
    return r;
}
inline int64_t vsub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw ElimOverflow{};
    return r;
}
inline int64_t vneg(int64_t a) {
    if (a == std::numeric_limits<int64_t>::min()) throw ElimOverflow{};
    return -a;
}
inline int64_t vabs(int64_t a) { return a < 0 ? vneg(a) : a; }
inline int64_t vload(const mpz_class& v) {
    if (!v.fits_slong_p()) throw ElimOverflow{};
    return v.get_si();
}
inline mpz_class vmul(const mpz_class& a, const mpz_class& b) { return a * b; }
inline mpz_class vsub(const mpz_class& a, const mpz_class& b) { return a - b; }
inline mpz_class vneg(const mpz_class& a) { return -a; }
inline mpz_class vabs(const mpz_class& a) { return abs(a); }

// Sparse integer elimination working store: rows as ordered maps plus a
// column index. Row and column operations keep both views consistent.
template <class Int>
class Elim {
  public:
    explicit Elim(const SparseIntMatrix& m)
        : n_rows_(m.n_rows), n_cols_(m.n_cols), rows_(m.n_rows), col_rows_(m.n_cols),
          row_active_(m.n_rows, true), col_active_(m.n_cols, true) {
        for (const auto& t : m.entries) {
            if (t.row < 0 || t.row >= n_rows_ || t.col < 0 || t.col >= n_cols_)
                throw LinalgError("triplet out of bounds");
            Int v;
            if constexpr (std::is_same_v<Int, int64_t>)
                v = vload(t.value);
            else
                v = t.value;
            if (v == 0) throw LinalgError("explicit zero triplet");
            auto [it, fresh] = rows_[t.row].emplace(t.col, v);
            if (!fresh) throw LinalgError("duplicate (row,col) triplet");
            (void)it;
            col_rows_[t.col].insert(t.row);
        }
    }

    // Full Smith elimination; returns the diagonal before the divisibility fix.
    std::vector<mpz_class> run_smith() {
        std::vector<mpz_class> diag;
        for (int r = 0; r < n_rows_; ++r) note_row(r);
        for (int c = 0; c < n_cols_; ++c) note_col(c);
        int r, c;
        while (true) {
            melt_singletons(diag);
            if (!find_pivot(r, c)) break;
            settle_pivot(r, c);
            diag.push_back(mpz_class(vabs(rows_[r].at(c))));
            retire(r, c);
        }
        return diag;
    }

  private:
    int n_rows_, n_cols_;
    std::vector<std::map<int, Int>> rows_;
    std::vector<std::set<int>> col_rows_;
    std::vector<char> row_active_, col_active_;
    std::vector<int> row_work_, col_work_; // candidates for unit-singleton pivots
    std::vector<int> live_rows_, live_cols_; // compacted on each pivot search
    bool live_init_ = false;

    void note_row(int r) {
        if (row_active_[r] && rows_[r].size() == 1) row_work_.push_back(r);
    }
    void note_col(int c) {
        if (col_active_[c] && col_rows_[c].size() == 1) col_work_.push_back(c);
    }

    // Unit entries alone in their row or column retire with no fill and no
    // Euclidean work; clearing them cascades through most of a Khovanov
    // boundary matrix.
    bool melt_singletons(std::vector<mpz_class>& diag) {
        bool any = false;
        while (!row_work_.empty() || !col_work_.empty()) {
            if (!row_work_.empty()) {
                int r = row_work_.back();
                row_work_.pop_back();
                if (!row_active_[r] || rows_[r].size() != 1) continue;
                auto [c, v] = *rows_[r].begin();
                if (v != 1 && v != -1) continue;
                std::vector<int> others(col_rows_[c].begin(), col_rows_[c].end());
                for (int r2 : others) {
                    if (r2 == r) continue;
                    Int q = rows_[r2].at(c) / v;
                    row_axpy(r2, r, q);
                }
                diag.push_back(1);
                retire(r, c);
                any = true;
                continue;
            }
            int c = col_work_.back();
            col_work_.pop_back();
            if (!col_active_[c] || col_rows_[c].size() != 1) continue;
            int r = *col_rows_[c].begin();
            const Int v = rows_[r].at(c);
            if (v != 1 && v != -1) continue;
            std::vector<int> others;
            for (const auto& [c2, w] : rows_[r]) {
                (void)w;
                if (c2 != c) others.push_back(c2);
            }
            for (int c2 : others) {
                Int q = rows_[r].at(c2) / v;
                col_axpy(c2, c, q);
            }
            diag.push_back(1);
            retire(r, c);
            any = true;
        }
        return any;
    }

    void row_axpy(int dst, int src, const Int& q) {
        if (q == 0) return;
        for (const auto& [c, v] : rows_[src]) {
            auto it = rows_[dst].find(c);
            if (it == rows_[dst].end()) {
                Int nv = vneg(vmul(q, v));
                if (nv != 0) {
                    rows_[dst].emplace(c, std::move(nv));
                    col_rows_[c].insert(dst);
                }
            } else {
                it->second = vsub(it->second, vmul(q, v));
                if (it->second == 0) {
                    rows_[dst].erase(it);
                    col_rows_[c].erase(dst);
                    note_row(dst);
                    note_col(c);
                }
            }
        }
    }

    void col_axpy(int dst, int src, const Int& q) {
        if (q == 0) return;
        std::vector<int> touched(col_rows_[src].begin(), col_rows_[src].end());
        for (int r : touched) {
            const Int& sv = rows_[r].at(src);
            auto it = rows_[r].find(dst);
            if (it == rows_[r].end()) {
                Int nv = vneg(vmul(q, sv));
                if (nv != 0) {
                    rows_[r].emplace(dst, std::move(nv));
                    col_rows_[dst].insert(r);
                }
            } else {
                it->second = vsub(it->second, vmul(q, sv));
                if (it->second == 0) {
                    rows_[r].erase(it);
                    col_rows_[dst].erase(r);
                    note_row(r);
                    note_col(dst);
                }
            }
        }
    }

    // Markowitz fill, then smallest absolute value, then first in row-count
    // order. Rows are visited by ascending count so the scan can stop once no
    // remaining row can beat the best fill seen.
    bool find_pivot(int& pr, int& pc) {
        // rows never refill once empty, so dead ids can be compacted away
        if (!live_init_) {
            live_init_ = true;
            for (int r = 0; r < n_rows_; ++r)
                if (row_active_[r] && !rows_[r].empty()) live_rows_.push_back(r);
            for (int c = 0; c < n_cols_; ++c)
                if (!col_rows_[c].empty()) live_cols_.push_back(c);
        } else {
            std::erase_if(live_rows_, [&](int r) { return !row_active_[r] || rows_[r].empty(); });
            std::erase_if(live_cols_, [&](int c) { return col_rows_[c].empty(); });
        }
        size_t min_col = 0;
        bool any_col = false;
        for (int c : live_cols_) {
            if (!any_col || col_rows_[c].size() < min_col) min_col = col_rows_[c].size();
            any_col = true;
        }
        if (!any_col) return false;
        // counting buckets by row size keep the scan linear
        size_t max_sz = 0;
        for (int r : live_rows_) max_sz = std::max(max_sz, rows_[r].size());
        std::vector<std::vector<int>> buckets(max_sz + 1);
        for (int r : live_rows_) buckets[rows_[r].size()].push_back(r);
        std::vector<int> order;
        order.reserve(live_rows_.size());
        for (const auto& b : buckets)
            for (int r : b) order.push_back(r);
        bool found = false;
        int64_t best_fill = 0;
        Int best_abs{};
        for (int r : order) {
            int64_t rcnt = static_cast<int64_t>(rows_[r].size());
            if (found && (rcnt - 1) * (static_cast<int64_t>(min_col) - 1) > best_fill) break;
            for (const auto& [c, v] : rows_[r]) {
                int64_t fill = (rcnt - 1) * (static_cast<int64_t>(col_rows_[c].size()) - 1);
                if (found && fill > best_fill) continue;
                Int a = vabs(v);
                if (!found || fill < best_fill || (fill == best_fill && a < best_abs)) {
                    found = true;
                    best_fill = fill;
                    best_abs = a;
                    pr = r;
                    pc = c;
                }
            }
        }
        return found;
    }

    // Clear the pivot row and column with Euclidean steps; the pivot cell may
    // migrate while remainders shrink, which always terminates.
    void settle_pivot(int& r, int& c) {
        while (true) {
            bool moved = false;
            // column: reduce every other entry to a remainder mod the pivot
            while (col_rows_[c].size() > 1) {
                Int p = rows_[r].at(c);
                int other = -1;
                for (int cand : col_rows_[c])
                    if (cand != r) {
                        other = cand;
                        break;
                    }
                Int q = rows_[other].at(c) / p; // truncated
                row_axpy(other, r, q);
                auto it = rows_[other].find(c);
                if (it != rows_[other].end()) {
                    r = other; // smaller remainder becomes the pivot
                    moved = true;
                }
            }
            // row: same with column operations
            while (rows_[r].size() > 1) {
                Int p = rows_[r].at(c);
                int other = -1;
                for (const auto& [cand, v] : rows_[r])
                    if (cand != c) {
                        other = cand;
                        break;
                    }
                Int q = rows_[r].at(other) / p;
                col_axpy(other, c, q);
                if (rows_[r].count(other)) {
                    c = other;
                    moved = true;
                    break; // the new pivot column needs cleaning
                }
            }
            if (!moved && col_rows_[c].size() == 1 && rows_[r].size() == 1) return;
        }
    }

    void retire(int r, int c) {
        rows_[r].clear();
        col_rows_[c].clear();
        row_active_[r] = false;
        col_active_[c] = false;
    }
};

} // namespace

SmithForm smith_normal_form(const SparseIntMatrix& m) {
    std::vector<mpz_class> d;
    try {
        Elim<int64_t> e(m);
        d = e.run_smith();
    } catch (const ElimOverflow&) {
        Elim<mpz_class> e(m);
        d = e.run_smith();
    }
    // enforce the divisibility chain: diag(a,b) ~ diag(gcd, lcm)
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < d.size(); ++i) {
            for (size_t j = i + 1; j < d.size(); ++j) {
                if (d[j] % d[i] == 0) continue;
                mpz_class g = gcd(d[i], d[j]);
                mpz_class l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
                changed = true;
            }
        }
    }
    std::sort(d.begin(), d.end());
    SmithForm out;
    out.invariant_factors = std::move(d);
    return out;
}

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int64_t rank_mod_p(const SparseIntMatrix& m, int64_t p) {
    if (!is_prime(p)) throw LinalgError("rank_mod_p: " + std::to_string(p) + " is not prime");
    const uint64_t up = static_cast<uint64_t>(p);
    std::vector<std::map<int, uint64_t>> rows(m.n_rows);
    std::vector<std::set<int>> col_rows(m.n_cols);
    for (const auto& t : m.entries) {
        mpz_class r = t.value % p;
        if (r < 0) r += p;
        uint64_t v = r.get_ui();
        if (v == 0) continue;
        rows[t.row][t.col] = v;
        col_rows[t.col].insert(t.row);
    }
    int64_t rank = 0;
    std::vector<int> row_work, col_work;
    auto note_row = [&](int r) {
        if (rows[r].size() == 1) row_work.push_back(r);
    };
    auto note_col = [&](int c) {
        if (col_rows[c].size() == 1) col_work.push_back(c);
    };
    auto erase_entry = [&](int r, int c) {
        rows[r].erase(c);
        col_rows[c].erase(r);
        note_row(r);
        note_col(c);
    };
    // a singleton row or column contributes a pivot with no elimination work
    auto melt = [&]() {
        while (!row_work.empty() || !col_work.empty()) {
            if (!row_work.empty()) {
                int r = row_work.back();
                row_work.pop_back();
                if (rows[r].size() != 1) continue;
                int c = rows[r].begin()->first;
                ++rank;
                std::vector<int> others(col_rows[c].begin(), col_rows[c].end());
                rows[r].clear();
                col_rows[c].erase(r);
                for (int r2 : others)
                    if (r2 != r) erase_entry(r2, c);
                continue;
            }
            int c = col_work.back();
            col_work.pop_back();
            if (col_rows[c].size() != 1) continue;
            int r = *col_rows[c].begin();
            ++rank;
            col_rows[c].clear();
            std::vector<int> cols;
            for (const auto& [c2, v] : rows[r]) {
                (void)v;
                if (c2 != c) cols.push_back(c2);
            }
            rows[r].clear();
            for (int c2 : cols) {
                col_rows[c2].erase(r);
                note_col(c2);
            }
        }
    };
    for (int r = 0; r < m.n_rows; ++r) note_row(r);
    for (int c = 0; c < m.n_cols; ++c) note_col(c);
    std::vector<int> order;
    while (true) {
        melt();
        // Markowitz pivot, rows visited by ascending count with early exit
        size_t min_col = 0;
        bool any_col = false;
        for (int c = 0; c < m.n_cols; ++c) {
            if (col_rows[c].empty()) continue;
            if (!any_col || col_rows[c].size() < min_col) min_col = col_rows[c].size();
            any_col = true;
        }
        if (!any_col) break;
        size_t max_sz = 0;
        for (int r = 0; r < m.n_rows; ++r) max_sz = std::max(max_sz, rows[r].size());
        std::vector<std::vector<int>> buckets(max_sz + 1);
        for (int r = 0; r < m.n_rows; ++r)
            if (!rows[r].empty()) buckets[rows[r].size()].push_back(r);
        order.clear();
        for (const auto& b : buckets)
            for (int r : b) order.push_back(r);
        bool found = false;
        int pr = -1, pc = -1;
        int64_t best_fill = 0;
        for (int r : order) {
            int64_t rcnt = static_cast<int64_t>(rows[r].size());
            if (found && (rcnt - 1) * (static_cast<int64_t>(min_col) - 1) > best_fill) break;
            for (const auto& [c, v] : rows[r]) {
                (void)v;
                int64_t fill = (rcnt - 1) * (static_cast<int64_t>(col_rows[c].size()) - 1);
                if (!found || fill < best_fill) {
                    found = true;
                    best_fill = fill;
                    pr = r;
                    pc = c;
                }
            }
        }
        if (!found) break;
        ++rank;
        uint64_t inv = powmod(rows[pr].at(pc), up - 2, up);
        std::vector<int> targets(col_rows[pc].begin(), col_rows[pc].end());
        for (int r : targets) {
            if (r == pr) continue;
            uint64_t factor = mulmod(rows[r].at(pc), inv, up);
            for (const auto& [c, v] : rows[pr]) {
                uint64_t delta = mulmod(factor, v, up);
                auto it = rows[r].find(c);
                uint64_t nv = ((it == rows[r].end() ? 0 : it->second) + up - delta) % up;
                if (nv == 0) {
                    if (it != rows[r].end()) erase_entry(r, c);
                } else {
                    if (it == rows[r].end()) {
                        rows[r][c] = nv;
                        col_rows[c].insert(r);
                    } else {
                        it->second = nv;
                    }
                }
            }
        }
        std::vector<int> pcols;
        for (const auto& [c, v] : rows[pr]) {
            (void)v;
            pcols.push_back(c);
        }
        rows[pr].clear();
        for (int c : pcols) {
            col_rows[c].erase(pr);
            note_col(c);
        }
    }
    return rank;
}

std::map<int64_t, int> factor_prime_powers(const mpz_class& v) {
    if (v <= 1) throw LinalgError("factor_prime_powers needs an integer > 1");
    if (!v.fits_slong_p()) throw LinalgError("torsion order too large to factor: " + v.get_str());
    int64_t n = v.get_si();
    std::map<int64_t, int> out; // p^k -> k (keyed by the prime power value)
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int64_t pk = 1;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            pk *= p;
            ++k;
        }
        out[pk] = k;
    }
    if (n > 1) out[n] = 1;
    return out;
}

AbelianGroup homology_group(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out) {
    if (d_out.n_cols != d_in.n_rows)
        throw LinalgError("homology_group: middle dimensions disagree (" +
                          std::to_string(d_out.n_cols) + " vs " + std::to_string(d_in.n_rows) + ")");
    if (!is_zero(multiply(d_out, d_in)))
        throw LinalgError("homology_group: d_out * d_in is nonzero");
    SmithForm in_snf = smith_normal_form(d_in);
    SmithForm out_snf = smith_normal_form(d_out);
    AbelianGroup g;
    g.rank = d_in.n_rows - out_snf.rank() - in_snf.rank();
    for (const mpz_class& f : in_snf.invariant_factors) {
        if (f == 1) continue;
        for (const auto& [pk, k] : factor_prime_powers(f)) {
            (void)k;
            g.torsion[pk] += 1;
        }
    }
    return g;
}

int64_t betti_mod_p(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out, int64_t p) {
    if (d_out.n_cols != d_in.n_rows)
        throw LinalgError("betti_mod_p: middle dimensions disagree");
    return d_in.n_rows - rank_mod_p(d_in, p) - rank_mod_p(d_out, p);
}

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.n_cols != b.n_rows) throw LinalgError("multiply: shape mismatch");
    std::vector<std::vector<std::pair<int, const mpz_class*>>> a_by_col(a.n_cols);
    for (const auto& t : a.entries) a_by_col[t.col].push_back({t.row, &t.value});
    std::map<std::pair<int, int>, mpz_class> acc;
    for (const auto& t : b.entries)
        for (const auto& [ar, av] : a_by_col[t.row]) acc[{ar, t.col}] += *av * t.value;
    SparseIntMatrix out;
    out.n_rows = a.n_rows;
    out.n_cols = b.n_cols;
    for (auto& [rc, v] : acc)
        if (v != 0) out.entries.push_back({rc.first, rc.second, std::move(v)});
    return out;
}

SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) throw LinalgError("add: shape mismatch");
    std::map<std::pair<int, int>, mpz_class> acc;
    for (const auto& t : a.entries) acc[{t.row, t.col}] += t.value;
    for (const auto& t : b.entries) acc[{t.row, t.col}] += t.value;
    SparseIntMatrix out;
    out.n_rows = a.n_rows;
    out.n_cols = a.n_cols;
    for (auto& [rc, v] : acc)
        if (v != 0) out.entries.push_back({rc.first, rc.second, std::move(v)});
    return out;
}

bool is_zero(const SparseIntMatrix& m) {
    for (const auto& t : m.entries)
        if (t.value != 0) return false;
    return true;
}

bool is_zero_mod(const SparseIntMatrix& m, int64_t p) {
    for (const auto& t : m.entries)
        if (t.value % p != 0) return false;
    return true;
}

bool is_identity_mod(const SparseIntMatrix& m, int64_t p) {
    if (m.n_rows != m.n_cols) return false;
    std::map<std::pair<int, int>, mpz_class> acc;
    for (const auto& t : m.entries) acc[{t.row, t.col}] += t.value;
    for (int i = 0; i < m.n_rows; ++i) {
        auto it = acc.find({i, i});
        mpz_class v = it == acc.end() ? mpz_class(0) : it->second;
        if ((v - 1) % p != 0) return false;
    }
    for (const auto& [rc, v] : acc)
        if (rc.first != rc.second && v % p != 0) return false;
    return true;
}

std::string to_triplet_text(const SparseIntMatrix& m) {
    std::ostringstream os;
    os << m.n_rows << ' ' << m.n_cols << ';';
    for (const auto& t : m.entries) os << ' ' << t.row << ' ' << t.col << ' ' << t.value << ';';
    return os.str();
}

SparseIntMatrix from_triplet_text(const std::string& text) {
    SparseIntMatrix m;
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ';', ' ');
    std::istringstream is(cleaned);
    if (!(is >> m.n_rows >> m.n_cols)) throw LinalgError("triplet text: missing dimensions");
    int64_t r, c;
    std::string v;
    while (is >> r >> c >> v)
        m.entries.push_back({static_cast<int>(r), static_cast<int>(c), mpz_class(v)});
    return m;
}

} // namespace kh
