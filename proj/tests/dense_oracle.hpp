#ifndef KH_TESTS_DENSE_ORACLE_HPP
#define KH_TESTS_DENSE_ORACLE_HPP

// Naive dense Smith normal form by elementary operations, plus a homology
// oracle built on it. Deliberately independent of the sparse elimination in
// the library: no pivot strategy, dense storage, direct divisibility fix.

#include <algorithm>
#include <vector>

#include "kh/linalg.hpp"

namespace oracle {

inline std::vector<mpz_class> dense_snf(const kh::SparseIntMatrix& m) {
    int R = m.n_rows, C = m.n_cols;
    std::vector<std::vector<mpz_class>> a(R, std::vector<mpz_class>(C, 0));
    for (const auto& t : m.entries) a[t.row][t.col] = t.value;
    std::vector<mpz_class> diag;
    int top = 0;
    while (top < R && top < C) {
        int pr = -1, pc = -1;
        for (int r = top; r < R; ++r)
            for (int c = top; c < C; ++c)
                if (a[r][c] != 0 && (pr < 0 || abs(a[r][c]) < abs(a[pr][pc]))) {
                    pr = r;
                    pc = c;
                }
        if (pr < 0) break;
        std::swap(a[top], a[pr]);
        for (int r = 0; r < R; ++r) std::swap(a[r][top], a[r][pc]);
        bool clean = true;
        for (int r = top + 1; r < R; ++r) {
            mpz_class q = a[r][top] / a[top][top];
            for (int c = top; c < C; ++c) a[r][c] -= q * a[top][c];
            if (a[r][top] != 0) clean = false;
        }
        for (int c = top + 1; c < C; ++c) {
            mpz_class q = a[top][c] / a[top][top];
            for (int r = top; r < R; ++r) a[r][c] -= q * a[r][top];
            if (a[top][c] != 0) clean = false;
        }
        if (!clean) continue;
        diag.push_back(abs(a[top][top]));
        ++top;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < diag.size(); ++i)
            for (size_t j = i + 1; j < diag.size(); ++j) {
                if (diag[j] % diag[i] == 0) continue;
                mpz_class g = gcd(diag[i], diag[j]);
                mpz_class l = diag[i] / g * diag[j];
                diag[i] = g;
                diag[j] = l;
                changed = true;
            }
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

inline kh::AbelianGroup dense_homology(const kh::SparseIntMatrix& d_in,
                                       const kh::SparseIntMatrix& d_out) {
    std::vector<mpz_class> in_f = dense_snf(d_in);
    std::vector<mpz_class> out_f = dense_snf(d_out);
    kh::AbelianGroup g;
    g.rank = d_in.n_rows - static_cast<int64_t>(in_f.size()) - static_cast<int64_t>(out_f.size());
    for (const mpz_class& f : in_f) {
        if (f == 1) continue;
        for (const auto& [pk, k] : kh::factor_prime_powers(f)) {
            (void)k;
            g.torsion[pk] += 1;
        }
    }
    return g;
}

} // namespace oracle

#endif
