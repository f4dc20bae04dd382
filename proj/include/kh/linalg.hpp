#ifndef KH_LINALG_HPP
#define KH_LINALG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace kh {

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Triplet-format integer matrix. No duplicate (row,col) pairs, no explicit zeros.
struct SparseIntMatrix {
    int n_rows = 0;
    int n_cols = 0;
    struct Triplet {
        int row;
        int col;
        mpz_class value;
    };
    std::vector<Triplet> entries;

    void add(int r, int c, mpz_class v) {
        if (v != 0) entries.push_back({r, c, std::move(v)});
    }
    size_t nnz() const { return entries.size(); }
};

struct SmithForm {
    std::vector<mpz_class> invariant_factors; // d1 | d2 | ... | dr, all positive
    int64_t rank() const { return static_cast<int64_t>(invariant_factors.size()); }
};

// rank + primary-decomposition torsion, torsion keyed by prime power p^k.
struct AbelianGroup {
    int64_t rank = 0;
    std::map<int64_t, int64_t> torsion;

    bool trivial() const { return rank == 0 && torsion.empty(); }
    bool torsion_free() const { return torsion.empty(); }
    // t_{p^k}
    int64_t t(int64_t prime_power) const {
        auto it = torsion.find(prime_power);
        return it == torsion.end() ? 0 : it->second;
    }
    // T_p = sum over k of t_{p^k}
    int64_t T(int64_t p) const;
    // true if every torsion order is a power of the given prime
    bool torsion_only_prime(int64_t p) const;
    bool operator==(const AbelianGroup& o) const { return rank == o.rank && torsion == o.torsion; }
    std::string to_string() const; // e.g. "Z^2 + Z2 + Z4"
};

SmithForm smith_normal_form(const SparseIntMatrix& m);

// rank over the field with p elements; p must be prime (p = 2 allowed)
int64_t rank_mod_p(const SparseIntMatrix& m, int64_t p);

// homology at the middle slice of  d_in: A -> B,  d_out: B -> C
AbelianGroup homology_group(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out);

int64_t betti_mod_p(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out, int64_t p);

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b);
SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b);
bool is_zero(const SparseIntMatrix& m);
bool is_zero_mod(const SparseIntMatrix& m, int64_t p);
// true when m is the identity modulo p
bool is_identity_mod(const SparseIntMatrix& m, int64_t p);

bool is_prime(int64_t p);
// factors a positive integer into prime powers p^k -> k ... (value -> exponent per prime)
std::map<int64_t, int> factor_prime_powers(const mpz_class& v);

// `rows cols; r c v; ...` debug format
std::string to_triplet_text(const SparseIntMatrix& m);
SparseIntMatrix from_triplet_text(const std::string& text);

} // namespace kh

#endif
