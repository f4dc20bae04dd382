#ifndef KH_INVARIANTS_HPP
#define KH_INVARIANTS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/linalg.hpp"

namespace kh {

struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Bidegree = std::pair<int, int>; // (i, j)

struct HomologyTable {
    std::map<Bidegree, AbelianGroup> groups;
    std::optional<std::map<Bidegree, AbelianGroup>> reduced; // keyed by (i, jt)
    LinkMetadata meta;
    int m_components = 1;

    int64_t total_rank() const;
    bool has_torsion() const;
    // true when every torsion order is a power of two
    bool torsion_two_power_only() const;
};

// Laurent polynomial in t and q with integer coefficients
struct BigradedPoly {
    std::map<std::pair<int, int>, int64_t> c; // (t exp, q exp) -> coeff

    void add(int ti, int qj, int64_t v);
    bool zero() const { return c.empty(); }
    bool nonnegative() const;
    bool operator==(const BigradedPoly& o) const { return c == o.c; }
    std::string to_string() const;
};

BigradedPoly mul(const BigradedPoly& a, const BigradedPoly& b);
BigradedPoly sub(const BigradedPoly& a, const BigradedPoly& b);
// exact division; nullopt when the division leaves a remainder
std::optional<BigradedPoly> divide_exact(const BigradedPoly& a, const BigradedPoly& b);

// Laurent polynomial in q only
struct LaurentPoly {
    std::map<int, int64_t> c;

    void add(int qj, int64_t v);
    bool zero() const { return c.empty(); }
    int64_t at(int qj) const;
    bool operator==(const LaurentPoly& o) const { return c == o.c; }
    std::string to_string() const;
};

LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b);
std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b);

struct TorsionPoly {
    // (t exp i, prime power p^k, q exp j) -> multiplicity
    std::map<std::tuple<int, int64_t, int>, int64_t> c;
    bool zero() const { return c.empty(); }
    bool operator==(const TorsionPoly& o) const { return c == o.c; }
};

enum class HClass { H_slim, H_thin, H_thick };
enum class TClass { T_thin, WT_thin, T_rich, T_thick };
std::string to_string(HClass h);
std::string to_string(TClass t);

struct KnightMove {
    bool ok = false;
    int s = 0;                       // q-shift; even for knots
    BigradedPoly kh_prime;           // Kh' of the decomposition
    std::map<Bidegree, int64_t> g;   // g^{i,j}: pair multiplicities in table coordinates
    bool link_block_checked = true;  // false when linking numbers were unavailable
    std::vector<int> candidates;     // all shifts that admit a decomposition
    std::string reason;              // set when !ok
    // for H-thin tables: Kh' = sum a_i (t q^2)^i
    std::optional<std::map<int, int64_t>> thin_coeffs;
};

struct ThinnessReport {
    std::set<int> diagonal_support; // values of b = 2i - j
    HClass h_class = HClass::H_thick;
    std::map<int64_t, bool> mod_p_thin;
    TClass t_class = TClass::T_thick;
    std::string t_reason;
    std::optional<int> s_value;
    std::optional<BigradedPoly> knight_poly;
    bool outside_stated_scope = false; // H-thick link: taxonomy applied anyway
};

BigradedPoly khovanov_polynomial(const HomologyTable& t);

// K_L(q) = sum (-1)^i q^j h^{i,j}
LaurentPoly graded_euler(const HomologyTable& t);

// J_L = K_L / (q + 1/q); also checks the reduced table's Euler characteristic
// when one is present. Throws on non-divisibility.
LaurentPoly jones_reduced(const HomologyTable& t);

// sum |c_i| for alternating pure-parity J; |J(sqrt(-1))| in general
int64_t determinant(const LaurentPoly& jones);

// true when J = sum c_i q^{2i+gamma} and (-1)^{i-k} c_i c_k >= 0 for all i,k
bool jones_alternating(const LaurentPoly& jones);

std::set<int> diagonal_support(const HomologyTable& t);
HClass h_classify(const HomologyTable& t);
// mod-p thinness from a mod-p Betti table
bool modp_thin(const std::map<Bidegree, int64_t>& betti);

KnightMove knight_move_decompose(const HomologyTable& t,
                                 const std::optional<std::vector<std::vector<int64_t>>>& linking);

TClass classify_torsion(const HomologyTable& t, const KnightMove& km, std::string* reason = nullptr);

TorsionPoly torsion_polynomial(const HomologyTable& t);

// Kh_T with every Q_{2^k} set to q, as a bigraded polynomial in (t, q)
BigradedPoly torsion_poly_two_collapsed(const TorsionPoly& tp);

ThinnessReport classify(const HomologyTable& t,
                        const std::map<int64_t, std::map<Bidegree, int64_t>>& modp_betti,
                        const std::optional<std::vector<std::vector<int64_t>>>& linking);

} // namespace kh

#endif
