#ifndef KH_VERIFY_HPP
#define KH_VERIFY_HPP

#include <string>
#include <vector>

#include "kh/complex.hpp"
#include "kh/diagram.hpp"
#include "kh/invariants.hpp"
#include "kh/pipeline.hpp"

namespace kh {

struct CheckResult {
    std::string check;
    std::string subject;
    bool passed = false;
    std::string detail; // nonempty when failed: first counterexample or mismatch

    static CheckResult pass(std::string check, std::string subject, std::string note = "") {
        return {std::move(check), std::move(subject), true, std::move(note)};
    }
    static CheckResult fail(std::string check, std::string subject, std::string why) {
        return {std::move(check), std::move(subject), false, std::move(why)};
    }
};

std::string csv_header();
std::string csv_line(const CheckResult& r);

// d^2 = 0, nu^2 = 0 and X^2 = 0, d nu = nu d (mod 2), d X = X d (over Z),
// nu X + X nu = id (mod 2), Phi^2 = 0 and Phi d + d Phi = 0 (mod 3 and 5).
std::vector<CheckResult> check_chain_identities(const KhComplex& kc, const std::string& subject);

// Theorem-level structure of the Z_2 homology: per-column alternating sums of
// mod-2 Betti numbers vanish; when the total mod-2 dimension is at most
// `rep_cap`, homology classes are lifted to cycles and the induced nu-bar
// differential is verified acyclic directly.
std::vector<CheckResult> check_z2_exactness(const KhComplex& kc, const std::string& subject,
                                            int64_t rep_cap = 2000);

// h_2 on the two diagonals of an alternating link agree columnwise.
CheckResult check_z2_equal_diagonals(const std::map<Bidegree, int64_t>& betti2, int sigma,
                                     int calibration, const std::string& subject);

// the sign-sequence cube complex used in the acyclicity lemma
struct CubeComplexGn {
    int n = 0;
    std::vector<int> ks;                  // k = -n, -n+2, ..., n
    std::vector<int64_t> dims;            // binomial(n, (n+k)/2)
    std::vector<SparseIntMatrix> mu;      // G^k -> G^{k+2}
};
CubeComplexGn build_gn(int n);
CheckResult check_gn_acyclic(int n);

// dim over Z_p of the (Phi+d)-homology; equal to 2^m for H-slim links.
CheckResult check_lee_dimension(const KhComplex& kc, int64_t p, const std::string& subject,
                                bool assert_value);

CheckResult check_theorem_A(const HomologyTable& t, HClass h, const std::string& subject);

// H-slim => WT-thin; alternating non-exceptional entries have 2-torsion,
// d(L) >= 2^{m-1} with equality only for the exceptional list, and total
// rank > 2^m.
std::vector<CheckResult> check_theorem_B(const HomologyTable& t, const ThinnessReport& rep,
                                         const std::string& subject);

// support sits on the (sigma +- 1)-diagonals after the one-time calibration
CheckResult check_diagonal_support(const HomologyTable& t, int sigma, int calibration,
                                   const std::string& subject);

// breadth of J is 2n for a reduced alternating diagram of a prime non-split
// link, with no gaps unless the link is a (2,k)-torus link
CheckResult check_jones_breadth(const LaurentPoly& jones, int n_crossings, bool torus2,
                                const std::string& subject);

// reduced homology occupies exactly one diagonal less than the standard one
CheckResult check_reduced_diagonals(const HomologyTable& t, const std::string& subject);

// an H-thin link has an alternating Jones polynomial in the precise sense
CheckResult check_hthin_alternating_jones(const LaurentPoly& jones, HClass h,
                                          const std::string& subject);

// |J(1)| = 2^{m-1}
CheckResult check_jones_at_one(const LaurentPoly& jones, int m, const std::string& subject);

// Kauffman bracket state sum; independent of the chain complex machinery.
LaurentPoly oracle_jones(const LinkDiagram& d);

CheckResult check_euler_vs_oracle(const HomologyTable& t, const LinkDiagram& d,
                                  const std::string& subject);

// equal homology tables for two diagrams of the same link
CheckResult check_invariance(const HomologyTable& a, const HomologyTable& b,
                             const std::string& subject);

// the diagonal-sign calibration fixed on the right trefoil (sigma = -2);
// +1 means support = {sigma - 1, sigma + 1} in b = 2i - j coordinates
int diagonal_calibration();

struct CensusComputation {
    std::string name;
    LinkMetadata meta;
    int n_crossings = 0;
    int m_components = 1;
    HomologyTable table;
    ThinnessReport report;
    LaurentPoly jones;
};

struct ConjectureReport {
    struct Tally {
        int64_t checked = 0;
        int64_t violations = 0;
        std::vector<std::string> notes;
    };
    Tally two_torsion_exists;   // conjecture 1
    Tally two_power_only;       // conjecture 2
    Tally h_thin_is_t_thin;     // conjecture 3
    Tally t_rich_iff_reduced;   // conjecture 4
    Tally ranks_determine;      // conjecture 5
    int64_t equal_rank_pairs = 0;
    std::string to_text() const;
};

ConjectureReport scan_conjectures(const std::vector<CensusComputation>& census);

} // namespace kh

#endif
