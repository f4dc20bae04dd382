#ifndef KH_COMPLEX_HPP
#define KH_COMPLEX_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/linalg.hpp"

namespace kh {

struct ComplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Raised when the enhanced-state count passes the configured cap.
struct CapExceeded : ComplexError {
    using ComplexError::ComplexError;
};

// A Kauffman state with a sign word on its circles. Bit k of `signs` set
// means circle k carries '-'; clear means '+'. Circles are indexed as in
// Resolution. For the a/b-relabeled basis the same layout is reused with
// bit k set meaning label b.
struct EnhancedState {
    State markers = 0;
    uint64_t signs = 0;
};

struct ChainSlice {
    int i = 0;
    int j = 0;
    std::vector<EnhancedState> generators; // sorted: marker word, then sign word
};

enum class DiffKind { khovanov_d, nu, x, lee_phi, phi_plus_d };

// mod = 0 means integer coefficients.
struct DifferentialKind {
    DiffKind kind = DiffKind::khovanov_d;
    int64_t mod = 0;
};

// (i, j) bidegree shift of each differential
std::pair<int, int> bidegree_of(DiffKind k);

class KhComplex {
  public:
    explicit KhComplex(const LinkDiagram& d, int64_t generator_cap = 5'000'000);

    const LinkDiagram& diagram() const { return d_; }
    int64_t total_generators() const { return total_generators_; }

    const std::map<std::pair<int, int>, ChainSlice>& slices() const { return slices_; }
    int64_t slice_dim(int i, int j) const;

    // Subcomplex of base-point-positive states, re-keyed to (i, jt = j + 1).
    // Built on first use.
    const std::map<std::pair<int, int>, ChainSlice>& reduced_slices() const;

    // Matrix of the requested differential from slice (i, j). Entries are exact
    // integers; the ring tag is validated (lee_phi and phi_plus_d only make
    // sense modulo an odd prime).
    SparseIntMatrix build_matrix(DifferentialKind kind, int i, int j) const;

    // Khovanov differential restricted to the reduced subcomplex, from (i, jt).
    SparseIntMatrix reduced_matrix(int i, int jt) const;

    // phi+d complex in the a/b basis, graded by i only: C^i -> C^{i+1}.
    std::vector<int> ab_i_support() const;
    int64_t ab_dim(int i) const;
    SparseIntMatrix ab_matrix(int i) const;

    int grade_i(State s) const;
    int grade_j(State s, uint64_t signs) const;

    // circles data of a state
    const Resolution& resolution(State s) const { return res_[s]; }

  private:
    LinkDiagram d_;
    std::vector<Resolution> res_; // indexed by state
    std::map<std::pair<int, int>, ChainSlice> slices_;
    mutable std::map<std::pair<int, int>, ChainSlice> reduced_;
    mutable std::map<int, ChainSlice> ab_slices_; // phi+d basis, keyed by i
    mutable bool reduced_built_ = false;
    mutable bool ab_built_ = false;
    int64_t total_generators_ = 0;

    void build_reduced() const;
    void build_ab() const;
    int find_in(const ChainSlice& sl, const EnhancedState& g) const;
};

// Incidence number (S1 : S2) of the Khovanov differential, per the
// marker/sign conditions and the (-1)^t rule with crossings ordered as in
// the diagram. Requires only that the two states are enhanced states of d.
int incidence(const LinkDiagram& d, const EnhancedState& s1, const EnhancedState& s2);

} // namespace kh

#endif
