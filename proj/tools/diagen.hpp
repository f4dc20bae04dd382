#ifndef KH_TOOLS_DIAGEN_HPP
#define KH_TOOLS_DIAGEN_HPP

// Census preparation helpers: build PD codes from braid words and rational
// tangle words, plus the diagram-level signature formula for alternating
// diagrams. The engine itself only ever ingests PD codes; these helpers exist
// to produce the bundled census files and test fixtures.

#include <string>
#include <vector>

#include "kh/diagram.hpp"

namespace kh::diagen {

// PD of the closure of a braid word on `strands` strands; letter +g means
// strand g+1 crosses over strand g (a positive crossing), -g the mirror.
std::string braid_pd(int strands, const std::vector<int>& word);

// PD of the 4-plat closure of a braid word on 4 strands (top and bottom
// pairs (1,2) and (3,4) are capped).
std::string plat_pd(const std::vector<int>& word);

// Standard alternating 4-plat of the 2-bridge link with continued fraction
// [a1, a2, ..., ak], all a_i >= 1.
std::string rational_pd(const std::vector<int>& cf);

// numerator / denominator of the continued fraction a1 + 1/(a2 + 1/(...))
std::pair<int64_t, int64_t> cf_fraction(const std::vector<int>& cf);

// over/under passages alternate along every component
bool is_alternating(const LinkDiagram& d);

// signature of a non-split reduced alternating diagram:
// sigma = s_A(D) - 1 - c_+(D), with s_A the circle count of the all-A state.
int alternating_signature(const LinkDiagram& d);

} // namespace kh::diagen

#endif
