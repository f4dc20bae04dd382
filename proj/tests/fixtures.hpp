#ifndef KH_TESTS_FIXTURES_HPP
#define KH_TESTS_FIXTURES_HPP

#include <string>

#include "diagen.hpp"
#include "kh/diagram.hpp"

namespace fx {

// right-handed trefoil: all crossings +1, writhe +3
inline const char* TREFOIL_R = "X[1,5,2,4] X[5,3,6,2] X[3,1,4,6]";
// left-handed trefoil in the standard table form: all crossings -1
inline const char* TREFOIL_L = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

inline kh::LinkDiagram trefoil_r() { return kh::LinkDiagram::parse_pd(TREFOIL_R); }
inline kh::LinkDiagram trefoil_l() { return kh::LinkDiagram::parse_pd(TREFOIL_L); }
inline kh::LinkDiagram unknot() { return kh::LinkDiagram::parse_pd("unlink 1"); }
inline kh::LinkDiagram unlink2() { return kh::LinkDiagram::parse_pd("unlink 2"); }

inline kh::LinkDiagram braid(int strands, const std::vector<int>& word) {
    return kh::LinkDiagram::parse_pd(kh::diagen::braid_pd(strands, word));
}

inline kh::LinkDiagram hopf_pos() { return braid(2, {1, 1}); }
inline kh::LinkDiagram figure8() { return braid(3, {1, -2, 1, -2}); }
inline kh::LinkDiagram torus_2k(int k) { return braid(2, std::vector<int>(k, 1)); }

} // namespace fx

#endif
