#ifndef KH_PIPELINE_HPP
#define KH_PIPELINE_HPP

#include <optional>

#include "kh/complex.hpp"
#include "kh/diagram.hpp"
#include "kh/invariants.hpp"

namespace kh {

struct ComputeOptions {
    bool reduced = true;
    std::vector<int64_t> mod_primes;
    int64_t generator_cap = 5'000'000;
    std::optional<int64_t> basepoint_label;
    int jobs = 1;
};

struct Computation {
    HomologyTable table;
    std::map<int64_t, std::map<Bidegree, int64_t>> modp_betti;
    int64_t total_generators = 0;
    double seconds = 0;
};

// Full integral homology (optionally reduced and mod-p Betti tables) of the
// diagram, assembled from Smith normal forms of the boundary matrices.
Computation compute_homology(const LinkDiagram& d, const ComputeOptions& opt = {});

Computation compute_homology(const KhComplex& kc, const ComputeOptions& opt = {});

} // namespace kh

#endif
