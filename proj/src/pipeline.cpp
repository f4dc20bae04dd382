#include "kh/pipeline.hpp"

#include <atomic>
#include <functional>
#include <chrono>
#include <thread>

namespace kh {

namespace {

void parallel_for(int n_tasks, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n_tasks <= 1) {
        for (int t = 0; t < n_tasks; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            int t = next.fetch_add(1);
            if (t >= n_tasks) break;
            fn(t);
        }
    };
    std::vector<std::thread> pool;
    int n_threads = std::min(jobs, n_tasks);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace

Computation compute_homology(const KhComplex& kc, const ComputeOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Computation out;
    out.total_generators = kc.total_generators();
    out.table.m_components = kc.diagram().m_components();

    // matrices and Smith forms of the Khovanov differential, keyed by source (i, j)
    std::vector<Bidegree> keys;
    for (const auto& [ij, sl] : kc.slices()) keys.push_back(ij);

    struct PerKey {
        SparseIntMatrix mat;
        SmithForm snf;
        std::map<int64_t, int64_t> rank_p;
    };
    // source bidegrees worth materializing: every slice key and the cell below it
    std::map<Bidegree, PerKey> work;
    for (const Bidegree& ij : keys) {
        work.emplace(ij, PerKey{});
        work.emplace(Bidegree{ij.first - 1, ij.second}, PerKey{});
    }
    std::vector<Bidegree> work_keys;
    for (const auto& [ij, pk] : work) work_keys.push_back(ij);

    parallel_for(static_cast<int>(work_keys.size()), opt.jobs, [&](int t) {
        const Bidegree ij = work_keys[t];
        PerKey& pk = work.at(ij);
        pk.mat = kc.build_matrix({DiffKind::khovanov_d, 0}, ij.first, ij.second);
        pk.snf = smith_normal_form(pk.mat);
        for (int64_t p : opt.mod_primes) pk.rank_p[p] = rank_mod_p(pk.mat, p);
    });

    // composition guard: consecutive differentials must compose to zero
    for (const Bidegree& ij : keys) {
        const auto& din = work.at({ij.first - 1, ij.second}).mat;
        const auto& dout = work.at(ij).mat;
        if (din.n_cols > 0 && dout.n_rows > 0 && !is_zero(multiply(dout, din)))
            throw LinalgError("d . d != 0 at bidegree (" + std::to_string(ij.first) + "," +
                              std::to_string(ij.second) + ")");
    }

    for (const Bidegree& ij : keys) {
        const int64_t dim = kc.slice_dim(ij.first, ij.second);
        const PerKey& in = work.at({ij.first - 1, ij.second});
        const PerKey& outk = work.at(ij);
        AbelianGroup g;
        g.rank = dim - outk.snf.rank() - in.snf.rank();
        for (const mpz_class& f : in.snf.invariant_factors) {
            if (f == 1) continue;
            for (const auto& [pkval, k] : factor_prime_powers(f)) {
                (void)k;
                g.torsion[pkval] += 1;
            }
        }
        if (!g.trivial()) out.table.groups[ij] = g;
        for (int64_t p : opt.mod_primes) {
            int64_t b = dim - outk.rank_p.at(p) - in.rank_p.at(p);
            if (b != 0) out.modp_betti[p][ij] = b;
        }
        // make sure requested prime maps exist even when empty
        for (int64_t p : opt.mod_primes) out.modp_betti.try_emplace(p);
    }
    if (opt.reduced) {
        std::map<Bidegree, AbelianGroup> red;
        std::vector<Bidegree> rkeys;
        for (const auto& [ij, sl] : kc.reduced_slices()) rkeys.push_back(ij);
        std::map<Bidegree, std::pair<SparseIntMatrix, SmithForm>> rwork;
        for (const Bidegree& ij : rkeys) {
            rwork.emplace(ij, std::pair<SparseIntMatrix, SmithForm>{});
            rwork.emplace(Bidegree{ij.first - 1, ij.second}, std::pair<SparseIntMatrix, SmithForm>{});
        }
        std::vector<Bidegree> rwork_keys;
        for (const auto& [ij, v] : rwork) rwork_keys.push_back(ij);
        parallel_for(static_cast<int>(rwork_keys.size()), opt.jobs, [&](int t) {
            const Bidegree ij = rwork_keys[t];
            auto& [mat, snf] = rwork.at(ij);
            mat = kc.reduced_matrix(ij.first, ij.second);
            snf = smith_normal_form(mat);
        });
        for (const Bidegree& ij : rkeys) {
            const auto& sl = kc.reduced_slices().at(ij);
            const auto& in = rwork.at({ij.first - 1, ij.second});
            const auto& outk = rwork.at(ij);
            AbelianGroup g;
            g.rank = static_cast<int64_t>(sl.generators.size()) - outk.second.rank() - in.second.rank();
            for (const mpz_class& f : in.second.invariant_factors) {
                if (f == 1) continue;
                for (const auto& [pkval, k] : factor_prime_powers(f)) {
                    (void)k;
                    g.torsion[pkval] += 1;
                }
            }
            if (!g.trivial()) red[ij] = g;
        }
        out.table.reduced = std::move(red);
    }

    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

Computation compute_homology(const LinkDiagram& d, const ComputeOptions& opt) {
    LinkDiagram dd = d;
    if (opt.basepoint_label) dd.set_base_point(*opt.basepoint_label);
    KhComplex kc(dd, opt.generator_cap);
    return compute_homology(kc, opt);
}

} // namespace kh
