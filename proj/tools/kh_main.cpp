// Command-line front end: compute and render homology tables, classify
// links, run the verification suites over a census, and batch-populate a
// result store.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kh/pipeline.hpp"
#include "kh/store.hpp"
#include "kh/verify.hpp"

using namespace kh;

namespace {

struct CommonOpts {
    std::string census_path = "data/census.tsv";
    bool reduced = true;
    std::vector<int64_t> mod_primes;
    int64_t cap = 5'000'000;
    int jobs = 1;
    std::optional<int64_t> basepoint;
    std::string store_path;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool looks_like_pd(const std::string& arg) {
    return arg.find('[') != std::string::npos || arg.find("unlink") != std::string::npos;
}

CensusEntry resolve_source(const std::string& arg, const CommonOpts& opts) {
    if (looks_like_pd(arg)) {
        CensusEntry e;
        e.name = "(inline)";
        e.pd = arg;
        return e;
    }
    for (CensusEntry& e : parse_census(read_file(opts.census_path)))
        if (e.name == arg) return e;
    throw std::runtime_error("no census entry named '" + arg + "' in " + opts.census_path);
}

void validate_meta(const CensusEntry& entry, const LinkDiagram& d) {
    if (entry.meta.signature && d.m_components() == 1 && *entry.meta.signature % 2 != 0)
        throw ParseError(entry.name + ": a knot signature must be even");
}

ResultRecord compute_record(const CensusEntry& entry, const CommonOpts& opts) {
    LinkDiagram d = LinkDiagram::parse_pd(entry.pd);
    d.name = entry.name;
    validate_meta(entry, d);
    if (opts.basepoint)
        d.set_base_point(*opts.basepoint);
    else if (entry.meta.basepoint)
        d.set_base_point(*entry.meta.basepoint);

    ComputeOptions copt;
    copt.reduced = opts.reduced;
    copt.mod_primes = opts.mod_primes;
    copt.generator_cap = opts.cap;
    copt.jobs = opts.jobs;
    Computation c = compute_homology(d, copt);

    ResultRecord r;
    r.name = entry.name;
    r.pd = d.normalized_pd();
    r.diagram_hash = diagram_hash(d);
    r.n_crossings = d.n_crossings();
    r.m_components = d.m_components();
    r.table = std::move(c.table);
    r.table.meta = entry.meta;
    r.table.m_components = r.m_components;
    std::optional<std::vector<std::vector<int64_t>>> lk;
    if (r.m_components > 1) lk = linking_numbers(d);
    r.classification = classify(r.table, c.modp_betti, lk);
    r.kh = khovanov_polynomial(r.table);
    r.kh_t = torsion_polynomial(r.table);
    r.euler = graded_euler(r.table);
    r.jones = jones_reduced(r.table);
    r.timing_ms = static_cast<int64_t>(c.seconds * 1000);
    return r;
}

int cmd_compute(const std::string& src, const CommonOpts& opts) {
    CensusEntry entry = resolve_source(src, opts);
    ResultRecord r = compute_record(entry, opts);
    std::cout << r.name << ": " << r.n_crossings << " crossings, " << r.m_components
              << (r.m_components == 1 ? " component" : " components") << ", computed in "
              << r.timing_ms << " ms\n\n";
    std::cout << render_table(r.table, opts.reduced) << "\n";
    std::cout << "Kh(t,q) = " << r.kh.to_string() << "\n";
    std::cout << "K(q)    = " << r.euler.to_string() << "\n";
    std::cout << "J(q)    = " << r.jones.to_string() << "\n";
    std::cout << "d(L)    = " << determinant(r.jones) << "\n";
    std::cout << classification_line(r) << "\n";
    for (const auto& [ij, g] : r.table.groups)
        for (const auto& [pk, mult] : g.torsion) {
            int64_t v = pk;
            while (v % 2 == 0) v /= 2;
            if (v != 1)
                std::cout << "WARNING: torsion of odd order " << pk << " at (" << ij.first << ","
                          << ij.second << ")\n";
        }
    if (!opts.store_path.empty()) {
        store_write(opts.store_path, r);
        std::cout << "stored under " << opts.store_path << "\n";
    }
    return 0;
}

int cmd_classify(const std::string& src, const CommonOpts& opts) {
    CensusEntry entry = resolve_source(src, opts);
    CommonOpts o = opts;
    if (o.mod_primes.empty()) o.mod_primes = {2, 3, 5, 7};
    ResultRecord r = compute_record(entry, o);
    std::string line = classification_line(r);
    if (r.classification.t_class == TClass::T_thin && !r.table.has_torsion())
        line += " (trivially)";
    std::cout << line << "\n";
    for (const auto& [p, thin] : r.classification.mod_p_thin)
        std::cout << "  Z" << p << "H-thin: " << (thin ? "yes" : "no") << "\n";
    return 0;
}

struct SuiteFlags {
    bool chain = false, z2 = false, lee = false, theorems = false, conjectures = false;
};

int cmd_verify(const std::string& census_path, const std::vector<std::string>& suites,
               const std::string& report_path, bool keep_going, const CommonOpts& opts) {
    SuiteFlags f;
    for (const std::string& s : suites) {
        if (s == "chain") f.chain = true;
        else if (s == "z2") f.z2 = true;
        else if (s == "lee") f.lee = true;
        else if (s == "theorems") f.theorems = true;
        else if (s == "conjectures") f.conjectures = true;
        else if (s == "all") f = {true, true, true, true, true};
        else throw CLI::ValidationError("--suite", "unknown suite " + s);
    }
    std::vector<CheckResult> results;
    std::vector<CensusComputation> census_comps;
    std::map<std::string, HomologyTable> tables_by_name;
    bool parse_errors = false;
    const int calib = diagonal_calibration();
    results.push_back(CheckResult::pass("calibration", "trefoil",
                                        calib == 1 ? "b-diagonals = sigma +- 1"
                                                   : "b-diagonals = -sigma -+ 1"));

    std::vector<CensusEntry> entries = parse_census(read_file(census_path));
    for (const CensusEntry& entry : entries) {
        try {
            LinkDiagram d = LinkDiagram::parse_pd(entry.pd);
            d.name = entry.name;
            validate_meta(entry, d);
            if (entry.meta.basepoint) d.set_base_point(*entry.meta.basepoint);
            KhComplex kc(d, opts.cap);

            ComputeOptions copt;
            copt.reduced = true;
            copt.mod_primes = {2, 3, 5, 7};
            copt.jobs = opts.jobs;
            Computation c = compute_homology(kc, copt);
            c.table.meta = entry.meta;
            c.table.m_components = d.m_components();

            std::optional<std::vector<std::vector<int64_t>>> lk;
            if (d.m_components() > 1) lk = linking_numbers(d);
            ThinnessReport rep = classify(c.table, c.modp_betti, lk);

            const bool alternating = entry.meta.alternating.value_or(false);
            const bool split = entry.meta.split.value_or(false);

            if (f.chain) {
                for (CheckResult& r : check_chain_identities(kc, entry.name))
                    results.push_back(std::move(r));
            }
            if (f.z2) {
                for (CheckResult& r : check_z2_exactness(kc, entry.name))
                    results.push_back(std::move(r));
                if (alternating && !split && entry.meta.signature)
                    results.push_back(check_z2_equal_diagonals(c.modp_betti.at(2),
                                                               *entry.meta.signature, calib,
                                                               entry.name));
            }
            if (f.lee) {
                bool assert_value = alternating && !split && d.n_crossings() <= 8;
                results.push_back(check_lee_dimension(kc, 3, entry.name, assert_value));
            }
            if (f.theorems) {
                results.push_back(check_theorem_A(c.table, rep.h_class, entry.name));
                for (CheckResult& r : check_theorem_B(c.table, rep, entry.name))
                    results.push_back(std::move(r));
                if (alternating && !split && entry.meta.signature)
                    results.push_back(check_diagonal_support(c.table, *entry.meta.signature,
                                                             calib, entry.name));
                if (alternating && !split && entry.meta.prime.value_or(false) &&
                    d.n_crossings() > 0)
                    results.push_back(check_jones_breadth(jones_reduced(c.table),
                                                          d.n_crossings(),
                                                          entry.meta.torus2.has_value(),
                                                          entry.name));
                results.push_back(check_reduced_diagonals(c.table, entry.name));
                results.push_back(
                    check_hthin_alternating_jones(jones_reduced(c.table), rep.h_class, entry.name));
                if (!split)
                    results.push_back(
                        check_jones_at_one(jones_reduced(c.table), d.m_components(), entry.name));
                if (d.n_crossings() <= 14)
                    results.push_back(check_euler_vs_oracle(c.table, d, entry.name));
                if (entry.meta.same_as) {
                    auto it = tables_by_name.find(*entry.meta.same_as);
                    if (it != tables_by_name.end())
                        results.push_back(check_invariance(it->second, c.table,
                                                           entry.name + " vs " +
                                                               *entry.meta.same_as));
                }
            }
            tables_by_name[entry.name] = c.table;
            if (f.conjectures) {
                CensusComputation cc;
                cc.name = entry.name;
                cc.meta = entry.meta;
                cc.n_crossings = d.n_crossings();
                cc.m_components = d.m_components();
                cc.table = c.table;
                cc.report = rep;
                cc.jones = jones_reduced(c.table);
                census_comps.push_back(std::move(cc));
            }
        } catch (const std::exception& ex) {
            parse_errors = true;
            CheckResult r = CheckResult::fail("entry", entry.name, ex.what());
            if (keep_going) {
                // listed in the report, but the policy flag keeps it out of the
                // failure count
                r.check = "entry (skipped)";
                r.passed = true;
                r.detail = std::string("parse error: ") + ex.what();
            }
            results.push_back(std::move(r));
            if (!keep_going) break;
        }
    }
    if (f.z2) {
        for (int n = 1; n <= 12; ++n) results.push_back(check_gn_acyclic(n));
    }

    int64_t failures = 0;
    for (const CheckResult& r : results)
        if (!r.passed) ++failures;

    std::ostringstream report;
    report << csv_header() << "\n";
    for (const CheckResult& r : results) report << csv_line(r) << "\n";
    if (!report_path.empty()) {
        std::ofstream os(report_path);
        os << report.str();
        std::cout << results.size() << " checks, " << failures << " failures -> " << report_path
                  << "\n";
    } else {
        std::cout << report.str();
    }
    if (f.conjectures) {
        ConjectureReport rep = scan_conjectures(census_comps);
        std::cout << rep.to_text();
    }
    if (failures > 0) return 1;
    if (parse_errors && !keep_going) return 1;
    return 0;
}

int cmd_batch(const std::string& census_path, const CommonOpts& opts) {
    if (opts.store_path.empty()) throw CLI::ValidationError("--store", "batch needs a store path");
    std::vector<CensusEntry> entries = parse_census(read_file(census_path));
    // later duplicate names win
    std::map<std::string, CensusEntry> by_name;
    for (CensusEntry& e : entries) {
        if (by_name.count(e.name))
            std::cerr << "warning: duplicate census name " << e.name << ", keeping the later entry\n";
        by_name[e.name] = e;
    }
    std::vector<ResultRecord> records;
    int64_t computed = 0, cached = 0, failed = 0;
    for (const auto& [name, entry] : by_name) {
        try {
            LinkDiagram d = LinkDiagram::parse_pd(entry.pd);
            uint64_t hash = diagram_hash(d);
            if (store_has(opts.store_path, name, hash)) {
                records.push_back(store_read(opts.store_path, name));
                ++cached;
                continue;
            }
            ResultRecord r = compute_record(entry, opts);
            store_write(opts.store_path, r);
            records.push_back(std::move(r));
            ++computed;
        } catch (const std::exception& ex) {
            std::cerr << name << ": " << ex.what() << "\n";
            ++failed;
        }
    }
    store_write_index(opts.store_path, records);
    std::cout << "batch done: " << computed << " computed, " << cached << " cached, " << failed
              << " failed; index at " << opts.store_path << "/index.csv\n";
    return failed > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Khovanov homology engine: exact tables, torsion, and census checks"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto add_common = [&](CLI::App* sub, bool with_store, bool with_census = true) {
        if (with_census)
            sub->add_option("--census", opts.census_path, "census file for name lookups");
        sub->add_option("--mod", opts.mod_primes, "also compute mod-p Betti tables (repeatable)");
        sub->add_option("--cap", opts.cap, "enhanced-state cap (default 5000000)");
        sub->add_option("--jobs", opts.jobs, "worker threads for per-bidegree work");
        sub->add_option("--basepoint", [&](const std::vector<std::string>& vals) {
            opts.basepoint = std::stoll(vals.at(0));
            return true;
        }, "base point edge label for the reduced complex");
        if (with_store) sub->add_option("--store", opts.store_path, "result store directory");
    };

    std::string src;
    bool no_reduced = false;
    CLI::App* compute = app.add_subcommand("compute", "compute and print a homology table");
    compute->add_option("source", src, "PD code text or census entry name")->required();
    compute->add_flag("--no-reduced", no_reduced, "skip the reduced subcomplex");
    add_common(compute, true);

    CLI::App* classify_cmd = app.add_subcommand("classify", "one-line thinness verdict");
    classify_cmd->add_option("source", src, "PD code text or census entry name")->required();
    add_common(classify_cmd, false);

    std::string census_arg, report_path;
    std::vector<std::string> suites{"all"};
    bool keep_going = false;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites over a census");
    verify_cmd->add_option("census", census_arg, "census file")->required();
    verify_cmd->add_option("--suite", suites,
                           "suites to run: chain, z2, lee, theorems, conjectures, all");
    verify_cmd->add_option("--report", report_path, "write the CSV report here");
    verify_cmd->add_flag("--keep-going", keep_going, "process all entries despite errors");
    add_common(verify_cmd, false, false);

    CLI::App* batch = app.add_subcommand("batch", "compute every census entry into a store");
    batch->add_option("census", census_arg, "census file")->required();
    add_common(batch, true, false);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compute) {
            opts.reduced = !no_reduced;
            if (opts.mod_primes.empty()) opts.mod_primes = {2, 3, 5, 7};
            return cmd_compute(src, opts);
        }
        if (*classify_cmd) return cmd_classify(src, opts);
        if (*verify_cmd) return cmd_verify(census_arg, suites, report_path, keep_going, opts);
        if (*batch) {
            if (opts.mod_primes.empty()) opts.mod_primes = {2, 3, 5, 7};
            return cmd_batch(census_arg, opts);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
