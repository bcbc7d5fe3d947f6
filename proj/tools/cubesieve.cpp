#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cubesieve/descent.hpp"
#include "cubesieve/pipeline.hpp"
#include "cubesieve/smallexp.hpp"

using namespace cubesieve;

namespace {

std::vector<u64> parse_u64_list(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto dash = item.find('-');
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoull(item));
            } else {
                u64 lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
                for (u64 v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer list: " + s);
        }
    }
    return out;
}

std::string format_for(const std::string& path, const std::string& fmt) {
    if (!fmt.empty()) return fmt;
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") return "csv";
    return "json";
}

void print_summary(const Report& rep, const std::vector<int>& cases) {
    std::fprintf(stderr, "%-5s %10s", "case", "items");
    for (std::size_t s = 0; s < kStageCount; ++s) std::fprintf(stderr, " %15s", stage_name(static_cast<Stage>(s)));
    std::fprintf(stderr, "\n");
    for (int c : cases) {
        auto t = aggregate_total(rep, c);
        std::fprintf(stderr, "%-5d %10llu", c, static_cast<unsigned long long>(t.items));
        for (auto v : t.by_stage) std::fprintf(stderr, " %15llu", static_cast<unsigned long long>(v));
        std::fprintf(stderr, "\n");
    }
    std::fprintf(stderr, "spot-check: %llu checked, %llu failed\n", static_cast<unsigned long long>(rep.spot_checked),
                 static_cast<unsigned long long>(rep.spot_failed));
}

int cmd_families(u64 samples, u64 seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> d(1, 1000);
    u64 bad = 0;
    for (u64 i = 0; i < samples; ++i) {
        i64 A = d(rng) * (rng() & 1 ? 1 : -1), B = d(rng) * (rng() & 1 ? 1 : -1);
        if (!p2_solution(A, B).satisfies()) ++bad;
        i64 N = d(rng) % 100 + 1, M = N * 2 + d(rng) % 100;  // M^4 > 5 N^4 once M >= 1.5 N
        auto mn = p2_mn_solution(M, N);
        if (!mn.triple.satisfies() || !on_curve(Weierstrass::E_r(mn.triple.r), mn.point)) ++bad;
    }
    std::printf("p=2: %llu (A,B) and (M,N) samples, %llu failures\n", static_cast<unsigned long long>(samples),
                static_cast<unsigned long long>(bad));
    for (u64 n = 1; n <= 10; ++n) {
        auto s = p3_integer_point(n);
        bool ok = s.satisfies();
        if (!ok) ++bad;
        if (n <= 3)
            std::printf("p=3: n=%llu  x=%s y=%s r=%s  %s\n", static_cast<unsigned long long>(n), s.x.get_str().c_str(),
                        s.y.get_str().c_str(), s.r.get_str().c_str(), ok ? "ok" : "FAILED");
    }
    std::printf("p=3: multiples n <= 10 checked\n");
    return bad ? 2 : 0;
}

int cmd_torsion(const std::vector<u64>& rs) {
    int rc = 0;
    for (u64 r : rs) {
        auto t = torsion_subgroup(mpz_class(static_cast<unsigned long>(r)));
        std::printf("r=%llu torsion order %zu:", static_cast<unsigned long long>(r), t.size());
        for (const auto& P : t) {
            if (P.infinity)
                std::printf(" O");
            else
                std::printf(" (%s, %s)", P.X.get_str().c_str(), P.Y.get_str().c_str());
        }
        std::printf("\n");
        if (t.size() != 2) rc = 2;
    }
    return rc;
}

int cmd_p7() {
    int rc = 0;
    for (int c = 1; c <= 4; ++c) {
        auto v = p7_eliminate(c);
        std::printf("case %d: %s\n", c, v.eliminated ? "eliminated" : "NOT eliminated");
        for (const auto& s : v.solutions)
            std::printf("  w2=%llu X=%llu r=%llu x=%s  %s\n", static_cast<unsigned long long>(s.w2),
                        static_cast<unsigned long long>(s.X), static_cast<unsigned long long>(s.r), s.x.get_str().c_str(),
                        s.reason.empty() ? "GENUINE" : s.reason.c_str());
        if (!v.eliminated) rc = 2;
    }
    return rc;
}

int cmd_chabauty() {
    auto rep = chabauty_check();
    for (const auto& row : rep.rows) {
        std::printf("case %d: Y^2 = %s X^5 - %s  (Y = %lld r / w1^5)  model %s, points %s", row.case_id,
                    row.alpha.get_str().c_str(), row.beta.get_str().c_str(), static_cast<long long>(row.k),
                    row.model_ok ? "ok" : "MISMATCH", row.points_ok ? "ok" : "MISMATCH");
        for (const auto& P : row.points) std::printf(" (%s, %s)", P.X.get_str().c_str(), P.Y.get_str().c_str());
        std::printf("\n");
        if (!row.note.empty()) std::printf("  note: %s\n", row.note.c_str());
    }
    return rep.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubesieve: elimination pipeline for 9x(x^2 + 20r^2) = y^p"};
    app.require_subcommand(1);

    JobSpec job;
    std::string cases = "1-4", r_list, primes, stages = "patel,germain,local,nfdescent,thue-bruteforce";
    std::string out = "-", format, records = "sieved";
    bool summary = false;
    auto* run_cmd = app.add_subcommand("run", "run the elimination pipeline");
    run_cmd->add_option("--cases", cases, "case ids, e.g. 1-4 or 5,7");
    run_cmd->add_option("--rmin", job.r_min);
    run_cmd->add_option("--rmax", job.r_max);
    run_cmd->add_option("--r", r_list, "explicit r values (comma separated); overrides the range");
    run_cmd->add_option("--primes", primes, "explicit exponents; default is every prime up to the Mignotte bound");
    run_cmd->add_option("--pmin", job.p_min);
    run_cmd->add_option("--kmax", job.kmax);
    run_cmd->add_option("--stages", stages);
    run_cmd->add_option("--workers", job.workers);
    run_cmd->add_option("--out", out, "output path, - for stdout");
    run_cmd->add_option("--format", format, "json or csv; inferred from --out")->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--records", records, "full, sieved, residual or survivors")
        ->check(CLI::IsMember({"full", "sieved", "residual", "survivors"}));
    run_cmd->add_option("--thue-bound", job.thue_bound);
    run_cmd->add_flag("--timing", job.timing, "fill the us field (output is then not reproducible)");
    run_cmd->add_flag("--summary", summary, "print per-case stage totals to stderr");

    u64 t2_rmax = 1000000;
    bool t2_distinct = false;
    auto* t2 = app.add_subcommand("table2", "count the equations left by the primitive-divisor sieve");
    t2->add_option("--rmax", t2_rmax);
    t2->add_flag("--distinct", t2_distinct, "also count distinct (p, r) pairs");

    u64 mg_rmax = 1000000;
    auto* mg = app.add_subcommand("mignotte", "exponent bounds for cases 1-8");
    mg->add_option("--rmax", mg_rmax);

    u64 fam_samples = 10000, fam_seed = 1;
    auto* fam = app.add_subcommand("families", "check the p = 2 and p = 3 parametrisations");
    fam->add_option("--samples", fam_samples);
    fam->add_option("--seed", fam_seed);

    std::string tors_r = "1,2,3,5,7,11,100";
    auto* tors = app.add_subcommand("torsion", "torsion subgroup of y^2 = x^3 + 20 r^2 x");
    tors->add_option("--r", tors_r);

    std::string ts_a = "1", ts_b = "11664", ts_c = "5";
    u64 ts_p = 5, ts_rmin = 1, ts_rmax = 1000000;
    i64 ts_bound = 10000;
    bool ts_square = false;
    int ts_case = 3;
    auto* ts = app.add_subcommand("thue-search", "bounded search for a s^p - b t^p = c r^2");
    ts->add_option("--a", ts_a);
    ts->add_option("--b", ts_b);
    ts->add_option("--c", ts_c);
    ts->add_option("--p", ts_p);
    ts->add_option("--rmin", ts_rmin);
    ts->add_option("--rmax", ts_rmax);
    ts->add_option("--bound", ts_bound);
    ts->add_flag("--square-tau", ts_square, "only t that are perfect squares");
    ts->add_option("--admissible-case", ts_case, "keep r admissible for this case (0 keeps every r)");

    auto* p7 = app.add_subcommand("p7", "finite elimination at p = 7 for cases 1-4");
    auto* ch = app.add_subcommand("chabauty-check", "verify the p = 5 curve models and listed points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*run_cmd) {
            job.cases = parse_case_list(cases);
            if (!r_list.empty()) job.r_list = parse_u64_list(r_list);
            if (!primes.empty()) job.primes = parse_u64_list(primes);
            job.stages = parse_stages(stages);
            job.level = parse_record_level(records);
            const auto t0 = std::chrono::steady_clock::now();
            Report rep = run(job);
            write_report(rep, out, format_for(out, format));
            if (summary) {
                print_summary(rep, job.cases);
                double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::fprintf(stderr, "elapsed %.1f s\n", secs);
            }
            return 0;
        }
        if (*t2) {
            std::printf("%-5s %8s %12s%s\n", "case", "pmax", "count", t2_distinct ? "     distinct" : "");
            for (const auto& row : table2_counts(t2_rmax, t2_distinct)) {
                std::printf("%-5d %8llu %12llu", row.case_id, static_cast<unsigned long long>(row.pmax),
                            static_cast<unsigned long long>(row.scan));
                if (t2_distinct) std::printf(" %12llu", static_cast<unsigned long long>(row.distinct));
                std::printf("\n");
            }
            return 0;
        }
        if (*mg) {
            std::printf("%-5s %14s %8s\n", "case", "bound", "ceil");
            for (const auto& row : mignotte_rows(mg_rmax))
                std::printf("%-5d %14.3f %8llu\n", row.case_id, row.real, static_cast<unsigned long long>(row.bound));
            return 0;
        }
        if (*fam) return cmd_families(fam_samples, fam_seed);
        if (*tors) return cmd_torsion(parse_u64_list(tors_r));
        if (*ts) {
            std::function<bool(u64)> filter;
            if (ts_case) {
                descent_case(ts_case);
                filter = [ts_case](u64 r) { return admissible_r(ts_case, r); };
            }
            auto sols = thue_bruteforce(mpz_class(ts_a), mpz_class(ts_b), mpz_class(ts_c), ts_p, ts_rmin, ts_rmax, ts_bound,
                                        ts_square, filter);
            for (const auto& s : sols)
                std::printf("sigma=%s tau=%s r=%llu\n", s.sigma.get_str().c_str(), s.tau.get_str().c_str(),
                            static_cast<unsigned long long>(s.r));
            std::printf("%zu solution(s)\n", sols.size());
            return 0;
        }
        if (*p7) return cmd_p7();
        if (*ch) return cmd_chabauty();
    } catch (const SoundnessError& e) {
        std::fprintf(stderr, "soundness check failed: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
