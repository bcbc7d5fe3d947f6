#include "cubesieve/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "cubesieve/descent.hpp"
#include "cubesieve/nfdescent.hpp"
#include "cubesieve/sieves.hpp"
#include "cubesieve/smallexp.hpp"

namespace cubesieve {

using nlohmann::json;

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Patel: return "patel";
        case Stage::Chabauty: return "chabauty";
        case Stage::ThueBruteforce: return "thue-bruteforce";
        case Stage::P7: return "p7";
        case Stage::Germain: return "germain";
        case Stage::Local: return "local";
        case Stage::NfDescent: return "nfdescent";
        case Stage::Survivor: return "survivor";
    }
    return "?";
}

RecordLevel parse_record_level(const std::string& s) {
    if (s == "full") return RecordLevel::Full;
    if (s == "sieved") return RecordLevel::Sieved;
    if (s == "residual") return RecordLevel::Residual;
    if (s == "survivors") return RecordLevel::Survivors;
    throw std::invalid_argument("unknown record level: " + s);
}

StageSelection parse_stages(const std::string& list) {
    StageSelection sel{false, false, false, false, false};
    const char* order[] = {"patel", "germain", "local", "nfdescent", "thue-bruteforce"};
    int last = -1;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int idx = -1;
        for (int i = 0; i < 5; ++i)
            if (item == order[i]) idx = i;
        if (idx < 0) throw std::invalid_argument("unknown stage: " + item);
        if (idx <= last) throw std::invalid_argument("stages must be listed once, in canonical order");
        last = idx;
        switch (idx) {
            case 0: sel.patel = true; break;
            case 1: sel.germain = true; break;
            case 2: sel.local = true; break;
            case 3: sel.nfdescent = true; break;
            default: sel.thue = true; break;
        }
    }
    return sel;
}

std::vector<int> parse_case_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dash = item.find('-');
        int lo, hi;
        try {
            if (dash == std::string::npos) {
                lo = hi = std::stoi(item);
            } else {
                lo = std::stoi(item.substr(0, dash));
                hi = std::stoi(item.substr(dash + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("bad case list: " + s);
        }
        if (lo < 1 || hi > 12 || lo > hi) throw std::invalid_argument("case ids must lie in 1..12");
        for (int c = lo; c <= hi; ++c) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

enum class Route { Chabauty, Thue, P7, Chain };

struct Unit {
    int case_id;
    u64 p;
    Route route;
    std::vector<u64> rs;  // items that reach this route, ascending
};

struct Task {
    std::size_t unit;
    std::size_t begin, end;
};

struct TaskResult {
    std::vector<Record> records;
    std::array<u64, kStageCount> by_stage{};
    u64 spot_checked = 0;
    u64 spot_failed = 0;
    std::vector<std::string> failures;
};

u64 splitmix(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool spot_selected(int case_id, u64 p, u64 r, u64 per_mille) {
    u64 h = splitmix(splitmix(splitmix(static_cast<u64>(case_id)) ^ p) ^ r);
    return h % 1000 < per_mille;
}

json mpz_json(const mpz_class& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

bool keep(RecordLevel level, Stage s) {
    switch (level) {
        case RecordLevel::Full: return true;
        case RecordLevel::Sieved: return s != Stage::Patel;
        case RecordLevel::Residual:
            return s == Stage::Local || s == Stage::NfDescent || s == Stage::Survivor;
        case RecordLevel::Survivors: return s == Stage::Survivor;
    }
    return true;
}

// shared, read-only data computed before the workers start
struct Context {
    const JobSpec& job;
    ChabautyReport chabauty;
    std::map<u64, json> thue_case3;  // r -> solutions found at p = 5
    std::map<int, P7Verdict> p7;
};

json thue_annotation(const DescentCase& dc, u64 p, u64 r, i64 bound) {
    mpz_class a = dc.a.materialize(p), b = dc.b.materialize(p);
    auto sols = thue_bruteforce(a, b, mpz_class(static_cast<unsigned long>(dc.rhs)), p, r, r, bound, true);
    json nontrivial = json::array();
    for (const auto& s : sols)
        if (s.tau != 0) nontrivial.push_back({mpz_json(s.sigma), mpz_json(s.tau)});
    return {{"bound", bound}, {"nontrivial", nontrivial}};
}

void process_chain(const Context& ctx, const Unit& u, std::size_t begin, std::size_t end, TaskResult& out) {
    const JobSpec& job = ctx.job;
    const DescentCase& dc = descent_case(u.case_id);
    std::optional<GermainSieve> sieve;
    if (job.stages.germain) sieve.emplace(dc.a, dc.b, dc.rhs, u.p, job.kmax);

    for (std::size_t i = begin; i < end; ++i) {
        const u64 r = u.rs[i];
        const auto t0 = std::chrono::steady_clock::now();
        Stage stage = Stage::Survivor;
        json w = json::object();

        std::optional<GermainWitness> gw;
        if (sieve) gw = sieve->test_r(r);
        if (gw) {
            stage = Stage::Germain;
            w = {{"q", gw->q}, {"k", gw->k}};
            if (spot_selected(u.case_id, u.p, r, job.spot_check_per_mille)) {
                const u64 q = gw->q;
                const u64 am = factored_eval_mod(dc.a, u.p, q), bm = factored_eval_mod(dc.b, u.p, q);
                const u64 rq = r % q;
                const u64 cm = mulmod(dc.rhs % q, mulmod(rq, rq, q), q);
                ++out.spot_checked;
                if (!germain_verify_exhaustive(am, bm, cm, u.p, q)) {
                    ++out.spot_failed;
                    out.failures.push_back("germain witness q=" + std::to_string(q) + " fails for case " +
                                           std::to_string(u.case_id) + ", p=" + std::to_string(u.p) +
                                           ", r=" + std::to_string(r));
                }
            }
        } else {
            const CoprimeForm form = coprimify(instantiate_ternary(u.case_id, u.p, r));
            std::optional<LocalWitness> lw;
            if (job.stages.local) {
                lw = local_eliminates(form);
            } else if (form.obstruction) {
                lw = LocalWitness{"content", form.obstruction};
            }
            if (lw) {
                stage = Stage::Local;
                w = {{"test", lw->test}, {"q", lw->q}};
            } else if (job.stages.nfdescent) {
                const auto nf = nfdescent_eliminates(form, job.kmax, job.nf_cap);
                w = {{"m", nf.m}, {"selmer", mpz_json(nf.selmer_size)}, {"after_valuation", mpz_json(nf.after_valuation)}};
                if (nf.eliminated) {
                    stage = Stage::NfDescent;
                    w["q"] = nf.q_used;
                } else {
                    if (nf.inconclusive)
                        w["reason"] = "descent inconclusive: " + nf.reason;
                    else
                        w["reason"] = nf.reason.empty() ? "a Selmer candidate passes every auxiliary prime" : nf.reason;
                    if (!nf.survivor_exps.empty()) w["candidate"] = nf.survivor_exps;
                }
            } else {
                w["reason"] = "descent stage disabled";
            }
        }
        if (stage == Stage::Survivor && job.stages.thue) w["thue"] = thue_annotation(dc, u.p, r, job.thue_bound);

        ++out.by_stage[static_cast<std::size_t>(stage)];
        if (keep(job.level, stage)) {
            u64 us = 0;
            if (job.timing)
                us = static_cast<u64>(std::chrono::duration_cast<std::chrono::microseconds>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count());
            out.records.push_back({u.case_id, u.p, r, stage, std::move(w), us});
        }
    }
}

void process(const Context& ctx, const Unit& u, std::size_t begin, std::size_t end, TaskResult& out) {
    if (u.route == Route::Chain) {
        process_chain(ctx, u, begin, end, out);
        return;
    }
    Stage stage = Stage::Chabauty;
    json base;
    if (u.route == Route::Chabauty) {
        const auto& row = ctx.chabauty.rows.at(static_cast<std::size_t>(u.case_id - 1));
        base = {{"alpha", mpz_json(row.alpha)},
                {"beta", mpz_json(row.beta)},
                {"listed_points", row.points.size()},
                {"model_ok", row.model_ok && row.points_ok}};
    } else if (u.route == Route::P7) {
        stage = Stage::P7;
        const auto& v = ctx.p7.at(u.case_id);
        base = {{"w2", {3, 5, 9}}, {"rejected", v.solutions.size()}};
    } else {
        stage = Stage::ThueBruteforce;
    }
    for (std::size_t i = begin; i < end; ++i) {
        const u64 r = u.rs[i];
        ++out.by_stage[static_cast<std::size_t>(stage)];
        if (!keep(ctx.job.level, stage)) continue;
        json w = base;
        if (u.route == Route::Thue) {
            auto it = ctx.thue_case3.find(r);
            w = {{"bound", ctx.job.thue_bound}, {"solutions", it == ctx.thue_case3.end() ? json::array() : it->second}};
        }
        out.records.push_back({u.case_id, u.p, r, stage, std::move(w), 0});
    }
}

std::vector<u64> job_r_values(const JobSpec& job, int case_id) {
    std::vector<u64> rs;
    if (!job.r_list.empty()) {
        for (u64 r : job.r_list)
            if (admissible_r(case_id, r)) rs.push_back(r);
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    } else if (job.r_min <= job.r_max) {
        for (u64 r = job.r_min; r <= job.r_max; ++r)
            if (admissible_r(case_id, r)) rs.push_back(r);
    }
    return rs;
}

u64 job_r_max(const JobSpec& job) {
    if (!job.r_list.empty()) return *std::max_element(job.r_list.begin(), job.r_list.end());
    return job.r_max;
}

void validate(const JobSpec& job) {
    if (job.r_list.empty() && job.r_min == 0) throw std::invalid_argument("r_min must be positive");
    for (u64 r : job.r_list)
        if (r == 0) throw std::invalid_argument("r values must be positive");
    if (job.kmax == 0) throw std::invalid_argument("kmax must be positive");
    if (job.workers == 0) throw std::invalid_argument("workers must be positive");
    for (int c : job.cases)
        if (c < 1 || c > 12) throw std::invalid_argument("case ids must lie in 1..12");
    for (u64 p : job.primes)
        if (p < 5 || !is_prime(p)) throw std::invalid_argument("explicit exponents must be primes >= 5");
}

}  // namespace

Report run(const JobSpec& job) {
    validate(job);
    Report rep;
    const bool empty_range = job.r_list.empty() && job.r_min > job.r_max;
    if (empty_range) return rep;

    Context ctx{job, chabauty_check(), {}, {}};
    if (!ctx.chabauty.ok) throw SoundnessError("the p = 5 curve models do not match the descent equations");

    std::vector<Unit> units;
    std::map<std::pair<int, u64>, Aggregate> agg;
    const u64 rmax = job_r_max(job);

    for (int case_id : job.cases) {
        const DescentCase& dc = descent_case(case_id);
        if (dc.fixed_bound) {
            rep.notes.push_back("case " + std::to_string(case_id) + " admits no exponent p >= 5");
            continue;
        }
        const std::vector<u64> rs = job_r_values(job, case_id);
        std::vector<u64> ps = job.primes;
        if (ps.empty()) {
            const u64 bound = mignotte_bound(case_id, rmax);
            for (u64 p : primes_in(std::max<u64>(job.p_min, 5), bound)) ps.push_back(p);
        } else {
            std::erase_if(ps, [&](u64 p) { return p < job.p_min; });
        }
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        if (ps.empty()) continue;

        // exponents allowed by the primitive-divisor sieve, inverted to per-p lists
        const bool use_patel = dc.patel.has_value() && job.stages.patel;
        std::map<u64, std::vector<u64>> passed;
        if (use_patel) {
            const u64 pmax = ps.back();
            for (u64 r : rs)
                for (u64 p : patel_allowed_primes(case_id, r, pmax)) passed[p].push_back(r);
        }

        for (u64 p : ps) {
            Aggregate& a = agg[{case_id, p}];
            a.case_id = case_id;
            a.p = p;
            a.items = rs.size();
            Unit u{case_id, p, Route::Chain, {}};
            if (p == 5) {
                u.route = case_id == 3 ? Route::Thue : Route::Chabauty;
                if (case_id == 3 && !job.stages.thue) u.route = Route::Chain;
                u.rs = rs;
            } else if (p == 7 && dc.patel) {
                if (!ctx.p7.count(case_id)) ctx.p7.emplace(case_id, p7_eliminate(case_id));
                u.route = ctx.p7.at(case_id).eliminated ? Route::P7 : Route::Chain;
                u.rs = rs;
            } else if (use_patel) {
                auto it = passed.find(p);
                if (it != passed.end()) u.rs = std::move(it->second);
                a.by_stage[static_cast<std::size_t>(Stage::Patel)] = rs.size() - u.rs.size();
            } else {
                u.rs = rs;
            }
            if (!u.rs.empty()) units.push_back(std::move(u));
        }
    }

    // p = 5, case 3: bounded search over the whole r window, done once
    for (const auto& u : units) {
        if (u.route != Route::Thue) continue;
        const DescentCase& dc = descent_case(3);
        const u64 lo = u.rs.front(), hi = u.rs.back();
        auto sols = thue_bruteforce(dc.a.materialize(5), dc.b.materialize(5), mpz_class(static_cast<unsigned long>(dc.rhs)),
                                    5, lo, hi, job.thue_bound, false, [](u64 r) { return admissible_r(3, r); });
        for (const auto& s : sols) {
            if (s.tau != 0)
                throw SoundnessError("bounded search found a solution with tau != 0 at r = " + std::to_string(s.r));
            ctx.thue_case3[s.r].push_back({mpz_json(s.sigma), mpz_json(s.tau)});
        }
    }

    // chunked tasks, merged back in (case, p, r) order
    constexpr std::size_t kChunk = 1024;
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < units.size(); ++i)
        for (std::size_t b = 0; b < units[i].rs.size(); b += kChunk)
            tasks.push_back({i, b, std::min(units[i].rs.size(), b + kChunk)});

    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            try {
                process(ctx, units[tasks[t].unit], tasks[t].begin, tasks[t].end, results[t]);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(tasks.size());
                return;
            }
        }
    };
    const unsigned nw = std::max(1u, std::min<unsigned>(job.workers, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size()))));
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nw; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);

    std::vector<std::string> failures;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        auto& res = results[t];
        const Unit& u = units[tasks[t].unit];
        Aggregate& a = agg[{u.case_id, u.p}];
        for (std::size_t s = 0; s < kStageCount; ++s) a.by_stage[s] += res.by_stage[s];
        rep.spot_checked += res.spot_checked;
        rep.spot_failed += res.spot_failed;
        failures.insert(failures.end(), res.failures.begin(), res.failures.end());
        for (auto& rec : res.records) rep.records.push_back(std::move(rec));
        res.records.clear();
    }

    if (job.level == RecordLevel::Full) {
        // items removed by the primitive-divisor sieve never reached a unit
        for (int case_id : job.cases) {
            const DescentCase& dc = descent_case(case_id);
            if (dc.fixed_bound || !dc.patel || !job.stages.patel) continue;
            std::map<u64, std::vector<u64>> reached;
            for (const auto& u : units)
                if (u.case_id == case_id && u.route == Route::Chain) reached[u.p] = u.rs;
            const auto rs = job_r_values(job, case_id);
            for (const auto& [key, a] : agg) {
                if (key.first != case_id || a.by_stage[static_cast<std::size_t>(Stage::Patel)] == 0) continue;
                const auto& in = reached[key.second];
                for (u64 r : rs)
                    if (!std::binary_search(in.begin(), in.end(), r))
                        rep.records.push_back({case_id, key.second, r, Stage::Patel, {{"rule", "primitive-divisor"}}, 0});
            }
        }
    }
    std::sort(rep.records.begin(), rep.records.end(), [](const Record& x, const Record& y) {
        if (x.case_id != y.case_id) return x.case_id < y.case_id;
        if (x.p != y.p) return x.p < y.p;
        return x.r < y.r;
    });
    for (auto& [key, a] : agg) rep.aggregates.push_back(a);

    if (rep.spot_failed) {
        std::string msg = "germain spot-check failed for " + std::to_string(rep.spot_failed) + " item(s)";
        for (std::size_t i = 0; i < failures.size() && i < 10; ++i) msg += "\n  " + failures[i];
        throw SoundnessError(msg);
    }
    return rep;
}

Aggregate aggregate_total(const Report& rep, int case_id, u64 p) {
    Aggregate t{case_id, p};
    for (const auto& a : rep.aggregates) {
        if (a.case_id != case_id || (p && a.p != p)) continue;
        t.items += a.items;
        for (std::size_t s = 0; s < kStageCount; ++s) t.by_stage[s] += a.by_stage[s];
    }
    return t;
}

json report_json(const Report& rep) {
    json recs = json::array();
    for (const auto& r : rep.records)
        recs.push_back({{"case", r.case_id}, {"p", r.p}, {"r", r.r}, {"stage", stage_name(r.stage)}, {"witness", r.witness}, {"us", r.us}});
    json aggs = json::array();
    for (const auto& a : rep.aggregates) {
        json st = json::object();
        for (std::size_t s = 0; s < kStageCount; ++s) st[stage_name(static_cast<Stage>(s))] = a.by_stage[s];
        aggs.push_back({{"case", a.case_id}, {"p", a.p}, {"items", a.items}, {"stages", st}});
    }
    return {{"records", recs},
            {"aggregates", aggs},
            {"spot_check", {{"checked", rep.spot_checked}, {"failed", rep.spot_failed}}},
            {"notes", rep.notes}};
}

std::string emit_json(const Report& rep) { return report_json(rep).dump(1) + "\n"; }

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string emit_csv(const Report& rep) {
    std::ostringstream os;
    os << "case,p,r,stage,witness,us\n";
    for (const auto& r : rep.records)
        os << r.case_id << ',' << r.p << ',' << r.r << ',' << stage_name(r.stage) << ',' << csv_field(r.witness.dump())
           << ',' << r.us << '\n';
    // aggregate rows reuse the columns: r is empty and witness holds the count
    for (const auto& a : rep.aggregates) {
        os << a.case_id << ',' << a.p << ",,items," << a.items << ",0\n";
        for (std::size_t s = 0; s < kStageCount; ++s)
            if (a.by_stage[s]) os << a.case_id << ',' << a.p << ",," << stage_name(static_cast<Stage>(s)) << ',' << a.by_stage[s] << ",0\n";
    }
    return os.str();
}

void write_report(const Report& rep, const std::string& path, const std::string& format) {
    std::string body;
    if (format == "json") {
        body = emit_json(rep);
    } else if (format == "csv") {
        body = emit_csv(rep);
    } else {
        throw std::invalid_argument("unknown format: " + format);
    }
    if (path.empty() || path == "-") {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path);
    f << body;
    if (!f) throw std::ios_base::failure("write failed for " + path);
}

std::vector<Table2Row> table2_counts(u64 rmax, bool with_distinct) {
    std::vector<Table2Row> rows;
    for (int c = 1; c <= 4; ++c) {
        const u64 pmax = mignotte_bound(c, rmax);
        Table2Row row{c, pmax, patel_count(c, rmax, pmax, PatelConvention::Scan), 0};
        if (with_distinct) row.distinct = patel_count(c, rmax, pmax, PatelConvention::Distinct);
        rows.push_back(row);
    }
    return rows;
}

std::vector<MignotteRow> mignotte_rows(u64 rmax) {
    std::vector<MignotteRow> rows;
    for (int c = 1; c <= 8; ++c) rows.push_back({c, mignotte_bound_real(c, rmax), mignotte_bound(c, rmax)});
    return rows;
}

}  // namespace cubesieve
