#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubesieve/arith.hpp"

namespace cubesieve {

enum class Stage { Patel, Chabauty, ThueBruteforce, P7, Germain, Local, NfDescent, Survivor };
constexpr std::size_t kStageCount = 8;
const char* stage_name(Stage s);

// which records are kept; aggregates are always complete
enum class RecordLevel {
    Full,       // every item, including primitive-divisor eliminations
    Sieved,     // everything except primitive-divisor eliminations
    Residual,   // items that got past the Germain test
    Survivors,
};
RecordLevel parse_record_level(const std::string& s);

struct StageSelection {
    bool patel = true;
    bool germain = true;
    bool local = true;
    bool nfdescent = true;
    bool thue = true;
};
StageSelection parse_stages(const std::string& list);

struct JobSpec {
    std::vector<int> cases{1, 2, 3, 4};
    u64 r_min = 1;
    u64 r_max = 1000;
    std::vector<u64> r_list;  // when nonempty, only these r are used
    std::vector<u64> primes;  // explicit exponents; empty means the Mignotte bound
    u64 p_min = 5;
    u64 kmax = 1000;
    StageSelection stages;
    unsigned workers = 1;
    RecordLevel level = RecordLevel::Sieved;
    bool timing = false;
    i64 thue_bound = 10000;
    u64 spot_check_per_mille = 10;
    std::size_t nf_cap = 200000;
};

struct Record {
    int case_id;
    u64 p;
    u64 r;
    Stage stage;
    nlohmann::json witness;
    u64 us = 0;
};

struct Aggregate {
    int case_id;
    u64 p;
    u64 items = 0;
    std::array<u64, kStageCount> by_stage{};
};

struct Report {
    std::vector<Record> records;
    std::vector<Aggregate> aggregates;  // sorted by (case, p)
    u64 spot_checked = 0;
    u64 spot_failed = 0;
    std::vector<std::string> notes;
};

struct SoundnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Report run(const JobSpec& job);

nlohmann::json report_json(const Report& rep);
std::string emit_json(const Report& rep);
std::string emit_csv(const Report& rep);
void write_report(const Report& rep, const std::string& path, const std::string& format);

// per case totals of an aggregate list, optionally restricted to one p
Aggregate aggregate_total(const Report& rep, int case_id, u64 p = 0);

struct Table2Row {
    int case_id;
    u64 pmax;
    u64 scan;
    u64 distinct;
};
std::vector<Table2Row> table2_counts(u64 rmax = 1000000, bool with_distinct = false);

struct MignotteRow {
    int case_id;
    double real;
    u64 bound;
};
std::vector<MignotteRow> mignotte_rows(u64 rmax = 1000000);

std::vector<int> parse_case_list(const std::string& s);

}  // namespace cubesieve
