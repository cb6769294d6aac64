#pragma once

#include <cstdint>
#include <limits>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdisac/ijtb.hpp"

namespace fdisac {

enum class Method { Ijtb, IsoAn, IsoNoAn, Feasible };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

/// One swept configuration field.
struct SweepAxis {
  std::string name;  // ScenarioConfig field name, e.g. "r_ul" or "n_eve"
  std::vector<double> values;
};

/// Grid of scenarios to simulate. The optional series axis is the outer loop
/// (one curve per value), the sweep axis the inner one (the x-axis).
struct ExperimentSpec {
  std::string figure = "experiment";
  ScenarioConfig base;
  SweepAxis series;  // empty name: no series axis
  SweepAxis sweep;   // empty name: single point
  std::vector<Method> methods{Method::Ijtb};
  int trials = 20;
  std::uint64_t seed_base = 1;
  std::string out_dir = "results";
  IjtbOptions ijtb;

  /// Throws InvalidArgument for unknown fields, empty method lists,
  /// trials < 1, or a grid point whose config fails validation.
  void validate() const;
  /// Config at (series index, sweep index), seed not yet set.
  ScenarioConfig config_at(std::size_t series_index, std::size_t sweep_index) const;
  std::size_t series_count() const { return series.name.empty() ? 1 : series.values.size(); }
  std::size_t sweep_count() const { return sweep.name.empty() ? 1 : sweep.values.size(); }
};

void to_json(nlohmann::json& j, const ExperimentSpec& s);
void from_json(const nlohmann::json& j, ExperimentSpec& s);
ExperimentSpec load_experiment(const std::string& path);

/// Canonical 64-bit FNV-1a hash of the spec JSON, as 16 hex digits.
std::string spec_hash(const ExperimentSpec& s);
std::string fnv1a_hex(const std::string& bytes);

inline constexpr double kNaNValue = std::numeric_limits<double>::quiet_NaN();

enum class RowKind { Trial, Aggregate };

struct ResultRow {
  RowKind kind = RowKind::Trial;
  std::string figure;
  std::string series_name;
  double series_value = 0.0;
  std::string sweep_name;
  double sweep_value = 0.0;
  Method method = Method::Ijtb;
  int trial = -1;        // -1 on aggregate rows
  std::uint64_t seed = 0;
  std::string status;    // solver status, "closed-form", "error", or "aggregate"
  bool converged = false;
  bool degraded = false;
  double iterations = 0.0;  // mean on aggregate rows
  double sr_dl = 0.0, sr_ul = 0.0, sr_total = 0.0;
  double sr_dl_clipped = 0.0, sr_ul_clipped = 0.0, sr_total_clipped = 0.0;
  double ismr_db = 0.0;  // achieved; NaN when the mainlobe is dark
  double ismr_max_db = 0.0;
  double util_v = 0.0, util_w = 0.0, util_ul = 0.0;
  double min_increment = 0.0;  // IJTB only, NaN otherwise
  double rank_metric = 0.0;    // worst lambda_2/lambda_1 over V_l
  int count = 1;               // trials behind an aggregate row
  // Standard errors of the mean; aggregate rows only, NaN on trial rows.
  double sr_dl_se = kNaNValue, sr_ul_se = kNaNValue, sr_total_se = kNaNValue;
  double sr_total_clipped_se = kNaNValue, ismr_db_se = kNaNValue;
  std::string note;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  bool all_ok() const;  // every trial row optimal or near-optimal
};

/// Runs every (series, sweep, method, trial) cell on `jobs` worker threads.
/// Trial t uses channel seed seed_base + t for every grid point and method.
/// Rows are ordered by (series, sweep, method, trial) and followed, per
/// (series, sweep, method), by one aggregate row of means and standard errors.
ResultTable run_experiment(const ExperimentSpec& spec, int jobs = 1);

/// Evaluates one cell; never throws (failures become "error" rows).
ResultRow run_trial(const ExperimentSpec& spec, std::size_t series_index, std::size_t sweep_index,
                    Method method, int trial);

const std::vector<std::string>& csv_columns();
void write_csv(const ResultTable& t, std::ostream& os);
ResultTable read_csv(std::istream& is);
/// Writes <out_dir>/<figure>.csv and <figure>.json; returns the CSV path.
std::string emit(const ResultTable& t, const ExperimentSpec& spec);

struct AuditReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  int trial_rows = 0;
  int aggregate_rows = 0;
  bool ok() const { return errors.empty(); }
};

/// Checks a CSV (and its sidecar, when present) for header and row-count
/// consistency, the spec hash, and the per-row invariants: budget
/// utilizations <= 1, achieved ISMR <= ISMR_max for IJTB rows, non-negative
/// clipped rates, monotone IJTB traces.
AuditReport audit_results(const std::string& csv_path);

}  // namespace fdisac
