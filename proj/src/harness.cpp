#include "fdisac/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace fdisac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kTagFeasible = 0xFEA5;

const char* kind_name(RowKind k) {
  switch (k) {
    case RowKind::Trial: return "trial";
    case RowKind::Aggregate: return "aggregate";
  }
  return "?";
}

RowKind kind_from_string(const std::string& s) {
  if (s == "trial") return RowKind::Trial;
  if (s == "aggregate") return RowKind::Aggregate;
  throw InvalidArgument("unknown row type '" + s + "'");
}

// Infinite values travel as "-inf" / "inf" strings, as in scenario configs.
nlohmann::json axis_to_json(const SweepAxis& a) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : a.values) {
    if (std::isinf(v)) values.push_back(v > 0 ? "inf" : "-inf");
    else values.push_back(v);
  }
  return {{"name", a.name}, {"values", values}};
}

SweepAxis axis_from_json(const nlohmann::json& j) {
  SweepAxis a;
  a.name = j.at("name").get<std::string>();
  for (const auto& v : j.at("values")) {
    if (v.is_number()) {
      a.values.push_back(v.get<double>());
    } else if (v == "-inf") {
      a.values.push_back(-std::numeric_limits<double>::infinity());
    } else if (v == "inf") {
      a.values.push_back(std::numeric_limits<double>::infinity());
    } else {
      throw InvalidArgument("axis '" + a.name + "' values must be numbers or \"-inf\"");
    }
  }
  return a;
}

bool status_ok(const std::string& s) { return s == "optimal" || s == "near-optimal" || s == "closed-form"; }

double worst_rank(const DesignPoint& x) {
  double worst = 0.0;
  for (const auto& v : x.v_cov) {
    Eigen::SelfAdjointEigenSolver<CMat> es(v, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Eigen::Index n = ev.size();
    if (n >= 2 && ev[n - 1] > 0.0) worst = std::max(worst, std::max(0.0, ev[n - 2]) / ev[n - 1]);
  }
  return worst;
}

double util(double used, double budget) { return budget > 0.0 ? used / budget : 0.0; }

void fill_point_metrics(ResultRow& r, const ChannelSet& ch, const Budgets& b, const SensingMasks& m,
                        const DesignPoint& x) {
  r.sr_dl = sum_secrecy_dl(ch, x);
  r.sr_ul = sum_secrecy_ul(ch, x);
  r.sr_total = r.sr_dl + r.sr_ul;
  r.sr_dl_clipped = std::max(0.0, r.sr_dl);
  r.sr_ul_clipped = std::max(0.0, r.sr_ul);
  r.sr_total_clipped = r.sr_dl_clipped + r.sr_ul_clipped;
  const double is = ch.n_eve() > 0 ? achieved_ismr(x.transmit_covariance(), m) : kNaN;
  r.ismr_db = std::isfinite(is) && is > 0.0 ? linear_to_db(is) : kNaN;
  r.util_v = util(x.v_sum().trace().real(), b.p_v);
  r.util_w = util(x.w_cov.trace().real(), b.p_w);
  r.util_ul = util(x.p_ul.sum(), b.p_ul);
  r.rank_metric = worst_rank(x);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw InvalidArgument("bad number '" + s + "'");
  return v;
}

// Mean over the trial rows of one (series, sweep, method) cell, with standard
// errors for the rate and ISMR columns.
ResultRow aggregate(const std::vector<const ResultRow*>& rows) {
  ResultRow mean = *rows.front();
  mean.kind = RowKind::Aggregate;
  mean.trial = -1;
  mean.seed = 0;
  mean.status = "aggregate";
  mean.note.clear();
  mean.count = static_cast<int>(rows.size());
  mean.converged = true;
  mean.degraded = false;
  for (const auto* r : rows) {
    mean.converged = mean.converged && r->converged;
    mean.degraded = mean.degraded || r->degraded;
  }

  // NaN entries (dark mainlobe, failed trials) are skipped per field.
  auto stat = [&](double ResultRow::*f, double ResultRow::*se) {
    double s = 0.0, s2 = 0.0;
    int n = 0;
    for (const auto* r : rows) {
      const double v = r->*f;
      if (std::isnan(v)) continue;
      s += v;
      s2 += v * v;
      ++n;
    }
    const double m = n ? s / n : kNaN;
    mean.*f = m;
    if (se) mean.*se = n > 1 ? std::sqrt(std::max(0.0, (s2 - n * m * m) / (n - 1)) / n) : n ? 0.0 : kNaN;
  };
  for (auto f : {&ResultRow::iterations, &ResultRow::sr_dl_clipped, &ResultRow::sr_ul_clipped,
                 &ResultRow::util_v, &ResultRow::util_w, &ResultRow::util_ul, &ResultRow::min_increment,
                 &ResultRow::rank_metric})
    stat(f, nullptr);
  stat(&ResultRow::sr_dl, &ResultRow::sr_dl_se);
  stat(&ResultRow::sr_ul, &ResultRow::sr_ul_se);
  stat(&ResultRow::sr_total, &ResultRow::sr_total_se);
  stat(&ResultRow::sr_total_clipped, &ResultRow::sr_total_clipped_se);
  stat(&ResultRow::ismr_db, &ResultRow::ismr_db_se);
  return mean;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::Ijtb: return "ijtb";
    case Method::IsoAn: return "iso_an";
    case Method::IsoNoAn: return "iso_no_an";
    case Method::Feasible: return "feasible";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::Ijtb, Method::IsoAn, Method::IsoNoAn, Method::Feasible})
    if (s == to_string(m)) return m;
  throw InvalidArgument("unknown method '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (methods.empty()) throw InvalidArgument("at least one method is required");
  if (figure.empty()) throw InvalidArgument("figure tag must not be empty");
  if (!series.name.empty() && series.values.empty()) throw InvalidArgument("series axis has no values");
  if (!sweep.name.empty() && sweep.values.empty()) throw InvalidArgument("sweep axis has no values");
  if (!series.name.empty() && series.name == sweep.name) throw InvalidArgument("series and sweep axes coincide");
  if (ijtb.max_iterations < 1) throw InvalidArgument("ijtb.max_iterations must be >= 1");
  for (std::size_t a = 0; a < series_count(); ++a)
    for (std::size_t b = 0; b < sweep_count(); ++b) config_at(a, b).validate();
}

ScenarioConfig ExperimentSpec::config_at(std::size_t series_index, std::size_t sweep_index) const {
  ScenarioConfig cfg = base;
  if (!series.name.empty()) set_config_field(cfg, series.name, series.values.at(series_index));
  if (!sweep.name.empty()) set_config_field(cfg, sweep.name, sweep.values.at(sweep_index));
  return cfg;
}

void to_json(nlohmann::json& j, const ExperimentSpec& s) {
  std::vector<std::string> methods;
  for (Method m : s.methods) methods.emplace_back(to_string(m));
  j = {{"figure", s.figure},
       {"base", s.base},
       {"methods", methods},
       {"trials", s.trials},
       {"seed_base", s.seed_base},
       {"out_dir", s.out_dir},
       {"ijtb",
        {{"max_iterations", s.ijtb.max_iterations},
         {"tolerance", s.ijtb.tolerance},
         {"window", s.ijtb.window},
         {"warm_start", s.ijtb.warm_start},
         {"solver",
          {{"feasibility", s.ijtb.solver.feasibility},
           {"gap", s.ijtb.solver.gap},
           {"max_iterations", s.ijtb.solver.max_iterations},
           {"barrier_growth", s.ijtb.solver.barrier_growth}}}}}};
  if (!s.series.name.empty()) j["series"] = axis_to_json(s.series);
  if (!s.sweep.name.empty()) j["sweep"] = axis_to_json(s.sweep);
}

void from_json(const nlohmann::json& j, ExperimentSpec& s) {
  if (!j.is_object()) throw InvalidArgument("experiment spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "figure") s.figure = value.get<std::string>();
    else if (key == "base") from_json(value, s.base);
    else if (key == "series") s.series = axis_from_json(value);
    else if (key == "sweep") s.sweep = axis_from_json(value);
    else if (key == "trials") s.trials = value.get<int>();
    else if (key == "seed_base") s.seed_base = value.get<std::uint64_t>();
    else if (key == "out_dir") s.out_dir = value.get<std::string>();
    else if (key == "methods") {
      s.methods.clear();
      for (const auto& m : value) s.methods.push_back(method_from_string(m.get<std::string>()));
    } else if (key == "ijtb") {
      for (const auto& [k, v] : value.items()) {
        if (k == "max_iterations") s.ijtb.max_iterations = v.get<int>();
        else if (k == "tolerance") s.ijtb.tolerance = v.get<double>();
        else if (k == "window") s.ijtb.window = v.get<int>();
        else if (k == "warm_start") s.ijtb.warm_start = v.get<bool>();
        else if (k == "solver") {
          for (const auto& [sk, sv] : v.items()) {
            if (sk == "feasibility") s.ijtb.solver.feasibility = sv.get<double>();
            else if (sk == "gap") s.ijtb.solver.gap = sv.get<double>();
            else if (sk == "max_iterations") s.ijtb.solver.max_iterations = sv.get<int>();
            else if (sk == "barrier_growth") s.ijtb.solver.barrier_growth = sv.get<double>();
            else throw InvalidArgument("unknown solver option '" + sk + "'");
          }
        } else throw InvalidArgument("unknown ijtb option '" + k + "'");
      }
    } else if (key.rfind("_", 0) == 0) {
      // Keys starting with an underscore are comments.
    } else {
      throw InvalidArgument("unknown experiment field '" + key + "'");
    }
  }
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open experiment spec " + path);
  ExperimentSpec s = nlohmann::json::parse(in, nullptr, true, true).get<ExperimentSpec>();
  s.validate();
  return s;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spec_hash(const ExperimentSpec& s) { return fnv1a_hex(nlohmann::json(s).dump()); }

bool ResultTable::all_ok() const {
  for (const auto& r : rows)
    if (r.kind == RowKind::Trial && !status_ok(r.status)) return false;
  return true;
}

ResultRow run_trial(const ExperimentSpec& spec, std::size_t series_index, std::size_t sweep_index,
                    Method method, int trial) {
  ResultRow r;
  r.figure = spec.figure;
  r.series_name = spec.series.name;
  r.series_value = spec.series.name.empty() ? 0.0 : spec.series.values[series_index];
  r.sweep_name = spec.sweep.name;
  r.sweep_value = spec.sweep.name.empty() ? 0.0 : spec.sweep.values[sweep_index];
  r.method = method;
  r.trial = trial;
  r.seed = spec.seed_base + static_cast<std::uint64_t>(trial);
  r.min_increment = kNaN;

  try {
    ScenarioConfig cfg = spec.config_at(series_index, sweep_index);
    cfg.seed = r.seed;
    r.ismr_max_db = cfg.ismr_max_db;
    const ChannelSet ch = make_channel_set(cfg);
    const SensingMasks masks = build_sensing_masks(cfg, ch);
    const Budgets b = Budgets::from(cfg);

    switch (method) {
      case Method::Ijtb: {
        const SolveReport rep = run_ijtb(ch, cfg, masks, spec.ijtb);
        fill_point_metrics(r, ch, b, masks, rep.final_point);
        r.iterations = rep.iteration_count;
        r.converged = rep.converged;
        r.degraded = rep.degraded;
        r.min_increment = rep.min_increment();
        r.status = rep.degraded ? "degraded" : conic::to_string(rep.worst_status());
        std::string note;
        for (const auto& n : rep.notes) note += (note.empty() ? "" : "; ") + n;
        r.note = sanitize(note);
        break;
      }
      case Method::IsoAn:
      case Method::IsoNoAn: {
        const DesignPoint x = method == Method::IsoAn ? bench_iso_an(ch, cfg, masks) : bench_iso_no_an(ch, cfg, masks);
        fill_point_metrics(r, ch, b, masks, x);
        r.status = "closed-form";
        r.converged = true;
        break;
      }
      case Method::Feasible: {
        // Shared across the sweep axis so that only the ISMR screening differs.
        Rng rng = make_stream(r.seed, kTagFeasible, series_index);
        const FeasibleDraw d = bench_feasible(ch, cfg, masks, rng);
        fill_point_metrics(r, ch, b, masks, d.point);
        r.status = "closed-form";
        r.converged = true;
        r.iterations = d.draws;
        if (!d.ismr_ok) r.note = "ismr-violated after 100 draws";
        break;
      }
    }
  } catch (const std::exception& e) {
    r.status = "error";
    r.degraded = true;
    r.note = sanitize(e.what());
    for (double* f : {&r.sr_dl, &r.sr_ul, &r.sr_total, &r.sr_dl_clipped, &r.sr_ul_clipped,
                      &r.sr_total_clipped, &r.ismr_db, &r.util_v, &r.util_w, &r.util_ul, &r.rank_metric})
      *f = kNaN;
  }
  return r;
}

ResultTable run_experiment(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  struct Task {
    std::size_t series, sweep;
    Method method;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < spec.series_count(); ++a)
    for (std::size_t b = 0; b < spec.sweep_count(); ++b)
      for (Method m : spec.methods)
        for (int t = 0; t < spec.trials; ++t) tasks.push_back({a, b, m, t});

  std::vector<ResultRow> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      results[i] = run_trial(spec, t.series, t.sweep, t.method, t.trial);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ResultTable table;
  const std::size_t per_cell = static_cast<std::size_t>(spec.trials);
  for (std::size_t c = 0; c < tasks.size(); c += per_cell) {
    std::vector<const ResultRow*> cell;
    for (std::size_t i = c; i < c + per_cell; ++i) {
      table.rows.push_back(results[i]);
      cell.push_back(&results[i]);
    }
    table.rows.push_back(aggregate(cell));
  }
  return table;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "row_type", "figure", "series_name", "series_value", "sweep_name", "sweep_value", "method",
      "trial", "seed", "status", "converged", "degraded", "iterations", "sr_dl", "sr_ul", "sr_total",
      "sr_dl_clipped", "sr_ul_clipped", "sr_total_clipped", "ismr_db", "ismr_max_db", "util_v",
      "util_w", "util_ul", "min_increment", "rank_metric", "count", "sr_dl_se", "sr_ul_se", "sr_total_se",
      "sr_total_clipped_se", "ismr_db_se", "note"};
  return cols;
}

void write_csv(const ResultTable& t, std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : t.rows) {
    const std::vector<std::string> f = {kind_name(r.kind),
                                        sanitize(r.figure),
                                        sanitize(r.series_name),
                                        format_double(r.series_value),
                                        sanitize(r.sweep_name),
                                        format_double(r.sweep_value),
                                        to_string(r.method),
                                        std::to_string(r.trial),
                                        std::to_string(r.seed),
                                        sanitize(r.status),
                                        r.converged ? "1" : "0",
                                        r.degraded ? "1" : "0",
                                        format_double(r.iterations),
                                        format_double(r.sr_dl),
                                        format_double(r.sr_ul),
                                        format_double(r.sr_total),
                                        format_double(r.sr_dl_clipped),
                                        format_double(r.sr_ul_clipped),
                                        format_double(r.sr_total_clipped),
                                        format_double(r.ismr_db),
                                        format_double(r.ismr_max_db),
                                        format_double(r.util_v),
                                        format_double(r.util_w),
                                        format_double(r.util_ul),
                                        format_double(r.min_increment),
                                        format_double(r.rank_metric),
                                        std::to_string(r.count),
                                        format_double(r.sr_dl_se),
                                        format_double(r.sr_ul_se),
                                        format_double(r.sr_total_se),
                                        format_double(r.sr_total_clipped_se),
                                        format_double(r.ismr_db_se),
                                        sanitize(r.note)};
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << '\n';
  }
}

ResultTable read_csv(std::istream& is) {
  const auto& cols = csv_columns();
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty results file");
  if (split_csv_line(line) != cols) throw InvalidArgument("unexpected CSV header");
  ResultTable t;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != cols.size())
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) + " fields");
    ResultRow r;
    std::size_t i = 0;
    r.kind = kind_from_string(f[i++]);
    r.figure = f[i++];
    r.series_name = f[i++];
    r.series_value = parse_double(f[i++]);
    r.sweep_name = f[i++];
    r.sweep_value = parse_double(f[i++]);
    r.method = method_from_string(f[i++]);
    r.trial = std::stoi(f[i++]);
    r.seed = std::stoull(f[i++]);
    r.status = f[i++];
    r.converged = f[i++] == "1";
    r.degraded = f[i++] == "1";
    for (double* d : {&r.iterations, &r.sr_dl, &r.sr_ul, &r.sr_total, &r.sr_dl_clipped, &r.sr_ul_clipped,
                      &r.sr_total_clipped, &r.ismr_db, &r.ismr_max_db, &r.util_v, &r.util_w, &r.util_ul,
                      &r.min_increment, &r.rank_metric})
      *d = parse_double(f[i++]);
    r.count = std::stoi(f[i++]);
    for (double* d : {&r.sr_dl_se, &r.sr_ul_se, &r.sr_total_se, &r.sr_total_clipped_se, &r.ismr_db_se})
      *d = parse_double(f[i++]);
    r.note = f[i++];
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string emit(const ResultTable& t, const ExperimentSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.out_dir);
  const fs::path csv = fs::path(spec.out_dir) / (spec.figure + ".csv");
  const fs::path side = fs::path(spec.out_dir) / (spec.figure + ".json");

  std::ostringstream body;
  write_csv(t, body);
  const std::string bytes = body.str();
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + csv.string());
    out << bytes;
  }
  const nlohmann::json sidecar = {{"spec", spec},
                                  {"spec_hash", spec_hash(spec)},
                                  {"columns", csv_columns()},
                                  {"rows", t.rows.size()},
                                  {"csv", csv.filename().string()},
                                  {"csv_hash", fnv1a_hex(bytes)}};
  std::ofstream out(side);
  if (!out) throw InvalidArgument("cannot write " + side.string());
  out << sidecar.dump(2) << '\n';
  return csv.string();
}

AuditReport audit_results(const std::string& csv_path) {
  namespace fs = std::filesystem;
  AuditReport rep;
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    rep.errors.push_back("cannot open " + csv_path);
    return rep;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  ResultTable t;
  try {
    std::istringstream is(bytes);
    t = read_csv(is);
  } catch (const std::exception& e) {
    rep.errors.push_back(e.what());
    return rep;
  }

  // Per-cell bookkeeping for the row-count check.
  std::map<std::tuple<double, double, std::string>, std::pair<int, int>> cells;
  for (const auto& r : t.rows) {
    const std::string where = std::string(kind_name(r.kind)) + " " + to_string(r.method) + " sweep=" +
                              format_double(r.sweep_value) + " trial=" + std::to_string(r.trial);
    auto& cell = cells[{r.series_value, r.sweep_value, to_string(r.method)}];
    if (r.kind != RowKind::Trial) {
      ++rep.aggregate_rows;
      ++cell.second;
      continue;
    }
    ++rep.trial_rows;
    ++cell.first;
    if (!status_ok(r.status)) rep.errors.push_back(where + ": status " + r.status);
    if (r.status == "error") continue;
    const double slack = 1e-6;
    // Iso-No-AN moves the AN budget onto V and p, so only W is checked there.
    const bool folded = r.method == Method::IsoNoAn;
    for (double u : {folded ? 0.0 : r.util_v, r.util_w, folded ? 0.0 : r.util_ul})
      if (u > 1.0 + slack) rep.errors.push_back(where + ": budget utilization " + format_double(u));
    for (double c : {r.sr_dl_clipped, r.sr_ul_clipped, r.sr_total_clipped})
      if (c < 0.0) rep.errors.push_back(where + ": negative clipped rate");
    if (std::abs(r.sr_total - r.sr_dl - r.sr_ul) > 1e-9 * (1.0 + std::abs(r.sr_total)))
      rep.errors.push_back(where + ": sr_total != sr_dl + sr_ul");
    if (r.method == Method::Ijtb) {
      if (std::isfinite(r.ismr_db) && r.ismr_db > r.ismr_max_db + slack)
        rep.errors.push_back(where + ": achieved ISMR " + format_double(r.ismr_db) + " dB above cap");
      if (r.min_increment < -slack) rep.errors.push_back(where + ": non-monotone trace");
      if (!r.converged) rep.warnings.push_back(where + ": stopped at the iteration cap");
    }
    if (r.method == Method::Feasible && !r.note.empty()) rep.warnings.push_back(where + ": " + r.note);
  }

  fs::path side = fs::path(csv_path);
  side.replace_extension(".json");
  if (!fs::exists(side)) {
    rep.warnings.push_back("no sidecar " + side.string());
    return rep;
  }
  try {
    std::ifstream sin(side);
    const nlohmann::json j = nlohmann::json::parse(sin);
    const ExperimentSpec spec = j.at("spec").get<ExperimentSpec>();
    if (spec_hash(spec) != j.at("spec_hash").get<std::string>())
      rep.errors.push_back("spec hash mismatch");
    if (fnv1a_hex(bytes) != j.at("csv_hash").get<std::string>()) rep.errors.push_back("CSV hash mismatch");
    if (j.at("rows").get<std::size_t>() != t.rows.size()) rep.errors.push_back("row count differs from sidecar");
    const std::size_t expect_cells = spec.series_count() * spec.sweep_count() * spec.methods.size();
    if (cells.size() != expect_cells)
      rep.errors.push_back("expected " + std::to_string(expect_cells) + " cells, found " + std::to_string(cells.size()));
    for (const auto& [key, counts] : cells) {
      if (counts.first != spec.trials || counts.second != 1) {
        rep.errors.push_back("cell " + std::get<2>(key) + " sweep=" + format_double(std::get<1>(key)) +
                             " has " + std::to_string(counts.first) + " trial and " +
                             std::to_string(counts.second) + " aggregate rows");
      }
    }
  } catch (const std::exception& e) {
    rep.errors.push_back(std::string("sidecar: ") + e.what());
  }
  return rep;
}

}  // namespace fdisac
