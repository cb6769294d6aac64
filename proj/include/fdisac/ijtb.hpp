#pragma once

#include <string>
#include <vector>

#include "fdisac/subproblem.hpp"

namespace fdisac {

struct IjtbOptions {
  int max_iterations = 30;
  double tolerance = 1e-3;  // bps/Hz on |delta SR_total|
  int window = 2;           // successive small changes needed to stop
  // Seed the first expansion with uniform UL power and vartheta~ = sqrt(hat
  // Gamma). With the all-zero start the UL powers can never leave zero.
  bool warm_start = true;
  conic::Tolerances solver;
};

struct IterationRecord {
  int iteration = 0;
  double surrogate = 0.0;
  double sr_dl = 0.0;
  double sr_ul = 0.0;
  double sr_total = 0.0;
  double ismr = 0.0;  // NaN when the mainlobe receives no power
  double util_v = 0.0, util_w = 0.0, util_ul = 0.0;
  conic::Status status = conic::Status::Optimal;
  int newton_steps = 0;
  double wall_seconds = 0.0;
};

struct SolveReport {
  double initial_sr = 0.0;  // true total SR at the first expansion point
  std::vector<IterationRecord> iterations;
  DesignPoint final_point;
  bool converged = false;
  bool degraded = false;  // stopped after repeated solver failures
  int iteration_count = 0;
  std::vector<double> rank_metric;  // lambda_2 / lambda_1 per V_l
  std::vector<std::string> notes;

  /// min over m of SR_{m+1} - SR_m, starting from initial_sr.
  double min_increment() const;
  conic::Status worst_status() const;
};

/// Phi_k^{-1} h_{t,k}, normalized.
CVec ul_beamformer(int k, const ChannelSet& ch, const CMat& q, const RVec& p);
/// Fills x.u_rx with the closed-form filters for the current (p, Q).
void set_ul_beamformers(const ChannelSet& ch, DesignPoint& x);

SolveReport run_ijtb(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
                     const IjtbOptions& opt = {});

/// Matched-filter DL beams with equal power and AN spread over the orthogonal
/// complement of the DL channels.
DesignPoint bench_iso_an(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks);
/// As above without AN; the AN budget is split equally between DL and UL.
DesignPoint bench_iso_no_an(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks);

struct FeasibleDraw {
  DesignPoint point;
  bool ismr_ok = false;
  int draws = 0;
};

/// Random covariances and powers meeting every budget with equality and
/// random unit receive filters; redrawn up to 100 times until ISMR holds.
FeasibleDraw bench_feasible(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
                            Rng& rng);

/// Achieved ISMR of Q, NaN when the mainlobe power is degenerate.
double achieved_ismr(const CMat& q, const SensingMasks& masks);

}  // namespace fdisac
