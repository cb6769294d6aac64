#pragma once

#include <string>
#include <vector>

#include "fdisac/conic.hpp"
#include "fdisac/surrogate.hpp"

namespace fdisac {

/// Linear budget values taken from the scenario.
struct Budgets {
  double p_v = 0.0;
  double p_w = 0.0;
  double p_ul = 0.0;
  double ismr_max = 0.0;

  static Budgets from(const ScenarioConfig& cfg);
};

/// Where each optimization variable lives in the real vector of the program:
/// [p (K) | varpi (K) | vartheta (K) | V_1 .. V_L (N_T^2 each) | W (N_T^2)].
struct P13Layout {
  int n_tx = 0, n_dl = 0, n_ul = 0;
  int p = 0, varpi = 0, vartheta = 0, w = 0;
  std::vector<int> v;

  int scalar_count() const { return 3 * n_ul; }
  int matrix_count() const { return n_dl + 1; }
  int size() const { return w + n_tx * n_tx; }
};

struct P13 {
  conic::Program program;
  P13Layout layout;
  bool ismr_active = false;
  std::vector<std::string> notes;  // eliminations and skipped constraints
};

P13 build_p13(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
              const ExpansionPoint& e);
P13 build_p13(const ChannelSet& ch, const Budgets& budgets, const SensingMasks& masks,
              const ExpansionPoint& e);

RVec encode_point(const P13Layout& layout, const DesignPoint& x);
/// u_rx is left empty; the receive filters are not part of the subproblem.
DesignPoint decode_point(const P13Layout& layout, const RVec& v);

/// Largest normalized violation of the P1.3 constraints at a design point.
double p13_violation(const P13& prob, const DesignPoint& x);

struct SubproblemResult {
  conic::Status status = conic::Status::NumericalFailure;
  DesignPoint point;
  double objective = 0.0;  // bps/Hz, surrogate_sr_dl + surrogate_sr_ul_lb
  double max_residual = 0.0;
  int iterations = 0;
  bool used_phase1 = false;
};

SubproblemResult solve(const P13& prob, const conic::Tolerances& tol = {});

}  // namespace fdisac
