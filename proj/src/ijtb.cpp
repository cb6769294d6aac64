#include "fdisac/ijtb.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace fdisac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio_or_zero(double a, double b) { return b > 0.0 ? a / b : 0.0; }

RVec tight_slack(const ChannelSet& ch, const RVec& p, const CMat& q) {
  RVec t(ch.n_ul());
  for (int k = 0; k < ch.n_ul(); ++k) t[k] = std::sqrt(std::max(0.0, ul_hat_sinr(k, ch, p, q)));
  return t;
}

CVec random_unit(int n, Rng& rng) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = {nd(rng), nd(rng)};
  return v.normalized();
}

CMat wishart(int n, Rng& rng) {
  std::normal_distribution<double> nd;
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = {nd(rng), nd(rng)};
  return g * g.adjoint();
}

}  // namespace

double achieved_ismr(const CMat& q, const SensingMasks& masks) {
  try {
    return ismr(q, masks);
  } catch (const DegenerateBeampattern&) {
    return kNaN;
  }
}

double SolveReport::min_increment() const {
  double prev = initial_sr, worst = std::numeric_limits<double>::infinity();
  for (const auto& r : iterations) {
    worst = std::min(worst, r.sr_total - prev);
    prev = r.sr_total;
  }
  return worst;
}

conic::Status SolveReport::worst_status() const {
  conic::Status s = conic::Status::Optimal;
  for (const auto& r : iterations) s = std::max(s, r.status);
  return s;
}

CVec ul_beamformer(int k, const ChannelSet& ch, const CMat& q, const RVec& p) {
  const CMat phi = ul_interference_covariance(k, ch, p, q);
  return phi.llt().solve(ch.h_ul[k]).normalized();
}

void set_ul_beamformers(const ChannelSet& ch, DesignPoint& x) {
  const CMat q = x.transmit_covariance();
  x.u_rx.clear();
  for (int k = 0; k < ch.n_ul(); ++k) x.u_rx.push_back(ul_beamformer(k, ch, q, x.p_ul));
}

SolveReport run_ijtb(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
                     const IjtbOptions& opt) {
  if (opt.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  const Budgets bud = Budgets::from(cfg);
  const int K = ch.n_ul();

  SolveReport rep;
  DesignPoint x = DesignPoint::zeros(ch);
  if (opt.warm_start && K > 0) x.p_ul.setConstant(bud.p_ul / K);
  set_ul_beamformers(ch, x);
  RVec t_tilde = opt.warm_start ? tight_slack(ch, x.p_ul, x.transmit_covariance()) : RVec::Zero(K);
  x.slack_t = t_tilde;
  x.slack_w = t_tilde.array().square();
  rep.initial_sr = sum_secrecy_total(ch, x);

  double prev_sr = rep.initial_sr;
  int small_steps = 0;
  for (int m = 1; m <= opt.max_iterations; ++m) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExpansionPoint e = make_expansion(ch, x.p_ul, x.v_cov, x.w_cov, t_tilde);
    const P13 prob = build_p13(ch, bud, masks, e);
    if (m == 1) rep.notes = prob.notes;

    SubproblemResult res = solve(prob, opt.solver);
    int steps = res.iterations;
    const auto failed = [](conic::Status s) {
      return s == conic::Status::Infeasible || s == conic::Status::NumericalFailure;
    };
    if (failed(res.status)) {
      conic::Tolerances damped = opt.solver;
      damped.barrier_growth = std::max(2.0, opt.solver.barrier_growth / 2.0);
      res = solve(prob, damped);
      steps += res.iterations;
    }
    if (failed(res.status)) {
      rep.degraded = true;
      rep.notes.push_back(std::string("solver ") + conic::to_string(res.status) + " at iteration " +
                          std::to_string(m) + "; keeping the previous iterate");
      IterationRecord r;
      r.iteration = m;
      r.status = res.status;
      r.newton_steps = steps;
      r.sr_total = prev_sr;
      rep.iterations.push_back(r);
      break;
    }

    x = res.point;
    set_ul_beamformers(ch, x);
    const CMat q = x.transmit_covariance();
    IterationRecord r;
    r.iteration = m;
    r.surrogate = res.objective;
    r.sr_dl = sum_secrecy_dl(ch, x);
    r.sr_ul = sum_secrecy_ul(ch, x);
    r.sr_total = r.sr_dl + r.sr_ul;
    r.ismr = achieved_ismr(q, masks);
    r.util_v = ratio_or_zero(x.v_sum().trace().real(), bud.p_v);
    r.util_w = ratio_or_zero(x.w_cov.trace().real(), bud.p_w);
    r.util_ul = ratio_or_zero(x.p_ul.sum(), bud.p_ul);
    r.status = res.status;
    r.newton_steps = steps;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.iterations.push_back(r);

    // Refresh vartheta~ at the new expansion so the UL chain is tight there.
    t_tilde = tight_slack(ch, x.p_ul, q);

    const double delta = std::abs(r.sr_total - prev_sr);
    prev_sr = r.sr_total;
    small_steps = delta < opt.tolerance ? small_steps + 1 : 0;
    if (prob.program.free_count() == 0 || small_steps >= opt.window) {
      rep.converged = true;
      break;
    }
  }

  rep.iteration_count = static_cast<int>(rep.iterations.size());
  rep.final_point = x;
  for (const auto& v : x.v_cov) {
    Eigen::SelfAdjointEigenSolver<CMat> es(v, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Eigen::Index n = ev.size();
    rep.rank_metric.push_back(n >= 2 && ev[n - 1] > 0.0 ? std::max(0.0, ev[n - 2]) / ev[n - 1] : 0.0);
  }
  return rep;
}

namespace {

DesignPoint matched_filter_point(const ChannelSet& ch, double p_v, double p_w, double p_ul) {
  const int nt = ch.n_tx(), L = ch.n_dl(), K = ch.n_ul();
  DesignPoint x = DesignPoint::zeros(ch);
  for (int l = 0; l < L; ++l) {
    const CVec hh = ch.h_dl[l].normalized();
    x.v_cov[l] = (p_v / L) * hh * hh.adjoint();
  }
  if (p_w > 0.0) {
    CMat proj = CMat::Identity(nt, nt);
    if (L > 0) {
      CMat h(nt, L);
      for (int l = 0; l < L; ++l) h.col(l) = ch.h_dl[l];
      // Orthonormal basis of span{h_l} via QR; projector onto its complement.
      Eigen::HouseholderQR<CMat> qr(h);
      const CMat basis = qr.householderQ() * CMat::Identity(nt, std::min(L, nt));
      proj -= basis * basis.adjoint();
    }
    const double rank = proj.trace().real();
    if (rank > 0.5) x.w_cov = (p_w / rank) * proj;
  }
  if (K > 0) x.p_ul.setConstant(p_ul / K);
  set_ul_beamformers(ch, x);
  return x;
}

}  // namespace

DesignPoint bench_iso_an(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks&) {
  const Budgets b = Budgets::from(cfg);
  return matched_filter_point(ch, b.p_v, b.p_w, b.p_ul);
}

DesignPoint bench_iso_no_an(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks&) {
  const Budgets b = Budgets::from(cfg);
  return matched_filter_point(ch, b.p_v + b.p_w / 2.0, 0.0, b.p_ul + b.p_w / 2.0);
}

FeasibleDraw bench_feasible(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
                            Rng& rng) {
  const Budgets b = Budgets::from(cfg);
  const int nt = ch.n_tx(), L = ch.n_dl(), K = ch.n_ul();
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  FeasibleDraw out;
  for (out.draws = 1; out.draws <= 100; ++out.draws) {
    DesignPoint x = DesignPoint::zeros(ch);
    double total = 0.0;
    for (int l = 0; l < L; ++l) {
      x.v_cov[l] = wishart(nt, rng);
      total += x.v_cov[l].trace().real();
    }
    for (int l = 0; l < L; ++l) x.v_cov[l] *= b.p_v / total;
    const CMat w = wishart(nt, rng);
    x.w_cov = (b.p_w / w.trace().real()) * w;
    for (int k = 0; k < K; ++k) x.p_ul[k] = ud(rng) + 1e-12;
    if (K > 0) x.p_ul *= b.p_ul / x.p_ul.sum();
    for (int k = 0; k < K; ++k) x.u_rx[k] = random_unit(ch.n_rx(), rng);
    out.point = x;
    const double r = achieved_ismr(x.transmit_covariance(), masks);
    const bool ok = ch.n_eve() == 0 || (std::isfinite(r) && r <= b.ismr_max);
    if (ok) {
      out.ismr_ok = true;
      return out;
    }
  }
  out.draws = 100;
  return out;
}

}  // namespace fdisac
