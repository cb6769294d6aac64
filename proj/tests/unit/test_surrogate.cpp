#include <doctest.h>

#include <cmath>

#include "fdisac/surrogate.hpp"
#include "helpers.hpp"

using namespace fdisac;
using namespace testing_support;

namespace {

struct Fixture {
  ScenarioConfig cfg;
  ChannelSet ch;
  std::mt19937_64 rng;
  explicit Fixture(std::uint64_t seed, int L = 2, int K = 2, int P = 2)
      : cfg(small_config(seed, 4, 3, L, K, P)), ch(), rng(seed) {
    // Moderate shadowing keeps every term within a few orders of magnitude.
    cfg.shadowing_db = 4.0;
    ch = make_channel_set(cfg);
  }
};

// Slack values at x for the expansion e: vartheta on the bound, varpi on the
// linearization. False when no nonnegative varpi fits (vartheta < vartheta~/2).
bool fill_slacks(const ChannelSet& ch, const ExpansionPoint& e, DesignPoint& x) {
  const int K = ch.n_ul();
  x.slack_t = RVec::Zero(K);
  x.slack_w = RVec::Zero(K);
  bool ok = true;
  for (int k = 0; k < K; ++k) {
    const double t = std::sqrt(std::max(0.0, x.p_ul[k] * ul_linearized_bound(k, ch, e, x)));
    const double tt = e.t_tilde[k];
    x.slack_t[k] = t;
    x.slack_w[k] = std::max(0.0, 2.0 * tt * t - tt * tt);
    ok = ok && 2.0 * tt * t >= tt * tt;
  }
  return ok;
}

ExpansionPoint expansion_at(const ChannelSet& ch, DesignPoint& xt) {
  RVec t(ch.n_ul());
  for (int k = 0; k < ch.n_ul(); ++k) t[k] = std::sqrt(ul_hat_sinr(k, ch, xt.p_ul, xt.transmit_covariance()));
  xt.slack_t = t;
  xt.slack_w = t.array().square();
  return make_expansion(ch, xt);
}

DesignPoint with_optimal_filters(const ChannelSet& ch, DesignPoint x) {
  const CMat q = x.transmit_covariance();
  for (int k = 0; k < ch.n_ul(); ++k)
    x.u_rx[k] = ul_interference_covariance(k, ch, x.p_ul, q).llt().solve(ch.h_ul[k]).normalized();
  return x;
}

}  // namespace

TEST_CASE("eavesdropper UL total is shared by all users") {
  Fixture f(2, 1, 3, 2);
  const DesignPoint x = random_point(f.ch, f.cfg, f.rng);
  const CMat q = x.transmit_covariance();
  const RVec psi = eve_ul_total(f.ch, x.p_ul, q);
  for (int p = 0; p < 2; ++p) {
    for (int k = 0; k < 3; ++k) {
      const auto [s, i] = eve_ul_terms(p, k, f.ch, x.p_ul, q);
      CHECK(s + i == doctest::Approx(psi[p]).epsilon(1e-13));
      CHECK(s / (i + f.ch.noise.eve) == doctest::Approx(eve_ul_sinr(p, k, f.ch, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("DL terms reproduce the SINRs") {
  Fixture f(3);
  const DesignPoint x = random_point(f.ch, f.cfg, f.rng);
  const DlTerms t = dl_terms(f.ch, x);
  for (int l = 0; l < 2; ++l)
    CHECK(t.s_dl[l] / (t.i_dl[l] + f.ch.noise.dl) == doctest::Approx(dl_sinr(l, f.ch, x)).epsilon(1e-12));
  for (int p = 0; p < 2; ++p)
    CHECK(t.s_eve[p] / (t.i_eve[p] + f.ch.noise.eve) == doctest::Approx(eve_dl_sinr(p, f.ch, x)).epsilon(1e-12));
}

TEST_CASE("Taylor terms upper-bound the concave originals and touch at the expansion") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Fixture f(seed);
    DesignPoint xt = random_point(f.ch, f.cfg, f.rng);
    const ExpansionPoint e = expansion_at(f.ch, xt);
    CHECK(taylor_phi1(f.ch, e, xt) == doctest::Approx(phi1_exact(f.ch, xt)).epsilon(1e-12));
    CHECK(taylor_phi2(f.ch, e, xt) == doctest::Approx(phi2_exact(f.ch, xt)).epsilon(1e-12));
    CHECK(taylor_phi3(f.ch, e, xt) == doctest::Approx(phi3_exact(f.ch, xt)).epsilon(1e-12));
    for (int trial = 0; trial < 20; ++trial) {
      const DesignPoint x = random_point(f.ch, f.cfg, f.rng);
      CHECK(taylor_phi1(f.ch, e, x) >= phi1_exact(f.ch, x) - 1e-12);
      CHECK(taylor_phi2(f.ch, e, x) >= phi2_exact(f.ch, x) - 1e-12);
      CHECK(taylor_phi3(f.ch, e, x) >= phi3_exact(f.ch, x) - 1e-12);
    }
  }
}

TEST_CASE("Taylor terms are affine") {
  Fixture f(6);
  DesignPoint xt = random_point(f.ch, f.cfg, f.rng);
  const ExpansionPoint e = expansion_at(f.ch, xt);
  const DesignPoint a = random_point(f.ch, f.cfg, f.rng), b = random_point(f.ch, f.cfg, f.rng);
  const double lam = 0.3;
  DesignPoint mix = a;
  for (int l = 0; l < 2; ++l) mix.v_cov[l] = lam * a.v_cov[l] + (1 - lam) * b.v_cov[l];
  mix.w_cov = lam * a.w_cov + (1 - lam) * b.w_cov;
  mix.p_ul = lam * a.p_ul + (1 - lam) * b.p_ul;
  for (auto fn : {taylor_phi1, taylor_phi2, taylor_phi3}) {
    CHECK(fn(f.ch, e, mix) == doctest::Approx(lam * fn(f.ch, e, a) + (1 - lam) * fn(f.ch, e, b)).epsilon(1e-12));
  }
}

TEST_CASE("Taylor slope matches a finite-difference gradient") {
  Fixture f(7);
  DesignPoint xt = random_point(f.ch, f.cfg, f.rng);
  const ExpansionPoint e = expansion_at(f.ch, xt);
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    DesignPoint up = xt, dn = xt;
    const double step = h * (xt.p_ul[k] + 1e-3);
    up.p_ul[k] += step;
    dn.p_ul[k] -= step;
    const double fd1 = (phi1_exact(f.ch, up) - phi1_exact(f.ch, dn)) / (2 * step);
    const double slope1 = (taylor_phi1(f.ch, e, up) - taylor_phi1(f.ch, e, dn)) / (2 * step);
    CHECK(slope1 == doctest::Approx(fd1).epsilon(1e-5));
    const double fd3 = (phi3_exact(f.ch, up) - phi3_exact(f.ch, dn)) / (2 * step);
    const double slope3 = (taylor_phi3(f.ch, e, up) - taylor_phi3(f.ch, e, dn)) / (2 * step);
    CHECK(slope3 == doctest::Approx(fd3).epsilon(1e-5));
  }
  // Direction in W.
  const CMat dir = random_psd(4, 1.0, f.rng);
  DesignPoint up = xt, dn = xt;
  const double step = 1e-6 * xt.w_cov.trace().real();
  up.w_cov += step * dir;
  dn.w_cov -= step * dir;
  const double fd2 = (phi2_exact(f.ch, up) - phi2_exact(f.ch, dn)) / (2 * step);
  const double slope2 = (taylor_phi2(f.ch, e, up) - taylor_phi2(f.ch, e, dn)) / (2 * step);
  CHECK(slope2 == doctest::Approx(fd2).epsilon(1e-5));
}

TEST_CASE("DL surrogate is a tight minorant") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    Fixture f(seed);
    DesignPoint xt = random_point(f.ch, f.cfg, f.rng);
    const ExpansionPoint e = expansion_at(f.ch, xt);
    CHECK(surrogate_sr_dl(f.ch, e, xt) == doctest::Approx(sum_secrecy_dl(f.ch, xt)).epsilon(1e-10));
    for (int trial = 0; trial < 20; ++trial) {
      const DesignPoint x = random_point(f.ch, f.cfg, f.rng);
      CHECK(surrogate_sr_dl(f.ch, e, x) <= sum_secrecy_dl(f.ch, x) + 1e-10);
    }
  }
}

TEST_CASE("optimal UL filter attains the hat SINR") {
  Fixture f(20, 1, 2, 1);
  DesignPoint x = random_point(f.ch, f.cfg, f.rng);
  const CMat q = x.transmit_covariance();
  for (int k = 0; k < 2; ++k) {
    const double hat = ul_hat_sinr(k, f.ch, x.p_ul, q);
    // Largest generalized eigenvalue of (p h h^H, Phi).
    const CMat phi = ul_interference_covariance(k, f.ch, x.p_ul, q);
    Eigen::GeneralizedSelfAdjointEigenSolver<CMat> ges(x.p_ul[k] * f.ch.h_ul[k] * f.ch.h_ul[k].adjoint(), phi);
    CHECK(hat == doctest::Approx(ges.eigenvalues().maxCoeff()).epsilon(1e-8));
    const DesignPoint opt = with_optimal_filters(f.ch, x);
    CHECK(ul_sinr(k, f.ch, opt) == doctest::Approx(hat).epsilon(1e-10));
    for (int trial = 0; trial < 50; ++trial) {
      x.u_rx[k] = random_unit(f.ch.n_rx(), f.rng);
      CHECK(ul_sinr(k, f.ch, x) <= hat * (1 + 1e-12));
    }
  }
}

TEST_CASE("UL linearized bound and lower-bound surrogate") {
  for (std::uint64_t seed = 30; seed < 34; ++seed) {
    Fixture f(seed);
    DesignPoint xt = random_point(f.ch, f.cfg, f.rng);
    const ExpansionPoint e = expansion_at(f.ch, xt);

    // Tight at the expansion with the refreshed slacks.
    for (int k = 0; k < 2; ++k) {
      CHECK(xt.p_ul[k] * ul_linearized_bound(k, f.ch, e, xt) ==
            doctest::Approx(ul_hat_sinr(k, f.ch, xt.p_ul, xt.transmit_covariance())).epsilon(1e-10));
    }
    CHECK(slack_violation(f.ch, e, xt) <= 1e-12 * (1 + xt.slack_t.squaredNorm()));
    const DesignPoint xt_opt = with_optimal_filters(f.ch, xt);
    CHECK(surrogate_sr_ul_lb(f.ch, e, xt) == doctest::Approx(sum_secrecy_ul(f.ch, xt_opt)).epsilon(1e-9));

    int feasible = 0;
    for (int trial = 0; trial < 40; ++trial) {
      DesignPoint x = random_point(f.ch, f.cfg, f.rng);
      if (trial % 2) {
        // Stay near the expansion so that the slack system is feasible.
        for (int l = 0; l < 2; ++l) x.v_cov[l] = 0.8 * xt.v_cov[l] + 0.2 * x.v_cov[l];
        x.w_cov = 0.8 * xt.w_cov + 0.2 * x.w_cov;
        x.p_ul = 0.8 * xt.p_ul + 0.2 * x.p_ul;
      }
      const CMat q = x.transmit_covariance();
      for (int k = 0; k < 2; ++k)
        CHECK(ul_linearized_bound(k, f.ch, e, x) <= ul_hat_sinr(k, f.ch, x.p_ul, q) / x.p_ul[k] * (1 + 1e-12));
      if (!fill_slacks(f.ch, e, x)) {
        CHECK(slack_violation(f.ch, e, x) > 0.0);
        continue;
      }
      ++feasible;
      CHECK(slack_violation(f.ch, e, x) <= 1e-12);
      CHECK(surrogate_sr_ul_lb(f.ch, e, x) <= sum_secrecy_ul(f.ch, with_optimal_filters(f.ch, x)) + 1e-10);
    }
    CHECK(feasible >= 10);
  }
}

TEST_CASE("slack violation reports the worst constraint") {
  Fixture f(40, 1, 1, 1);
  DesignPoint x = random_point(f.ch, f.cfg, f.rng);
  const ExpansionPoint e = expansion_at(f.ch, x);
  x.slack_w[0] += 0.5;
  CHECK(slack_violation(f.ch, e, x) == doctest::Approx(0.5).epsilon(1e-9));
  x.slack_w[0] = -0.25;
  CHECK(slack_violation(f.ch, e, x) == doctest::Approx(0.25));
}
