#pragma once

#include <random>

#include "fdisac/ijtb.hpp"

namespace testing_support {

using namespace fdisac;

inline ScenarioConfig small_config(std::uint64_t seed, int nt = 4, int nr = 4, int L = 1, int K = 2, int P = 1) {
  ScenarioConfig cfg;
  cfg.n_tx = nt;
  cfg.n_rx = nr;
  cfg.n_dl = L;
  cfg.n_ul = K;
  cfg.n_eve = P;
  cfg.seed = seed;
  return cfg;
}

inline CMat random_psd(int n, double trace, std::mt19937_64& rng, int rank = -1) {
  std::normal_distribution<double> nd;
  const int r = rank < 0 ? n : rank;
  CMat g(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = {nd(rng), nd(rng)};
  CMat m = g * g.adjoint();
  return m * (trace / m.trace().real());
}

inline CVec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = {nd(rng), nd(rng)};
  return v.normalized();
}

/// Random point inside the budgets of `cfg` (uniform fraction of each budget).
inline DesignPoint random_point(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const Budgets b = Budgets::from(cfg);
  DesignPoint x = DesignPoint::zeros(ch);
  for (auto& v : x.v_cov) v = random_psd(ch.n_tx(), b.p_v * ud(rng) / std::max(1, ch.n_dl()), rng, 1 + static_cast<int>(ud(rng) * ch.n_tx()) % ch.n_tx());
  x.w_cov = random_psd(ch.n_tx(), b.p_w * ud(rng), rng);
  for (int k = 0; k < ch.n_ul(); ++k) x.p_ul[k] = b.p_ul * ud(rng) / ch.n_ul();
  for (int k = 0; k < ch.n_ul(); ++k) x.u_rx[k] = random_unit(ch.n_rx(), rng);
  return x;
}

}  // namespace testing_support
