#include "fdisac/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fdisac {

DesignPoint DesignPoint::zeros(int n_tx, int n_rx, int n_dl, int n_ul) {
  DesignPoint x;
  x.v_cov.assign(static_cast<std::size_t>(n_dl), CMat::Zero(n_tx, n_tx));
  x.w_cov = CMat::Zero(n_tx, n_tx);
  x.p_ul = RVec::Zero(n_ul);
  x.u_rx.assign(static_cast<std::size_t>(n_ul), CVec::Unit(n_rx, 0));
  x.slack_w = RVec::Zero(n_ul);
  x.slack_t = RVec::Zero(n_ul);
  return x;
}

CMat DesignPoint::v_sum() const {
  CMat s = CMat::Zero(w_cov.rows(), w_cov.cols());
  for (const auto& v : v_cov) s += v;
  return s;
}

namespace {

double min_eigenvalue(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

void DesignPoint::validate(double psd_tol, double norm_tol) const {
  for (const auto& v : v_cov) {
    if (min_eigenvalue(v) < -psd_tol) throw InvalidArgument("V_l is not PSD");
  }
  if (min_eigenvalue(w_cov) < -psd_tol) throw InvalidArgument("W is not PSD");
  if ((p_ul.array() < 0.0).any()) throw InvalidArgument("UL powers must be >= 0");
  for (const auto& u : u_rx) {
    if (std::abs(u.norm() - 1.0) > norm_tol) throw InvalidArgument("u_k must be unit norm");
  }
  if ((slack_w.array() < 0.0).any() || (slack_t.array() < 0.0).any())
    throw InvalidArgument("slack values must be >= 0");
}

SensingMasks build_sensing_masks(int n_tx, const RVec& theta, double halfwidth, double grid,
                                 double spacing) {
  if (!(halfwidth > 0.0)) throw InvalidArgument("mainlobe halfwidth must be > 0");
  if (!(grid > 0.0)) throw InvalidArgument("grid resolution must be > 0");
  const double lo = -kPi / 2, hi = kPi / 2;

  std::vector<std::pair<double, double>> lobes;
  for (Eigen::Index p = 0; p < theta.size(); ++p) {
    const double a = std::max(lo, theta[p] - halfwidth);
    const double b = std::min(hi, theta[p] + halfwidth);
    if (b > a) lobes.emplace_back(a, b);
  }
  std::sort(lobes.begin(), lobes.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : lobes) {
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }

  // Each segment gets its own trapezoidal rule so that its endpoints are nodes.
  auto integrate = [&](double a, double b, CMat& acc) {
    const double len = b - a;
    if (len <= 0.0) return;
    const int steps = std::max(1, static_cast<int>(std::ceil(len / grid - 1e-9)));
    const double h = len / steps;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? h / 2 : h;
      const CVec a_vec = steering_vector(n_tx, a + i * h, spacing);
      acc.noalias() += w * a_vec * a_vec.adjoint();
    }
  };

  SensingMasks m;
  m.a_main = CMat::Zero(n_tx, n_tx);
  m.a_side = CMat::Zero(n_tx, n_tx);
  m.mainlobes = merged;
  m.grid = grid;
  double cursor = lo;
  for (const auto& [a, b] : merged) {
    integrate(cursor, a, m.a_side);
    integrate(a, b, m.a_main);
    cursor = b;
  }
  integrate(cursor, hi, m.a_side);
  // Enforce exact Hermitian symmetry against rounding.
  m.a_main = (m.a_main + m.a_main.adjoint()).eval() / 2.0;
  m.a_side = (m.a_side + m.a_side.adjoint()).eval() / 2.0;
  return m;
}

SensingMasks build_sensing_masks(const ScenarioConfig& cfg, const ChannelSet& ch) {
  return build_sensing_masks(ch.n_tx(), ch.theta, deg_to_rad(cfg.mainlobe_halfwidth_deg),
                             deg_to_rad(cfg.grid_resolution_deg), cfg.element_spacing);
}

double ismr(const CMat& r, const SensingMasks& masks) {
  const double main = trace_product(r, masks.a_main);
  if (main < 1e-12) throw DegenerateBeampattern("mainlobe power below 1e-12");
  return trace_product(r, masks.a_side) / main;
}

CMat ul_interference_covariance(int k, const ChannelSet& ch, const RVec& p, const CMat& q) {
  const int nr = ch.n_rx();
  CMat phi = ch.r_clutter + ch.noise.dfrc * CMat::Identity(nr, nr);
  phi.noalias() += ch.coupling * q * ch.coupling.adjoint();
  for (int j = 0; j < ch.n_ul(); ++j) {
    if (j == k) continue;
    phi.noalias() += p[j] * ch.h_ul[j] * ch.h_ul[j].adjoint();
  }
  return (phi + phi.adjoint()) / 2.0;
}

double dl_sinr(int ell, const ChannelSet& ch, const DesignPoint& x) {
  const CVec& h = ch.h_dl[ell];
  double interference = ch.noise.dl + quad_form(h, x.w_cov);
  for (int k = 0; k < ch.n_ul(); ++k) interference += x.p_ul[k] * std::norm(ch.q_ul_dl(k, ell));
  for (int j = 0; j < ch.n_dl(); ++j) {
    if (j != ell) interference += quad_form(h, x.v_cov[j]);
  }
  return std::max(0.0, quad_form(h, x.v_cov[ell])) / interference;
}

double ul_sinr(int k, const ChannelSet& ch, const DesignPoint& x) {
  const CMat phi = ul_interference_covariance(k, ch, x.p_ul, x.transmit_covariance());
  const CVec& u = x.u_rx[k];
  const double gain = std::norm(u.dot(ch.h_ul[k]));
  return x.p_ul[k] * gain / quad_form(u, phi);
}

double eve_ul_sinr(int p, int k, const ChannelSet& ch, const DesignPoint& x) {
  double interference = ch.noise.eve + std::norm(ch.alpha[p]) * quad_form(ch.a_tx_eve[p], x.transmit_covariance());
  for (int j = 0; j < ch.n_ul(); ++j) {
    if (j != k) interference += x.p_ul[j] * std::norm(ch.g_ul_eve(j, p));
  }
  return x.p_ul[k] * std::norm(ch.g_ul_eve(k, p)) / interference;
}

double eve_dl_sinr(int p, const ChannelSet& ch, const DesignPoint& x) {
  const double a2 = std::norm(ch.alpha[p]);
  double interference = ch.noise.eve + a2 * quad_form(ch.a_tx_eve[p], x.w_cov);
  for (int j = 0; j < ch.n_ul(); ++j) interference += x.p_ul[j] * std::norm(ch.g_ul_eve(j, p));
  return std::max(0.0, a2 * quad_form(ch.a_tx_eve[p], x.v_sum())) / interference;
}

double sum_secrecy_dl(const ChannelSet& ch, const DesignPoint& x) {
  double sr = 0.0;
  for (int l = 0; l < ch.n_dl(); ++l) sr += std::log2(1.0 + dl_sinr(l, ch, x));
  for (int p = 0; p < ch.n_eve(); ++p) sr -= std::log2(1.0 + eve_dl_sinr(p, ch, x));
  return sr;
}

double sum_secrecy_ul(const ChannelSet& ch, const DesignPoint& x) {
  double sr = 0.0;
  for (int k = 0; k < ch.n_ul(); ++k) sr += std::log2(1.0 + ul_sinr(k, ch, x));
  for (int p = 0; p < ch.n_eve(); ++p) {
    for (int k = 0; k < ch.n_ul(); ++k) sr -= std::log2(1.0 + eve_ul_sinr(p, k, ch, x));
  }
  return sr;
}

double closed_form_sinr(const LinkId& link, const ChannelSet& ch, const DesignPoint& x) {
  switch (link.kind) {
    case LinkKind::Downlink: return dl_sinr(link.index, ch, x);
    case LinkKind::Uplink: return ul_sinr(link.index, ch, x);
    case LinkKind::EveUplink: return eve_ul_sinr(link.eve, link.index, ch, x);
    case LinkKind::EveDownlink: return eve_dl_sinr(link.eve, ch, x);
  }
  return 0.0;
}

namespace {

// Columns F with F F^H = M for a Hermitian PSD M, dropping numerically null directions.
CMat psd_factor(const CMat& m) {
  if (m.size() == 0) return CMat(m.rows(), 0);
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  const double top = std::max(0.0, es.eigenvalues().maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 1e-14 * top && es.eigenvalues()[i] > 0.0) keep.push_back(i);
  }
  CMat f(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    f.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()[keep[c]]);
  }
  return f;
}

class SymbolSource {
 public:
  explicit SymbolSource(std::uint64_t seed) : rng_(seed) {}
  cdouble draw() {
    const double re = n01_(rng_);
    const double im = n01_(rng_);
    return {re * kInvSqrt2, im * kInvSqrt2};
  }
  // sum_i w_i z_i with fresh z.
  cdouble project(const CVec& w) {
    cdouble acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) acc += w[i] * draw();
    return acc;
  }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  Rng rng_;
  std::normal_distribution<double> n01_{0.0, 1.0};
};

// Row vector b^H F as a column of conj-free weights: y = (b^H F) z.
CVec projected(const CVec& b, const CMat& f) { return (b.adjoint() * f).transpose(); }

}  // namespace

McEstimate mc_sinr_oracle(const LinkId& link, const ChannelSet& ch, const DesignPoint& x,
                          std::int64_t n_symbols, std::uint64_t seed) {
  if (n_symbols < 10000) throw InvalidArgument("mc_sinr_oracle needs at least 1e4 symbols");
  const int L = ch.n_dl(), K = ch.n_ul();

  std::vector<CMat> v_factor;
  for (const auto& v : x.v_cov) v_factor.push_back(psd_factor(v));
  const CMat w_factor = psd_factor(x.w_cov);

  // The received sample is desired + sum of independent taps; each tap is a
  // weighted sum of fresh unit-variance symbols.
  std::vector<CVec> desired;
  std::vector<CVec> interferers;
  auto scalar_tap = [](cdouble c) { return CVec::Constant(1, c); };

  switch (link.kind) {
    case LinkKind::Downlink: {
      const CVec& h = ch.h_dl[link.index];
      desired.push_back(projected(h, v_factor[link.index]));
      for (int k = 0; k < K; ++k) interferers.push_back(scalar_tap(ch.q_ul_dl(k, link.index) * std::sqrt(x.p_ul[k])));
      for (int l = 0; l < L; ++l)
        if (l != link.index) interferers.push_back(projected(h, v_factor[l]));
      interferers.push_back(projected(h, w_factor));
      interferers.push_back(scalar_tap(std::sqrt(ch.noise.dl)));
      break;
    }
    case LinkKind::Uplink: {
      const CVec& u = x.u_rx[link.index];
      const CVec uc = (u.adjoint() * ch.coupling).adjoint();  // C^H u
      desired.push_back(scalar_tap(u.dot(ch.h_ul[link.index]) * std::sqrt(x.p_ul[link.index])));
      for (int k = 0; k < K; ++k)
        if (k != link.index) interferers.push_back(scalar_tap(u.dot(ch.h_ul[k]) * std::sqrt(x.p_ul[k])));
      for (int l = 0; l < L; ++l) interferers.push_back(projected(uc, v_factor[l]));
      interferers.push_back(projected(uc, w_factor));
      interferers.push_back(projected(u, psd_factor(ch.r_clutter)));
      interferers.push_back(std::sqrt(ch.noise.dfrc) * u.conjugate());
      break;
    }
    case LinkKind::EveUplink: {
      const int p = link.eve;
      const CVec at = std::conj(ch.alpha[p]) * ch.a_tx_eve[p];
      desired.push_back(scalar_tap(ch.g_ul_eve(link.index, p) * std::sqrt(x.p_ul[link.index])));
      for (int k = 0; k < K; ++k)
        if (k != link.index) interferers.push_back(scalar_tap(ch.g_ul_eve(k, p) * std::sqrt(x.p_ul[k])));
      for (int l = 0; l < L; ++l) interferers.push_back(projected(at, v_factor[l]));
      interferers.push_back(projected(at, w_factor));
      interferers.push_back(scalar_tap(std::sqrt(ch.noise.eve)));
      break;
    }
    case LinkKind::EveDownlink: {
      const int p = link.eve;
      const CVec at = std::conj(ch.alpha[p]) * ch.a_tx_eve[p];
      for (int l = 0; l < L; ++l) desired.push_back(projected(at, v_factor[l]));
      for (int k = 0; k < K; ++k) interferers.push_back(scalar_tap(ch.g_ul_eve(k, p) * std::sqrt(x.p_ul[k])));
      interferers.push_back(projected(at, w_factor));
      interferers.push_back(scalar_tap(std::sqrt(ch.noise.eve)));
      break;
    }
  }

  SymbolSource src(seed);
  double s_sum = 0.0, s_sq = 0.0, i_sum = 0.0, i_sq = 0.0;
  for (std::int64_t n = 0; n < n_symbols; ++n) {
    cdouble sig = 0.0, intf = 0.0;
    for (const auto& t : desired) sig += src.project(t);
    for (const auto& t : interferers) intf += src.project(t);
    const double ps = std::norm(sig), pi = std::norm(intf);
    s_sum += ps;
    s_sq += ps * ps;
    i_sum += pi;
    i_sq += pi * pi;
  }
  const double n = static_cast<double>(n_symbols);
  McEstimate est;
  est.signal_power = s_sum / n;
  est.interference_power = i_sum / n;
  const double var_s = std::max(0.0, s_sq / n - est.signal_power * est.signal_power) / n;
  const double var_i = std::max(0.0, i_sq / n - est.interference_power * est.interference_power) / n;
  est.sinr = est.interference_power > 0.0 ? est.signal_power / est.interference_power : 0.0;
  if (est.signal_power > 0.0 && est.interference_power > 0.0) {
    est.std_error = est.sinr * std::sqrt(var_s / (est.signal_power * est.signal_power) +
                                         var_i / (est.interference_power * est.interference_power));
  }
  return est;
}

}  // namespace fdisac
