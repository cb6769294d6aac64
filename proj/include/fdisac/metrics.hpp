#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fdisac/scene.hpp"

namespace fdisac {

/// Optimization variables of the lifted problem.
struct DesignPoint {
  std::vector<CMat> v_cov;  // L Hermitian PSD N_T x N_T
  CMat w_cov;               // AN covariance, N_T x N_T
  RVec p_ul;                // K UL powers
  std::vector<CVec> u_rx;   // K unit-norm receive beamformers, length N_R
  RVec slack_w;             // K, varpi
  RVec slack_t;             // K, vartheta

  static DesignPoint zeros(int n_tx, int n_rx, int n_dl, int n_ul);
  static DesignPoint zeros(const ChannelSet& ch) {
    return zeros(ch.n_tx(), ch.n_rx(), ch.n_dl(), ch.n_ul());
  }

  /// Sum of the DL covariances, i.e. the lifted V V^H.
  CMat v_sum() const;
  /// Transmit covariance Q = sum_l V_l + W.
  CMat transmit_covariance() const { return v_sum() + w_cov; }

  /// Throws InvalidArgument when an invariant (PSD, p >= 0, unit-norm u) fails.
  void validate(double psd_tol = 1e-8, double norm_tol = 1e-10) const;
};

/// Integrated outer products of the transmit steering vector.
struct SensingMasks {
  CMat a_side;
  CMat a_main;
  std::vector<std::pair<double, double>> mainlobes;  // merged (low, high), radians
  double grid = 0.0;                                 // radians
};

/// Trapezoidal integration of a(theta) a(theta)^H over [-pi/2, pi/2] split
/// into the union of mainlobes around `theta` and its complement.
SensingMasks build_sensing_masks(int n_tx, const RVec& theta, double halfwidth, double grid,
                                 double spacing = 0.5);
SensingMasks build_sensing_masks(const ScenarioConfig& cfg, const ChannelSet& ch);

/// tr(R A_s) / tr(R A_m). Throws DegenerateBeampattern below 1e-12 mainlobe power.
double ismr(const CMat& r, const SensingMasks& masks);

/// Phi_k(Q, p): interference-plus-noise covariance seen by UL user k.
CMat ul_interference_covariance(int k, const ChannelSet& ch, const RVec& p, const CMat& q);

double dl_sinr(int ell, const ChannelSet& ch, const DesignPoint& x);
double ul_sinr(int k, const ChannelSet& ch, const DesignPoint& x);
double eve_ul_sinr(int p, int k, const ChannelSet& ch, const DesignPoint& x);
double eve_dl_sinr(int p, const ChannelSet& ch, const DesignPoint& x);

/// Unclipped; can be negative.
double sum_secrecy_dl(const ChannelSet& ch, const DesignPoint& x);
double sum_secrecy_ul(const ChannelSet& ch, const DesignPoint& x);
inline double sum_secrecy_total(const ChannelSet& ch, const DesignPoint& x) {
  return sum_secrecy_dl(ch, x) + sum_secrecy_ul(ch, x);
}

enum class LinkKind { Downlink, Uplink, EveUplink, EveDownlink };

struct LinkId {
  LinkKind kind = LinkKind::Downlink;
  int index = 0;  // DL user for Downlink, UL user for Uplink / EveUplink
  int eve = 0;    // eavesdropper for EveUplink / EveDownlink
};

/// Closed-form SINR of a link, dispatching to the functions above.
double closed_form_sinr(const LinkId& link, const ChannelSet& ch, const DesignPoint& x);

struct McEstimate {
  double sinr = 0.0;
  double std_error = 0.0;  // delta-method standard error of the ratio
  double signal_power = 0.0;
  double interference_power = 0.0;
};

/// Symbol-level Monte Carlo estimate obtained by simulating the received
/// signals with unit-variance symbols, Gaussian AN and AWGN. Requires at
/// least 1e4 symbols.
McEstimate mc_sinr_oracle(const LinkId& link, const ChannelSet& ch, const DesignPoint& x,
                          std::int64_t n_symbols, std::uint64_t seed);

}  // namespace fdisac
