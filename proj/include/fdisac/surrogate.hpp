#pragma once

#include <vector>

#include "fdisac/metrics.hpp"

namespace fdisac {

/// Useful and interference terms of the DL side, in trace form.
struct DlTerms {
  RVec s_dl;   // S_l = tr(V_l H_l)
  RVec i_dl;   // I_l: UL leakage + other-user + AN terms
  RVec s_eve;  // S_p = |alpha_p|^2 a^H (sum V) a
  RVec i_eve;  // I_p = sum_k p_k |g_kp|^2 + |alpha_p|^2 a^H W a
};

DlTerms dl_terms(const ChannelSet& ch, const DesignPoint& x);

/// Total power Psi_p seen by eavesdropper p when intercepting UL traffic; the
/// same for every targeted user k.
RVec eve_ul_total(const ChannelSet& ch, const RVec& p, const CMat& q);

/// (S_{p,k}, I_{p,k}) for one eavesdropper/user pair.
std::pair<double, double> eve_ul_terms(int p, int k, const ChannelSet& ch, const RVec& pw, const CMat& q);

/// Linearization point of the successive convex approximation. Tilde
/// quantities are computed once here and shared by the surrogates and the
/// subproblem builder.
struct ExpansionPoint {
  RVec p_tilde;
  std::vector<CMat> v_tilde;
  CMat w_tilde;
  RVec t_tilde;

  std::vector<CMat> phi_tilde;   // Phi_k at (p~, Q~)
  std::vector<CVec> phi_inv_h;   // Phi~_k^{-1} h_{t,k}
  DlTerms terms;                 // I~, S~ at the expansion
  RVec psi_tilde;                // Psi~_p

  CMat q_tilde() const;
  DesignPoint as_point() const;
};

ExpansionPoint make_expansion(const ChannelSet& ch, const RVec& p, const std::vector<CMat>& v,
                              const CMat& w, const RVec& t);
/// Uses slack_t of the point as vartheta~.
ExpansionPoint make_expansion(const ChannelSet& ch, const DesignPoint& x);

// Exact concave-part terms, log2 units.
double phi1_exact(const ChannelSet& ch, const DesignPoint& x);
double phi2_exact(const ChannelSet& ch, const DesignPoint& x);
double phi3_exact(const ChannelSet& ch, const DesignPoint& x);

// First-order expansions of phi1..phi3 around the expansion point; affine in
// (p, V, W) and upper bounds of the concave originals.
double taylor_phi1(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);
double taylor_phi2(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);
double taylor_phi3(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);

/// Concave minorant of the DL sum secrecy rate, tight at the expansion point.
double surrogate_sr_dl(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);

/// p_k h^H Phi_k^{-1}(Q, p) h, the UL SINR under the optimal receive filter.
double ul_hat_sinr(int k, const ChannelSet& ch, const RVec& p, const CMat& q);

/// h^H Phi~^{-1} h - h^H Phi~^{-1} (Phi - Phi~) Phi~^{-1} h, with Phi at the point.
double ul_linearized_bound(int k, const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);

/// Concave lower bound of the UL sum secrecy rate using the slack values of x.
double surrogate_sr_ul_lb(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);

/// Largest violation of the slack constraints (vartheta^2 <= p * bound,
/// varpi <= linearized vartheta^2, nonnegativity); <= 0 means feasible.
double slack_violation(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x);

}  // namespace fdisac
