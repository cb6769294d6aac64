#include "fdisac/surrogate.hpp"

#include <cmath>

namespace fdisac {

DlTerms dl_terms(const ChannelSet& ch, const DesignPoint& x) {
  const int L = ch.n_dl(), K = ch.n_ul(), P = ch.n_eve();
  DlTerms t;
  t.s_dl = RVec::Zero(L);
  t.i_dl = RVec::Zero(L);
  t.s_eve = RVec::Zero(P);
  t.i_eve = RVec::Zero(P);
  for (int l = 0; l < L; ++l) {
    const CVec& h = ch.h_dl[l];
    double intf = quad_form(h, x.w_cov);
    for (int k = 0; k < K; ++k) intf += x.p_ul[k] * std::norm(ch.q_ul_dl(k, l));
    for (int s = 0; s < L; ++s) {
      const double f = quad_form(h, x.v_cov[s]);
      if (s == l) t.s_dl[l] = f;
      else intf += f;
    }
    t.i_dl[l] = intf;
  }
  const CMat v_sum = x.v_sum();
  for (int p = 0; p < P; ++p) {
    const double a2 = std::norm(ch.alpha[p]);
    t.s_eve[p] = a2 * quad_form(ch.a_tx_eve[p], v_sum);
    double intf = a2 * quad_form(ch.a_tx_eve[p], x.w_cov);
    for (int k = 0; k < K; ++k) intf += x.p_ul[k] * std::norm(ch.g_ul_eve(k, p));
    t.i_eve[p] = intf;
  }
  return t;
}

RVec eve_ul_total(const ChannelSet& ch, const RVec& pw, const CMat& q) {
  RVec psi(ch.n_eve());
  for (int p = 0; p < ch.n_eve(); ++p) {
    double v = std::norm(ch.alpha[p]) * quad_form(ch.a_tx_eve[p], q);
    for (int k = 0; k < ch.n_ul(); ++k) v += pw[k] * std::norm(ch.g_ul_eve(k, p));
    psi[p] = v;
  }
  return psi;
}

std::pair<double, double> eve_ul_terms(int p, int k, const ChannelSet& ch, const RVec& pw, const CMat& q) {
  const double s = pw[k] * std::norm(ch.g_ul_eve(k, p));
  double i = std::norm(ch.alpha[p]) * quad_form(ch.a_tx_eve[p], q);
  for (int j = 0; j < ch.n_ul(); ++j) {
    if (j != k) i += pw[j] * std::norm(ch.g_ul_eve(j, p));
  }
  return {s, i};
}

CMat ExpansionPoint::q_tilde() const {
  CMat q = w_tilde;
  for (const auto& v : v_tilde) q += v;
  return q;
}

DesignPoint ExpansionPoint::as_point() const {
  DesignPoint x;
  x.v_cov = v_tilde;
  x.w_cov = w_tilde;
  x.p_ul = p_tilde;
  x.slack_t = t_tilde;
  x.slack_w = RVec::Zero(p_tilde.size());
  return x;
}

ExpansionPoint make_expansion(const ChannelSet& ch, const RVec& p, const std::vector<CMat>& v,
                              const CMat& w, const RVec& t) {
  ExpansionPoint e;
  e.p_tilde = p;
  e.v_tilde = v;
  e.w_tilde = w;
  e.t_tilde = t;
  const CMat q = e.q_tilde();
  for (int k = 0; k < ch.n_ul(); ++k) {
    e.phi_tilde.push_back(ul_interference_covariance(k, ch, p, q));
    e.phi_inv_h.push_back(e.phi_tilde.back().llt().solve(ch.h_ul[k]));
  }
  e.terms = dl_terms(ch, e.as_point());
  e.psi_tilde = eve_ul_total(ch, p, q);
  return e;
}

ExpansionPoint make_expansion(const ChannelSet& ch, const DesignPoint& x) {
  return make_expansion(ch, x.p_ul, x.v_cov, x.w_cov, x.slack_t);
}

double phi1_exact(const ChannelSet& ch, const DesignPoint& x) {
  const DlTerms t = dl_terms(ch, x);
  double v = 0.0;
  for (Eigen::Index l = 0; l < t.i_dl.size(); ++l) v += std::log2(t.i_dl[l] + ch.noise.dl);
  return v;
}

double phi2_exact(const ChannelSet& ch, const DesignPoint& x) {
  const DlTerms t = dl_terms(ch, x);
  double v = 0.0;
  for (Eigen::Index p = 0; p < t.i_eve.size(); ++p) v += std::log2(t.s_eve[p] + t.i_eve[p] + ch.noise.eve);
  return v;
}

double phi3_exact(const ChannelSet& ch, const DesignPoint& x) {
  const RVec psi = eve_ul_total(ch, x.p_ul, x.transmit_covariance());
  double v = 0.0;
  for (Eigen::Index p = 0; p < psi.size(); ++p) v += std::log2(psi[p] + ch.noise.eve);
  return v;
}

// Increments are evaluated as differences of the affine maps I(.), S(.), Psi(.),
// which equals the explicit sum over Delta_p, Delta_V, Delta_W.
double taylor_phi1(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const DlTerms t = dl_terms(ch, x);
  double v = 0.0;
  for (Eigen::Index l = 0; l < t.i_dl.size(); ++l) {
    const double base = e.terms.i_dl[l] + ch.noise.dl;
    v += std::log(base) + (t.i_dl[l] - e.terms.i_dl[l]) / base;
  }
  return v / kLn2;
}

double taylor_phi2(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const DlTerms t = dl_terms(ch, x);
  double v = 0.0;
  for (Eigen::Index p = 0; p < t.i_eve.size(); ++p) {
    const double tilde = e.terms.s_eve[p] + e.terms.i_eve[p];
    const double base = tilde + ch.noise.eve;
    v += std::log(base) + (t.s_eve[p] + t.i_eve[p] - tilde) / base;
  }
  return v / kLn2;
}

double taylor_phi3(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const RVec psi = eve_ul_total(ch, x.p_ul, x.transmit_covariance());
  double v = 0.0;
  for (Eigen::Index p = 0; p < psi.size(); ++p) {
    const double base = e.psi_tilde[p] + ch.noise.eve;
    v += std::log(base) + (psi[p] - e.psi_tilde[p]) / base;
  }
  return v / kLn2;
}

double surrogate_sr_dl(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const DlTerms t = dl_terms(ch, x);
  double concave = 0.0;
  for (Eigen::Index l = 0; l < t.s_dl.size(); ++l) concave += std::log(t.s_dl[l] + t.i_dl[l] + ch.noise.dl);
  for (Eigen::Index p = 0; p < t.i_eve.size(); ++p) concave += std::log(t.i_eve[p] + ch.noise.eve);
  return concave / kLn2 - taylor_phi1(ch, e, x) - taylor_phi2(ch, e, x);
}

double ul_hat_sinr(int k, const ChannelSet& ch, const RVec& p, const CMat& q) {
  const CMat phi = ul_interference_covariance(k, ch, p, q);
  const CVec& h = ch.h_ul[k];
  const CVec sol = phi.llt().solve(h);
  return p[k] * h.dot(sol).real();
}

double ul_linearized_bound(int k, const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const CMat phi = ul_interference_covariance(k, ch, x.p_ul, x.transmit_covariance());
  const CVec& b = e.phi_inv_h[k];
  const CMat delta = phi - e.phi_tilde[k];
  return ch.h_ul[k].dot(b).real() - quad_form(b, delta);
}

double surrogate_sr_ul_lb(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  const int K = ch.n_ul(), P = ch.n_eve();
  double v = 0.0;
  for (int k = 0; k < K; ++k) v += std::log2(1.0 + x.slack_w[k]);
  const CMat q = x.transmit_covariance();
  for (int p = 0; p < P; ++p) {
    for (int k = 0; k < K; ++k) v += std::log2(eve_ul_terms(p, k, ch, x.p_ul, q).second + ch.noise.eve);
  }
  return v - K * taylor_phi3(ch, e, x);
}

double slack_violation(const ChannelSet& ch, const ExpansionPoint& e, const DesignPoint& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < ch.n_ul(); ++k) {
    const double t = x.slack_t[k], w = x.slack_w[k], tt = e.t_tilde[k];
    worst = std::max(worst, t * t - x.p_ul[k] * ul_linearized_bound(k, ch, e, x));
    worst = std::max(worst, w - (tt * tt + 2.0 * tt * (t - tt)));
    worst = std::max({worst, -w, -t, -x.p_ul[k]});
  }
  return worst;
}

}  // namespace fdisac
