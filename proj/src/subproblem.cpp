#include "fdisac/subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace fdisac {

using conic::Affine;

Budgets Budgets::from(const ScenarioConfig& cfg) {
  return {db_to_linear(cfg.p_dl_v_db), db_to_linear(cfg.p_dl_w_db), db_to_linear(cfg.p_ul_db),
          db_to_linear(cfg.ismr_max_db)};
}

namespace {

// Adds scale * Re tr(A X) for the Hermitian block X at `offset`, A given by
// its encoding.
void add_trace(Affine& f, int offset, const RVec& enc, double scale) {
  for (Eigen::Index a = 0; a < enc.size(); ++a) f.add(offset + static_cast<int>(a), scale * enc[a]);
}

struct Terms {
  // Affine maps of (p, V, W) without noise.
  std::vector<Affine> s_dl, i_dl, s_eve, i_eve, psi;
  std::vector<std::vector<Affine>> i_pk;  // [p][k]
  std::vector<Affine> rhs;                // [k], right side of the cone
};

Terms build_terms(const ChannelSet& ch, const P13Layout& lay, const ExpansionPoint& e) {
  const int L = lay.n_dl, K = lay.n_ul, P = ch.n_eve();
  Terms t;
  std::vector<RVec> enc_h;
  for (int l = 0; l < L; ++l) enc_h.push_back(conic::hermitian_encode(ch.h_dl[l] * ch.h_dl[l].adjoint()));
  for (int l = 0; l < L; ++l) {
    Affine s, i;
    for (int k = 0; k < K; ++k) i.add(lay.p + k, std::norm(ch.q_ul_dl(k, l)));
    for (int j = 0; j < L; ++j) add_trace(j == l ? s : i, lay.v[j], enc_h[l], 1.0);
    add_trace(i, lay.w, enc_h[l], 1.0);
    t.s_dl.push_back(s);
    t.i_dl.push_back(i);
  }
  for (int p = 0; p < P; ++p) {
    const RVec enc_a = conic::hermitian_encode(ch.a_tx_eve[p] * ch.a_tx_eve[p].adjoint());
    const double a2 = std::norm(ch.alpha[p]);
    Affine s, i, q;
    for (int j = 0; j < L; ++j) {
      add_trace(s, lay.v[j], enc_a, a2);
      add_trace(q, lay.v[j], enc_a, a2);
    }
    add_trace(i, lay.w, enc_a, a2);
    add_trace(q, lay.w, enc_a, a2);
    for (int k = 0; k < K; ++k) i.add(lay.p + k, std::norm(ch.g_ul_eve(k, p)));
    Affine psi = q;
    for (int k = 0; k < K; ++k) psi.add(lay.p + k, std::norm(ch.g_ul_eve(k, p)));
    std::vector<Affine> per_k;
    for (int k = 0; k < K; ++k) {
      Affine ik = q;
      for (int j = 0; j < K; ++j) {
        if (j != k) ik.add(lay.p + j, std::norm(ch.g_ul_eve(j, p)));
      }
      per_k.push_back(std::move(ik));
    }
    t.s_eve.push_back(s);
    t.i_eve.push_back(i);
    t.psi.push_back(psi);
    t.i_pk.push_back(std::move(per_k));
  }
  // rhs_k = 2 Re h^H b - b^H Phi_k(x) b with b = Phi~^{-1} h.
  for (int k = 0; k < K; ++k) {
    const CVec& b = e.phi_inv_h[k];
    const int nr = ch.n_rx();
    const double fixed_part = quad_form(b, ch.r_clutter + ch.noise.dfrc * CMat::Identity(nr, nr));
    Affine r(2.0 * ch.h_ul[k].dot(b).real() - fixed_part);
    for (int j = 0; j < K; ++j) {
      if (j != k) r.add(lay.p + j, -std::norm(ch.h_ul[j].dot(b)));
    }
    const CVec c = ch.coupling.adjoint() * b;
    const RVec enc_c = conic::hermitian_encode(c * c.adjoint());
    for (int j = 0; j < L; ++j) add_trace(r, lay.v[j], enc_c, -1.0);
    add_trace(r, lay.w, enc_c, -1.0);
    t.rhs.push_back(std::move(r));
  }
  return t;
}

// Adds -(1/ln2) * sum [ln(base) + (f - f~)/base] to the linear objective.
void subtract_taylor(Affine& obj, const Affine& f, double f_tilde, double noise, double mult) {
  const double base = f_tilde + noise;
  obj.constant -= mult * (std::log(base) - f_tilde / base) / kLn2;
  for (std::size_t j = 0; j < f.idx.size(); ++j) obj.add(f.idx[j], -mult * f.coef[j] / (base * kLn2));
}

Affine plus_constant(Affine a, double c) {
  a.constant += c;
  return a;
}

}  // namespace

P13 build_p13(const ChannelSet& ch, const ScenarioConfig& cfg, const SensingMasks& masks,
              const ExpansionPoint& e) {
  return build_p13(ch, Budgets::from(cfg), masks, e);
}

P13 build_p13(const ChannelSet& ch, const Budgets& bud, const SensingMasks& masks, const ExpansionPoint& e) {
  const int nt = ch.n_tx(), L = ch.n_dl(), K = ch.n_ul(), P = ch.n_eve();
  const int m2 = nt * nt;
  P13 out;
  conic::Program& prog = out.program;
  P13Layout& lay = out.layout;
  lay.n_tx = nt;
  lay.n_dl = L;
  lay.n_ul = K;
  lay.p = prog.add_group("p", K);
  lay.varpi = prog.add_group("varpi", K);
  lay.vartheta = prog.add_group("vartheta", K);
  for (int l = 0; l < L; ++l) lay.v.push_back(prog.add_group("V" + std::to_string(l + 1), m2, nt));
  lay.w = prog.add_group("W", m2, nt);

  bool v_free = L > 0 && bud.p_v > 0.0;
  bool w_free = bud.p_w > 0.0;
  const bool p_free = K > 0 && bud.p_ul > 0.0;

  // ISMR: tr(Q (A_s - c A_m)) <= 0. Its interior is empty when the pencil
  // (A_s, A_m) has no direction below the threshold.
  CMat ismr_form;
  CVec best_dir;
  double ismr_lmin = 0.0;
  if (P == 0) {
    out.notes.push_back("constraint-skipped: ISMR (no sensing targets)");
  } else if (v_free || w_free) {
    ismr_form = masks.a_side - bud.ismr_max * masks.a_main;
    Eigen::SelfAdjointEigenSolver<CMat> es((ismr_form + ismr_form.adjoint()) / 2.0);
    ismr_lmin = es.eigenvalues()[0];
    best_dir = es.eigenvectors().col(0);
    if (ismr_lmin >= -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
      out.notes.push_back("ismr-infeasible: no transmit direction meets ISMR_max; V and W fixed to zero");
      v_free = w_free = false;
    } else {
      out.ismr_active = true;
    }
  }

  if (!v_free) {
    for (int l = 0; l < L; ++l)
      for (int a = 0; a < m2; ++a) prog.fix(lay.v[l] + a, 0.0);
    if (L > 0 && bud.p_v <= 0.0) out.notes.push_back("eliminated: V (zero DL budget)");
  }
  if (!w_free) {
    for (int a = 0; a < m2; ++a) prog.fix(lay.w + a, 0.0);
    if (bud.p_w <= 0.0) out.notes.push_back("eliminated: W (zero AN budget)");
  }
  std::vector<char> slack_free(K, 0);
  for (int k = 0; k < K; ++k) {
    slack_free[k] = p_free && e.t_tilde[k] > 0.0;
    if (!p_free) prog.fix(lay.p + k, 0.0);
    if (!slack_free[k]) {
      prog.fix(lay.varpi + k, 0.0);
      prog.fix(lay.vartheta + k, 0.0);
      if (p_free) out.notes.push_back("eliminated: slack pair " + std::to_string(k) + " (zero expansion)");
    }
  }
  if (K > 0 && !p_free) out.notes.push_back("eliminated: p (zero UL budget)");

  const Terms t = build_terms(ch, lay, e);
  const auto& nz = ch.noise;

  // Objective, in bps/Hz.
  const double w2 = 1.0 / kLn2;
  for (int l = 0; l < L; ++l) {
    Affine arg = t.s_dl[l];
    for (std::size_t j = 0; j < t.i_dl[l].idx.size(); ++j) arg.add(t.i_dl[l].idx[j], t.i_dl[l].coef[j]);
    arg.constant = nz.dl;
    prog.logs.push_back({w2, arg, "dl_total" + std::to_string(l)});
    subtract_taylor(prog.linear, t.i_dl[l], e.terms.i_dl[l], nz.dl, 1.0);
  }
  for (int p = 0; p < P; ++p) {
    prog.logs.push_back({w2, plus_constant(t.i_eve[p], nz.eve), "eve_dl_intf" + std::to_string(p)});
    Affine total = t.s_eve[p];
    for (std::size_t j = 0; j < t.i_eve[p].idx.size(); ++j) total.add(t.i_eve[p].idx[j], t.i_eve[p].coef[j]);
    subtract_taylor(prog.linear, total, e.terms.s_eve[p] + e.terms.i_eve[p], nz.eve, 1.0);
  }
  for (int k = 0; k < K; ++k) {
    prog.logs.push_back({w2, Affine(1.0).add(lay.varpi + k, 1.0), "ul_rate" + std::to_string(k)});
  }
  for (int p = 0; p < P; ++p) {
    for (int k = 0; k < K; ++k) {
      prog.logs.push_back({w2, plus_constant(t.i_pk[p][k], nz.eve),
                           "eve_ul_intf" + std::to_string(p) + "_" + std::to_string(k)});
    }
    if (K > 0) subtract_taylor(prog.linear, t.psi[p], e.psi_tilde[p], nz.eve, static_cast<double>(K));
  }

  // Constraints.
  const RVec enc_i = conic::hermitian_encode(CMat::Identity(nt, nt));
  if (v_free) {
    Affine f(bud.p_v);
    for (int l = 0; l < L; ++l) add_trace(f, lay.v[l], enc_i, -1.0);
    prog.linear_constraints.push_back({f, "budget_v"});
  }
  if (w_free) {
    Affine f(bud.p_w);
    add_trace(f, lay.w, enc_i, -1.0);
    prog.linear_constraints.push_back({f, "budget_w"});
  }
  if (p_free) {
    Affine f(bud.p_ul);
    for (int k = 0; k < K; ++k) f.add(lay.p + k, -1.0);
    prog.linear_constraints.push_back({f, "budget_ul"});
  }
  if (out.ismr_active) {
    const RVec enc_m = conic::hermitian_encode((ismr_form + ismr_form.adjoint()) / 2.0);
    Affine f;
    if (v_free)
      for (int l = 0; l < L; ++l) add_trace(f, lay.v[l], enc_m, -1.0);
    if (w_free) add_trace(f, lay.w, enc_m, -1.0);
    prog.linear_constraints.push_back({f, "ismr"});
  }
  for (int l = 0; l < L && v_free; ++l) prog.psd.push_back({lay.v[l], nt, -1, "V" + std::to_string(l + 1)});
  if (w_free) prog.psd.push_back({lay.w, nt, -1, "W"});
  for (int k = 0; k < K && p_free; ++k) {
    prog.linear_constraints.push_back({Affine().add(lay.p + k, 1.0), "p_nonneg" + std::to_string(k)});
  }
  for (int k = 0; k < K; ++k) {
    if (!slack_free[k]) continue;
    const std::string s = std::to_string(k);
    const double tt = e.t_tilde[k];
    prog.linear_constraints.push_back({Affine().add(lay.varpi + k, 1.0), "varpi_nonneg" + s});
    prog.linear_constraints.push_back({Affine().add(lay.vartheta + k, 1.0), "vartheta_nonneg" + s});
    prog.linear_constraints.push_back(
        {Affine(-tt * tt).add(lay.vartheta + k, 2.0 * tt).add(lay.varpi + k, -1.0), "slack_linearized" + s});
    prog.cones.push_back({Affine().add(lay.vartheta + k, 1.0), Affine().add(lay.p + k, 1.0), t.rhs[k],
                          "slack_cone" + s});
  }

  // Interior hint: pull the expansion toward a strictly interior point until
  // every slack pair has room.
  DesignPoint inner = DesignPoint::zeros(nt, ch.n_rx(), L, K);
  CMat q0 = CMat::Identity(nt, nt);
  if (out.ismr_active) {
    const double tr = ismr_form.trace().real();
    const double delta = tr > 0.0 ? std::min(1.0, 0.5 * (-ismr_lmin) / tr) : 1.0;
    q0 = best_dir * best_dir.adjoint() + delta * CMat::Identity(nt, nt);
  }
  q0 /= q0.trace().real();
  for (int l = 0; l < L && v_free; ++l) inner.v_cov[l] = (bud.p_v / (2.0 * L)) * q0;
  if (w_free) inner.w_cov = (bud.p_w / 2.0) * q0;
  if (p_free) inner.p_ul.setConstant(bud.p_ul / (2.0 * K));

  const DesignPoint tilde = e.as_point();
  for (double tau = 0.5; tau > 1e-7; tau *= 0.25) {
    DesignPoint h = inner;
    for (int l = 0; l < L && v_free; ++l) h.v_cov[l] = (1 - tau) * tilde.v_cov[l] + tau * inner.v_cov[l];
    if (w_free) h.w_cov = (1 - tau) * tilde.w_cov + tau * inner.w_cov;
    if (p_free) h.p_ul = (1 - tau) * tilde.p_ul.cwiseMax(0.0) + tau * inner.p_ul;
    RVec x = encode_point(lay, h);
    bool ok = true;
    for (int k = 0; k < K; ++k) {
      if (!slack_free[k]) continue;
      const double tt = e.t_tilde[k];
      const double room = h.p_ul[k] * t.rhs[k].eval(x);
      if (!(room > 0.0) || std::sqrt(room) <= 0.5 * tt * (1.0 + 1e-9)) {
        ok = false;
        break;
      }
      const double th = 0.5 * (0.5 * tt + std::sqrt(room));
      x[lay.vartheta + k] = th;
      x[lay.varpi + k] = 0.5 * (2.0 * tt * th - tt * tt);
    }
    if (ok) {
      prog.hint = x;
      break;
    }
  }
  prog.notes = out.notes;
  return out;
}

RVec encode_point(const P13Layout& lay, const DesignPoint& x) {
  RVec v = RVec::Zero(lay.size());
  for (int k = 0; k < lay.n_ul; ++k) {
    v[lay.p + k] = x.p_ul[k];
    if (x.slack_w.size() == lay.n_ul) v[lay.varpi + k] = x.slack_w[k];
    if (x.slack_t.size() == lay.n_ul) v[lay.vartheta + k] = x.slack_t[k];
  }
  const int m2 = lay.n_tx * lay.n_tx;
  for (int l = 0; l < lay.n_dl; ++l) v.segment(lay.v[l], m2) = conic::hermitian_encode(x.v_cov[l]);
  v.segment(lay.w, m2) = conic::hermitian_encode(x.w_cov);
  return v;
}

DesignPoint decode_point(const P13Layout& lay, const RVec& v) {
  DesignPoint x;
  x.p_ul = v.segment(lay.p, lay.n_ul);
  x.slack_w = v.segment(lay.varpi, lay.n_ul);
  x.slack_t = v.segment(lay.vartheta, lay.n_ul);
  for (int l = 0; l < lay.n_dl; ++l) x.v_cov.push_back(conic::hermitian_decode(v.data() + lay.v[l], lay.n_tx));
  x.w_cov = conic::hermitian_decode(v.data() + lay.w, lay.n_tx);
  return x;
}

double p13_violation(const P13& prob, const DesignPoint& x) {
  return prob.program.max_violation(encode_point(prob.layout, x));
}

SubproblemResult solve(const P13& prob, const conic::Tolerances& tol) {
  const conic::Result r = conic::solve(prob.program, tol);
  SubproblemResult out;
  out.status = r.status;
  out.point = decode_point(prob.layout, r.x);
  out.objective = r.objective;
  out.max_residual = r.max_residual;
  out.iterations = r.iterations;
  out.used_phase1 = r.used_phase1;
  return out;
}

}  // namespace fdisac
