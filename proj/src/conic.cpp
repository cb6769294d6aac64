#include "fdisac/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>

namespace fdisac::conic {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInf = std::numeric_limits<double>::infinity();

double coef_norm(const Affine& a) {
  double s = 0.0;
  for (double c : a.coef) s += c * c;
  return std::sqrt(s);
}

Affine scaled(const Affine& a, double s) {
  Affine r = a;
  for (double& c : r.coef) c *= s;
  r.constant *= s;
  return r;
}

double unit_scale(const Affine& a) {
  const double n = coef_norm(a);
  if (n > 0.0) return 1.0 / n;
  return std::abs(a.constant) > 0.0 ? 1.0 / std::abs(a.constant) : 1.0;
}

CMat block_matrix(const RVec& x, const PsdConstraint& c) {
  CMat m = hermitian_decode(x.data() + c.offset, c.dim);
  if (c.shift >= 0) m.diagonal().array() += x[c.shift];
  return m;
}

// Encoding of the Hermitian matrix a b^H-style products restricted to the
// upper triangle; used when forming Y E_a Y.
void encode_into(const CMat& m, double* out) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i) {
    out[i * n + i] = m(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      out[i * n + j] = kSqrt2 * m(i, j).real();
      out[j * n + i] = kSqrt2 * m(i, j).imag();
    }
  }
}

// Program compiled into dense form over the free coordinates only, with every
// constraint normalized to unit coefficient norm.
struct Dense {
  RVec a;
  double b = 0.0;
  double eval(const RVec& z) const { return a.dot(z) + b; }
};

struct Compiled {
  int n = 0;              // free variables
  std::vector<int> free;  // free -> full index
  RVec base;              // full vector with fixed values, zeros elsewhere

  std::vector<Dense> logs;
  std::vector<double> log_w;
  RVec lin_obj;
  std::vector<Dense> lins;
  struct Block {
    int offset = 0;  // in free coordinates
    int dim = 0;
    int shift = -1;
  };
  std::vector<Block> blocks;
  struct Cone {
    Dense y, z, w;
  };
  std::vector<Cone> cones;
  double theta = 0.0;
  bool infeasible_constant = false;

  RVec expand(const RVec& z) const {
    RVec x = base;
    for (int i = 0; i < n; ++i) x[free[i]] = z[i];
    return x;
  }
  RVec restrict(const RVec& x) const {
    RVec z(n);
    for (int i = 0; i < n; ++i) z[i] = x[free[i]];
    return z;
  }
};

Compiled compile(const Program& prog, double feas_tol) {
  Compiled c;
  const int N = prog.n_vars;
  std::vector<int> to_free(N, -1);
  c.base = RVec::Zero(N);
  for (int i = 0; i < N; ++i) {
    if (prog.fixed[i]) {
      c.base[i] = prog.fixed_value[i];
    } else {
      to_free[i] = c.n++;
      c.free.push_back(i);
    }
  }
  auto dense = [&](const Affine& a, double scale) {
    Dense d;
    d.a = RVec::Zero(c.n);
    d.b = a.constant;
    for (std::size_t j = 0; j < a.idx.size(); ++j) {
      const int i = a.idx[j];
      if (to_free[i] < 0) d.b += a.coef[j] * c.base[i];
      else d.a[to_free[i]] += a.coef[j];
    }
    d.a *= scale;
    d.b *= scale;
    return d;
  };
  auto trivially = [](const Dense& d) { return d.a.squaredNorm() == 0.0; };

  for (const auto& t : prog.logs) {
    Dense d = dense(t.arg, unit_scale(t.arg));
    if (trivially(d)) continue;
    c.logs.push_back(std::move(d));
    c.log_w.push_back(t.weight);
  }
  c.lin_obj = dense(prog.linear, 1.0).a;
  for (const auto& l : prog.linear_constraints) {
    Dense d = dense(l.expr, unit_scale(l.expr));
    if (trivially(d)) {
      if (d.b < -feas_tol) c.infeasible_constant = true;
      continue;
    }
    c.lins.push_back(std::move(d));
  }
  for (const auto& p : prog.psd) {
    int n_fixed = 0;
    for (int a = 0; a < p.dim * p.dim; ++a) n_fixed += prog.fixed[p.offset + a] ? 1 : 0;
    if (n_fixed == p.dim * p.dim && (p.shift < 0 || prog.fixed[p.shift])) continue;
    if (n_fixed != 0) throw InvalidArgument("PSD block '" + p.label + "' is partially fixed");
    Compiled::Block b;
    b.offset = to_free[p.offset];
    b.dim = p.dim;
    b.shift = p.shift >= 0 ? to_free[p.shift] : -1;
    c.blocks.push_back(b);
  }
  for (const auto& k : prog.cones) {
    const double sz = unit_scale(k.z), sw = unit_scale(k.w);
    Compiled::Cone d{dense(k.y, std::sqrt(sz * sw)), dense(k.z, sz), dense(k.w, sw)};
    if (trivially(d.y) && trivially(d.z) && trivially(d.w)) {
      if (d.y.b * d.y.b > d.z.b * d.w.b + feas_tol || d.z.b < -feas_tol || d.w.b < -feas_tol) {
        c.infeasible_constant = true;
      }
      continue;
    }
    c.cones.push_back(std::move(d));
  }
  c.theta = static_cast<double>(c.lins.size()) + 2.0 * static_cast<double>(c.cones.size());
  for (const auto& b : c.blocks) c.theta += b.dim;
  return c;
}

CMat block_of(const Compiled::Block& b, const RVec& z) {
  CMat m = hermitian_decode(z.data() + b.offset, b.dim);
  if (b.shift >= 0) m.diagonal().array() += z[b.shift];
  return m;
}

// Barrier-augmented objective t * (-f) + phi; +inf outside the domain.
double merit(const Compiled& c, const RVec& z, double t) {
  double v = -t * c.lin_obj.dot(z);
  for (std::size_t j = 0; j < c.logs.size(); ++j) {
    const double a = c.logs[j].eval(z);
    if (!(a > 0.0)) return kInf;
    v -= t * c.log_w[j] * std::log(a);
  }
  for (const auto& l : c.lins) {
    const double a = l.eval(z);
    if (!(a > 0.0)) return kInf;
    v -= std::log(a);
  }
  for (const auto& k : c.cones) {
    const double y = k.y.eval(z), zz = k.z.eval(z), w = k.w.eval(z);
    const double s = zz * w - y * y;
    if (!(zz > 0.0) || !(w > 0.0) || !(s > 0.0)) return kInf;
    v -= std::log(s);
  }
  for (const auto& b : c.blocks) {
    Eigen::LLT<CMat> llt(block_of(b, z));
    if (llt.info() != Eigen::Success) return kInf;
    const auto& d = llt.matrixLLT();
    for (int i = 0; i < b.dim; ++i) {
      const double li = d(i, i).real();
      if (!(li > 0.0)) return kInf;
      v -= 2.0 * std::log(li);
    }
  }
  return v;
}

double objective_free(const Compiled& c, const RVec& z) {
  double v = c.lin_obj.dot(z);
  for (std::size_t j = 0; j < c.logs.size(); ++j) v += c.log_w[j] * std::log(c.logs[j].eval(z));
  return v;
}

// Newton systems are formed in block-scaled coordinates: for each PSD block
// X = L L^H the step is written as L D L^H, which turns the log-det Hessian
// into the identity. Without it the block Hessian is as ill-conditioned as
// X squared and the factorization breaks down long before the gap is small.
struct Scaling {
  std::vector<CMat> factor;
};

RVec to_scaled(const Compiled& c, const Scaling& sc, const RVec& a) {
  RVec r = a;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const auto& b = c.blocks[i];
    const CMat& l = sc.factor[i];
    const CMat m = l.adjoint() * hermitian_decode(a.data() + b.offset, b.dim) * l;
    encode_into(m, r.data() + b.offset);
  }
  return r;
}

RVec from_scaled(const Compiled& c, const Scaling& sc, const RVec& d) {
  RVec r = d;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const auto& b = c.blocks[i];
    const CMat& l = sc.factor[i];
    const CMat m = l * hermitian_decode(d.data() + b.offset, b.dim) * l.adjoint();
    encode_into(m, r.data() + b.offset);
  }
  return r;
}

// Gradient and (lower-triangular) Hessian of the merit function in scaled
// coordinates.
void derivatives(const Compiled& c, const RVec& z, double t, Scaling& sc, RVec& g, RMat& h) {
  const int n = c.n;
  sc.factor.clear();
  for (const auto& b : c.blocks) sc.factor.push_back(block_of(b, z).llt().matrixL().toDenseMatrix());
  auto hl = [&]() { return h.selfadjointView<Eigen::Lower>(); };

  g = -t * to_scaled(c, sc, c.lin_obj);
  h = RMat::Zero(n, n);
  for (std::size_t j = 0; j < c.logs.size(); ++j) {
    const double a = c.logs[j].eval(z);
    const double w = t * c.log_w[j];
    const RVec v = to_scaled(c, sc, c.logs[j].a);
    g -= (w / a) * v;
    hl().rankUpdate(v, w / (a * a));
  }
  for (const auto& l : c.lins) {
    const double a = l.eval(z);
    const RVec v = to_scaled(c, sc, l.a);
    g -= v / a;
    hl().rankUpdate(v, 1.0 / (a * a));
  }
  for (const auto& k : c.cones) {
    const double y = k.y.eval(z), zz = k.z.eval(z), w = k.w.eval(z);
    const double s = zz * w - y * y;
    const RVec ay = to_scaled(c, sc, k.y.a), az = to_scaled(c, sc, k.z.a), aw = to_scaled(c, sc, k.w.a);
    const RVec u = w * az + zz * aw - 2.0 * y * ay;
    g -= u / s;
    hl().rankUpdate(u, 1.0 / (s * s));
    hl().rankUpdate(az, aw, -1.0 / s);
    hl().rankUpdate(ay, 2.0 / s);
  }
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const auto& b = c.blocks[i];
    const int m = b.dim, m2 = m * m;
    const CMat eye = CMat::Identity(m, m);
    RVec enc(m2);
    encode_into(eye, enc.data());
    g.segment(b.offset, m2) -= enc;
    h.block(b.offset, b.offset, m2, m2).diagonal().array() += 1.0;
    if (b.shift >= 0) {
      // X = L L^H includes the shift; dX = L D L^H + ds I.
      const CMat& l = sc.factor[i];
      const CMat linv = l.triangularView<Eigen::Lower>().solve(eye);
      const CMat y = linv.adjoint() * linv;
      const CMat cross = linv * linv.adjoint();  // L^H Y^2 L
      RVec e2(m2);
      encode_into(cross, e2.data());
      g[b.shift] -= y.trace().real();
      // Lower triangle: the shift index follows the block in every program
      // built here, but fill both sides to stay independent of the order.
      h.block(b.shift, b.offset, 1, m2) += e2.transpose();
      h.block(b.offset, b.shift, m2, 1) += e2;
      h(b.shift, b.shift) += (y * y).trace().real();
    }
  }
}

struct RunOutcome {
  Status status = Status::NumericalFailure;
  RVec z;
  double gap = kInf;
  int iterations = 0;
  bool stopped_early = false;
};

// Path following from a strictly feasible z0. `early` is polled after every
// Newton step and ends the run when it returns true.
RunOutcome path_follow(const Compiled& c, RVec z, const Tolerances& tol,
                       const std::function<bool(const RVec&)>& early) {
  RunOutcome out;
  if (c.n == 0) {
    out.status = Status::Optimal;
    out.z = z;
    out.gap = 0.0;
    return out;
  }
  RVec g;
  RMat h;
  Scaling sc;
  // Start where the objective and barrier gradients balance best in the
  // barrier's own metric. Badly scaled objectives (coefficients ~1e6) would
  // otherwise begin far off the central path and burn the step budget.
  double t = 1.0;
  {
    RVec g0;
    derivatives(c, z, 0.0, sc, g0, h);
    Eigen::LDLT<RMat> ldlt(h);
    derivatives(c, z, 1.0, sc, g, h);
    const RVec go = g - g0;
    const RVec hg = ldlt.solve(go);
    const double den = go.dot(hg), num = -g0.dot(hg);
    if (ldlt.info() == Eigen::Success && den > 0.0 && std::isfinite(num / den)) {
      t = std::clamp(num / den, 1e-10, 1.0);
    }
  }
  int steps = 0;
  bool stalled = false;
  while (true) {
    // Centering.
    for (int inner = 0;; ++inner) {
      if (steps >= tol.max_iterations) break;
      derivatives(c, z, t, sc, g, h);
      Eigen::LDLT<RMat> ldlt(h);
      const RVec ds = -ldlt.solve(g);
      if (ldlt.info() != Eigen::Success || !ds.allFinite()) {
        stalled = true;
        break;
      }
      const double lambda2 = -g.dot(ds);
      const RVec dz = from_scaled(c, sc, ds);
      if (!(lambda2 >= 0.0)) {
        stalled = true;
        break;
      }
      // Centering is only approximate; the decrement has a roundoff floor
      // that grows with t, so a tighter test would never be met late on.
      if (lambda2 * 0.5 <= 1e-6) break;
      ++steps;
      const double f0 = merit(c, z, t);
      const double slope = -lambda2;
      double alpha = 1.0;
      bool moved = false;
      bool floor_hit = false;
      // Steps below 1e-8 only trade roundoff in the merit; treat as a stall.
      for (int ls = 0; ls < 27; ++ls) {
        const RVec zn = z + alpha * dz;
        const double fn = merit(c, zn, t);
        const bool full = std::sqrt(lambda2) < 0.25;
        if (std::isfinite(fn) && (full || fn <= f0 + 0.01 * alpha * slope)) {
          z = zn;
          moved = true;
          // Inside the quadratic region a step that no longer lowers the
          // merit measurably means the decrement sits at its roundoff floor.
          floor_hit = full && !(fn < f0 - 1e-13 * std::abs(f0));
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        stalled = true;
        break;
      }
      if (floor_hit) break;
      if (early && early(z)) {
        out.z = z;
        out.stopped_early = true;
        out.iterations = steps;
        out.status = Status::Optimal;
        return out;
      }
    }
    const double f = objective_free(c, z);
    out.gap = c.theta / t;
    const double scale = std::max(1.0, std::abs(f));
    if (stalled || steps >= tol.max_iterations) {
      out.status = out.gap <= 1e3 * tol.gap * scale ? Status::NearOptimal : Status::NumericalFailure;
      break;
    }
    if (out.gap <= tol.gap * scale) {
      out.status = Status::Optimal;
      break;
    }
    t *= tol.barrier_growth;
  }
  out.z = z;
  out.iterations = steps;
  return out;
}

Program normalized(const Program& p) {
  Program q = p;
  for (auto& l : q.linear_constraints) l.expr = scaled(l.expr, unit_scale(l.expr));
  for (auto& t : q.logs) t.arg = scaled(t.arg, unit_scale(t.arg));
  for (auto& k : q.cones) {
    const double sz = unit_scale(k.z), sw = unit_scale(k.w);
    k.z = scaled(k.z, sz);
    k.w = scaled(k.w, sw);
    k.y = scaled(k.y, std::sqrt(sz * sw));
  }
  return q;
}

// Phase I: maximize -s subject to every constraint relaxed by s.
Program phase1_program(const Program& prog, const RVec& x0, double& s0) {
  Program q = normalized(prog);
  const int s = q.n_vars;
  q.n_vars += 1;
  q.groups.push_back({"phase1_s", s, 1, 0});
  q.fixed.push_back(0);
  q.fixed_value.conservativeResize(q.n_vars);
  q.fixed_value[s] = 0.0;
  // Constraints without free variables were already checked by compile();
  // relaxing them would pin s at zero.
  auto touches_free = [&](const Affine& a) {
    for (std::size_t j = 0; j < a.idx.size(); ++j) {
      if (!prog.fixed[a.idx[j]]) return true;
    }
    return false;
  };
  std::erase_if(q.linear_constraints, [&](const LinearConstraint& l) { return !touches_free(l.expr); });
  std::erase_if(q.cones, [&](const RotatedCone& k) {
    return !touches_free(k.y) && !touches_free(k.z) && !touches_free(k.w);
  });
  std::erase_if(q.psd, [&](const PsdConstraint& p) { return prog.fixed[p.offset] != 0; });
  s0 = 0.0;
  for (auto& l : q.linear_constraints) {
    s0 = std::max(s0, -l.expr.eval(x0));
    l.expr.add(s, 1.0);
  }
  for (const auto& t : q.logs) {
    if (!touches_free(t.arg)) continue;
    LinearConstraint l{t.arg, "domain:" + t.label};
    s0 = std::max(s0, -l.expr.eval(x0));
    l.expr.add(s, 1.0);
    q.linear_constraints.push_back(std::move(l));
  }
  for (auto& p : q.psd) {
    if (p.shift >= 0) throw InvalidArgument("phase I: PSD block already shifted");
    const double lmin = Eigen::SelfAdjointEigenSolver<CMat>(block_matrix(x0, p)).eigenvalues().minCoeff();
    s0 = std::max(s0, -lmin);
    p.shift = s;
  }
  for (auto& k : q.cones) {
    const double y = k.y.eval(x0), z = k.z.eval(x0), w = k.w.eval(x0);
    s0 = std::max(s0, std::abs(y) - std::min(z, w));
    k.z.add(s, 1.0);
    k.w.add(s, 1.0);
  }
  s0 += 1.0;
  q.linear_constraints.push_back({Affine(1.0).add(s, 1.0), "phase1_floor"});
  q.logs.clear();
  q.linear = Affine().add(s, -1.0);
  q.hint.resize(0);
  return q;
}

bool strictly_feasible(const Compiled& c, const RVec& z) { return std::isfinite(merit(c, z, 1.0)); }

}  // namespace

Affine& Affine::add(int i, double c) {
  if (c != 0.0) {
    idx.push_back(i);
    coef.push_back(c);
  }
  return *this;
}

double Affine::eval(const RVec& x) const {
  double v = constant;
  for (std::size_t j = 0; j < idx.size(); ++j) v += coef[j] * x[idx[j]];
  return v;
}

RVec hermitian_encode(const CMat& a) {
  RVec out(a.rows() * a.rows());
  encode_into(a, out.data());
  return out;
}

CMat hermitian_decode(const double* x, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = x[i * n + i];
    for (int j = i + 1; j < n; ++j) {
      const cdouble v(x[i * n + j] / kSqrt2, x[j * n + i] / kSqrt2);
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

int Program::add_group(const std::string& name, int size, int matrix_dim) {
  const int off = n_vars;
  groups.push_back({name, off, size, matrix_dim});
  n_vars += size;
  fixed.resize(n_vars, 0);
  fixed_value.conservativeResize(n_vars);
  fixed_value.tail(size).setZero();
  return off;
}

void Program::fix(int i, double value) {
  fixed[i] = 1;
  fixed_value[i] = value;
}

int Program::free_count() const {
  return static_cast<int>(std::count(fixed.begin(), fixed.end(), 0));
}

double Program::objective(const RVec& x) const {
  double v = linear.eval(x);
  for (const auto& t : logs) v += t.weight * std::log(t.arg.eval(x));
  return v;
}

double Program::max_violation(const RVec& x) const {
  double worst = -kInf;
  for (const auto& l : linear_constraints) worst = std::max(worst, -l.expr.eval(x) * unit_scale(l.expr));
  for (const auto& t : logs) worst = std::max(worst, -t.arg.eval(x) * unit_scale(t.arg));
  for (const auto& p : psd) {
    const CMat m = block_matrix(x, p);
    worst = std::max(worst, -Eigen::SelfAdjointEigenSolver<CMat>(m).eigenvalues().minCoeff());
  }
  for (const auto& k : cones) {
    const double sz = unit_scale(k.z), sw = unit_scale(k.w);
    const double z = k.z.eval(x) * sz, w = k.w.eval(x) * sw, y = k.y.eval(x) * std::sqrt(sz * sw);
    worst = std::max({worst, -z, -w, std::abs(y) - std::sqrt(std::max(z, 0.0) * std::max(w, 0.0))});
  }
  for (int i = 0; i < n_vars; ++i) {
    if (fixed[i]) worst = std::max(worst, std::abs(x[i] - fixed_value[i]));
  }
  return worst;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::NearOptimal: return "near-optimal";
    case Status::Infeasible: return "infeasible";
    case Status::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

Result solve(const Program& prog, const Tolerances& tol) {
  if (static_cast<int>(prog.fixed.size()) != prog.n_vars || prog.fixed_value.size() != prog.n_vars) {
    throw InvalidArgument("program variable manifest is inconsistent");
  }
  Result res;
  const Compiled c = compile(prog, tol.feasibility);
  if (c.infeasible_constant) {
    res.status = Status::Infeasible;
    res.x = c.base;
    return res;
  }

  RVec x0 = c.base;
  if (prog.hint.size() == prog.n_vars) {
    for (int i : c.free) x0[i] = prog.hint[i];
  }
  RVec z0 = c.restrict(x0);
  if (!strictly_feasible(c, z0)) {
    res.used_phase1 = true;
    double s0 = 0.0;
    const Program p1 = phase1_program(prog, x0, s0);
    const Compiled c1 = compile(p1, tol.feasibility);
    RVec x1(p1.n_vars);
    x1.head(prog.n_vars) = x0;
    x1[prog.n_vars] = s0;
    const int s_free = c1.n - 1;
    Tolerances t1 = tol;
    const RunOutcome r1 = path_follow(c1, c1.restrict(x1), t1, [s_free](const RVec& z) { return z[s_free] < -1e-4; });
    res.iterations += r1.iterations;
    const double s_final = r1.z[s_free];
    if (!(s_final < 0.0)) {
      res.status = (r1.status == Status::NumericalFailure && !(s_final > 1e-6)) ? Status::NumericalFailure
                                                                               : Status::Infeasible;
      res.x = c1.expand(r1.z).head(prog.n_vars);
      res.max_residual = prog.max_violation(res.x);
      return res;
    }
    z0 = c.restrict(c1.expand(r1.z).head(prog.n_vars));
    if (!strictly_feasible(c, z0)) {
      res.status = Status::NumericalFailure;
      res.x = c.expand(z0);
      return res;
    }
  }

  Tolerances t2 = tol;
  t2.max_iterations = std::max(1, tol.max_iterations - res.iterations);
  const RunOutcome r = path_follow(c, z0, t2, nullptr);
  res.iterations += r.iterations;
  res.x = c.expand(r.z);
  res.objective = prog.objective(res.x);
  res.max_residual = std::max(0.0, prog.max_violation(res.x));
  res.gap = r.gap;
  res.status = r.status;
  if (res.status == Status::Optimal && res.max_residual > 1e-6) res.status = Status::NearOptimal;
  return res;
}

namespace {

void dump_affine(const Affine& a, const Program& prog, std::ostream& os) {
  auto name_of = [&](int i) {
    for (const auto& g : prog.groups) {
      if (i >= g.offset && i < g.offset + g.size) return g.name + "[" + std::to_string(i - g.offset) + "]";
    }
    return std::string("x[") + std::to_string(i) + "]";
  };
  os << std::setprecision(12) << a.constant;
  for (std::size_t j = 0; j < a.idx.size(); ++j) {
    os << (a.coef[j] < 0 ? " - " : " + ") << std::abs(a.coef[j]) << "*" << name_of(a.idx[j]);
  }
}

}  // namespace

void dump(const Program& prog, std::ostream& os) {
  os << "variables " << prog.n_vars << " (free " << prog.free_count() << ")\n";
  for (const auto& g : prog.groups) {
    int nf = 0;
    for (int i = g.offset; i < g.offset + g.size; ++i) nf += prog.fixed[i] ? 1 : 0;
    os << "  " << g.name << " offset=" << g.offset << " size=" << g.size;
    if (g.matrix_dim > 0) os << " hermitian=" << g.matrix_dim << "x" << g.matrix_dim;
    if (nf > 0) os << " fixed=" << nf;
    os << "\n";
  }
  os << "maximize\n  linear: ";
  dump_affine(prog.linear, prog, os);
  os << "\n";
  for (const auto& t : prog.logs) {
    os << "  log[" << t.label << "] weight=" << t.weight << " arg: ";
    dump_affine(t.arg, prog, os);
    os << "\n";
  }
  os << "subject to\n";
  for (const auto& l : prog.linear_constraints) {
    os << "  linear[" << l.label << "] >= 0: ";
    dump_affine(l.expr, prog, os);
    os << "\n";
  }
  for (const auto& p : prog.psd) {
    os << "  psd[" << p.label << "] offset=" << p.offset << " dim=" << p.dim << "\n";
  }
  for (const auto& k : prog.cones) {
    os << "  rotated_cone[" << k.label << "] y^2 <= z*w\n    y: ";
    dump_affine(k.y, prog, os);
    os << "\n    z: ";
    dump_affine(k.z, prog, os);
    os << "\n    w: ";
    dump_affine(k.w, prog, os);
    os << "\n";
  }
  for (const auto& n : prog.notes) os << "note: " << n << "\n";
}

}  // namespace fdisac::conic
