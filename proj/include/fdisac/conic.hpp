#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdisac/types.hpp"

namespace fdisac::conic {

/// Sparse affine map sum_i coef_i x[idx_i] + constant.
struct Affine {
  std::vector<int> idx;
  std::vector<double> coef;
  double constant = 0.0;

  Affine() = default;
  explicit Affine(double c) : constant(c) {}
  Affine& add(int i, double c);
  double eval(const RVec& x) const;
};

/// Hermitian N x N matrix stored as N^2 reals in an orthonormal basis: the
/// diagonal at (i,i), sqrt(2) Re X_ij at i*N+j and sqrt(2) Im X_ij at j*N+i
/// for i < j. Re tr(A X) is then the dot product of the encodings.
RVec hermitian_encode(const CMat& a);
CMat hermitian_decode(const double* x, int n);
inline int hermitian_index(int i, int j, int n) { return i * n + j; }

struct VarGroup {
  std::string name;
  int offset = 0;
  int size = 0;
  int matrix_dim = 0;  // > 0 for a Hermitian matrix variable
};

/// weight * ln(arg), weight > 0.
struct LogTerm {
  double weight = 1.0;
  Affine arg;
  std::string label;
};

/// expr >= 0.
struct LinearConstraint {
  Affine expr;
  std::string label;
};

/// Hermitian variable block (optionally shifted by x[shift] * I) kept PSD.
struct PsdConstraint {
  int offset = 0;
  int dim = 0;
  int shift = -1;
  std::string label;
};

/// y^2 <= z * w with z, w >= 0.
struct RotatedCone {
  Affine y, z, w;
  std::string label;
};

/// maximize sum_j weight_j ln(arg_j) + linear(x) subject to the constraint
/// lists. Variables marked fixed keep their value from `fixed_value`.
struct Program {
  int n_vars = 0;
  std::vector<VarGroup> groups;
  std::vector<char> fixed;
  RVec fixed_value;

  std::vector<LogTerm> logs;
  Affine linear;
  std::vector<LinearConstraint> linear_constraints;
  std::vector<PsdConstraint> psd;
  std::vector<RotatedCone> cones;

  RVec hint;  // optional strictly feasible start; empty when absent
  std::vector<std::string> notes;

  int add_group(const std::string& name, int size, int matrix_dim = 0);
  void fix(int i, double value);
  int free_count() const;

  double objective(const RVec& x) const;
  /// Largest violation over all constraints after normalizing each one by the
  /// norm of its coefficients. Non-positive means feasible.
  double max_violation(const RVec& x) const;
};

enum class Status { Optimal, NearOptimal, Infeasible, NumericalFailure };
const char* to_string(Status s);

struct Tolerances {
  double feasibility = 1e-8;
  double gap = 1e-8;  // relative to max(1, |objective|)
  int max_iterations = 200;  // Newton steps, summed over centering rounds
  double barrier_growth = 20.0;
};

struct Result {
  Status status = Status::NumericalFailure;
  RVec x;
  double objective = 0.0;
  double max_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool used_phase1 = false;
};

/// Barrier path-following method with damped Newton centering. Starts from
/// the hint when it is strictly feasible, otherwise runs a phase-I problem.
Result solve(const Program& prog, const Tolerances& tol = {});

/// Human-readable dump: variable manifest, objective terms, constraints.
void dump(const Program& prog, std::ostream& os);

}  // namespace fdisac::conic
