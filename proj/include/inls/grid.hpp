#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace inls {

/// Uniform cell-centered radial grid on (0, R]: nodes r_i = (i - 1/2) h,
/// i = 1..M, h = R/M. The origin is never a node, so r^{-1} and r^b stay
/// finite everywhere. Quadrature against the measure omega_{N-1} r^{N-1+a} dr
/// uses exact per-cell moments of the weight, so constants integrate exactly
/// for every a >= 0 and all weights are nonnegative.
class RadialGrid {
 public:
  RadialGrid(int N, double R, int M);

  int dim() const { return N_; }
  double radius() const { return R_; }
  int size() const { return M_; }
  double spacing() const { return h_; }
  double sphere_area() const { return area_; }  // 2 pi^{N/2} / Gamma(N/2)

  const Eigen::VectorXd& nodes() const { return nodes_; }
  /// Cell face radii i*h, i = 0..M (size M+1).
  const Eigen::VectorXd& faces() const { return faces_; }

  /// Weights w with sum_i w_i g(r_i) ~ omega_{N-1} int_0^R g r^{N-1+a} dr.
  /// Cached per a; thread-safe.
  const Eigen::VectorXd& quad_weights(double a) const;

  /// omega_{N-1} x_f^{N-1} h at interior faces f = 1..M-1 (size M-1); used by
  /// the gradient quadrature paired with the finite-volume Laplacian.
  const Eigen::VectorXd& face_weights() const { return face_weights_; }
  /// Coefficient of |u_M|^2 in the Dirichlet boundary flux term.
  double boundary_weight() const { return boundary_weight_; }

  bool same_as(const RadialGrid& other) const {
    return N_ == other.N_ && M_ == other.M_ && R_ == other.R_;
  }

 private:
  int N_;
  double R_;
  int M_;
  double h_;
  double area_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd faces_;
  Eigen::VectorXd face_weights_;
  double boundary_weight_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, Eigen::VectorXd> weight_cache_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::domain_error unless N in [2,12], M >= 16, R > 0.
GridPtr make_grid(int N, double R, int M);

/// Complex radial function sampled at the grid nodes.
struct RadialField {
  GridPtr grid;
  Eigen::VectorXcd values;

  RadialField() = default;
  RadialField(GridPtr g, Eigen::VectorXcd v);

  int size() const { return static_cast<int>(values.size()); }
  bool finite() const;
  /// |u| at the outermost node; truncation-adequacy diagnostic.
  double boundary_abs() const { return std::abs(values[values.size() - 1]); }
};

RadialField make_field(GridPtr grid, const std::function<std::complex<double>(double)>& f);
RadialField real_field(GridPtr grid, const Eigen::VectorXd& v);

/// Throws std::invalid_argument when two fields do not share a grid.
void require_same_grid(const RadialField& u, const RadialField& v);

/// omega_{N-1} int_0^R g(r) r^{N-1+a} dr by the grid rule. g must be finite,
/// a >= 0.
template <class Derived>
double integrate_weighted(const RadialGrid& grid, const Eigen::DenseBase<Derived>& g,
                          double a) {
  if (a < 0.0) throw std::domain_error("integrate_weighted: a must be >= 0");
  if (!g.derived().allFinite())
    throw std::invalid_argument("integrate_weighted: non-finite samples");
  return grid.quad_weights(a).dot(g.derived().matrix());
}

double integrate_weighted(const RadialField& u_abs_power, double a);

/// Finite-volume radial Laplacian u'' + (N-1)/r u' with the regularity flux
/// r^{N-1} u' -> 0 at the origin and homogeneous Dirichlet at r = R.
/// Exactly symmetric and negative w.r.t. the a = 0 quadrature weights.
RadialField laplacian_radial(const RadialField& u);
Eigen::VectorXcd laplacian_apply(const RadialGrid& grid, const Eigen::VectorXcd& u);
Eigen::VectorXd laplacian_apply(const RadialGrid& grid, const Eigen::VectorXd& u);

/// Tridiagonal coefficients of the Laplacian: lower/diag/upper, sized M
/// (lower[0] and upper[M-1] unused). Shared by the implicit time stepper and
/// the preconditioned descent.
struct TridiagOperator {
  Eigen::VectorXd lower, diag, upper;
};
TridiagOperator laplacian_tridiag(const RadialGrid& grid);
Eigen::VectorXcd apply(const TridiagOperator& op, const Eigen::VectorXcd& u);
Eigen::VectorXd apply(const TridiagOperator& op, const Eigen::VectorXd& u);

/// Thomas algorithm; lower[0] and upper[last] are ignored.
Eigen::VectorXcd tridiag_solve(const Eigen::VectorXcd& lower, const Eigen::VectorXcd& diag,
                               const Eigen::VectorXcd& upper, const Eigen::VectorXcd& rhs);
Eigen::VectorXd tridiag_solve(const Eigen::VectorXd& lower, const Eigen::VectorXd& diag,
                              const Eigen::VectorXd& upper, const Eigen::VectorXd& rhs);

/// int |u'|^2 weighted, via face differences consistent with the Laplacian:
/// <-Delta u, u> == grad_norm_sq(u) exactly.
double grad_norm_sq(const RadialField& u);

/// int (grad u . conj(grad v) + u conj(v)) dx; linear in u, conjugate in v.
std::complex<double> h1_inner(const RadialField& u, const RadialField& v);
double h1_norm_sq(const RadialField& u);

}  // namespace inls
