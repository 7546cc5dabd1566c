#include "inls/grid.hpp"

#include <cmath>

namespace inls {

namespace {

// int_alpha^beta r^q dr, stable for thin cells: the difference of powers is
// formed through expm1/log so nothing cancels.
double weight_moment(double alpha, double beta, double q) {
  const double e = q + 1.0;
  if (alpha <= 0.0) return std::pow(beta, e) / e;
  return std::pow(alpha, e) * std::expm1(e * std::log(beta / alpha)) / e;
}

}  // namespace

RadialGrid::RadialGrid(int N, double R, int M) : N_(N), R_(R), M_(M) {
  h_ = R / M;
  area_ = 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);
  nodes_.resize(M);
  for (int i = 0; i < M; ++i) nodes_[i] = (i + 0.5) * h_;
  faces_.resize(M + 1);
  for (int i = 0; i <= M; ++i) faces_[i] = i * h_;
  faces_[M] = R;
  face_weights_.resize(M - 1);
  for (int f = 1; f < M; ++f)
    face_weights_[f - 1] = area_ * std::pow(faces_[f], N - 1.0) * h_;
  // Dirichlet flux at r = R: u'(R) ~ (0 - u_M)/(h/2)
  boundary_weight_ = area_ * std::pow(R, N - 1.0) * 2.0 / h_;
}

const Eigen::VectorXd& RadialGrid::quad_weights(double a) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = weight_cache_.find(a);
  if (it != weight_cache_.end()) return it->second;
  const double q = N_ - 1.0 + a;
  Eigen::VectorXd w(M_);
  for (int i = 0; i < M_; ++i)
    w[i] = area_ * weight_moment(faces_[i], faces_[i + 1], q);
  return weight_cache_.emplace(a, std::move(w)).first->second;
}

GridPtr make_grid(int N, double R, int M) {
  if (N < 2 || N > 12) throw std::domain_error("make_grid: N must be in [2, 12]");
  if (M < 16) throw std::domain_error("make_grid: M must be at least 16");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::domain_error("make_grid: R must be positive");
  return std::make_shared<RadialGrid>(N, R, M);
}

RadialField::RadialField(GridPtr g, Eigen::VectorXcd v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("RadialField: null grid");
  if (values.size() != grid->size())
    throw std::invalid_argument("RadialField: sample count does not match grid");
}

bool RadialField::finite() const { return values.allFinite(); }

RadialField make_field(GridPtr grid, const std::function<std::complex<double>(double)>& f) {
  Eigen::VectorXcd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->nodes()[i]);
  return RadialField(std::move(grid), std::move(v));
}

RadialField real_field(GridPtr grid, const Eigen::VectorXd& v) {
  return RadialField(std::move(grid), v.cast<std::complex<double>>());
}

void require_same_grid(const RadialField& u, const RadialField& v) {
  if (!u.grid || !v.grid || !u.grid->same_as(*v.grid))
    throw std::invalid_argument("fields live on different grids");
}

double integrate_weighted(const RadialField& u_abs_power, double a) {
  return integrate_weighted(*u_abs_power.grid, u_abs_power.values.real(), a);
}

TridiagOperator laplacian_tridiag(const RadialGrid& grid) {
  const int M = grid.size();
  const double h = grid.spacing();
  const int N = grid.dim();
  const auto& x = grid.faces();
  TridiagOperator op;
  op.lower.setZero(M);
  op.diag.setZero(M);
  op.upper.setZero(M);
  for (int i = 0; i < M; ++i) {
    const double vol = weight_moment(x[i], x[i + 1], N - 1.0);
    const double fl = i > 0 ? std::pow(x[i], N - 1.0) / (h * vol) : 0.0;
    double fr = i + 1 < M ? std::pow(x[i + 1], N - 1.0) / (h * vol) : 0.0;
    if (i + 1 == M) {
      // Dirichlet at r = R through the half-cell flux
      op.diag[i] -= 2.0 * std::pow(grid.radius(), N - 1.0) / (h * vol);
    } else {
      op.upper[i] = fr;
    }
    if (i > 0) op.lower[i] = fl;
    op.diag[i] -= fl + fr;
  }
  return op;
}

namespace {

template <class Vec>
Vec tridiag_apply(const TridiagOperator& op, const Vec& u) {
  const int M = static_cast<int>(u.size());
  Vec out(M);
  for (int i = 0; i < M; ++i) {
    auto v = op.diag[i] * u[i];
    if (i > 0) v += op.lower[i] * u[i - 1];
    if (i + 1 < M) v += op.upper[i] * u[i + 1];
    out[i] = v;
  }
  return out;
}

}  // namespace

Eigen::VectorXcd apply(const TridiagOperator& op, const Eigen::VectorXcd& u) {
  return tridiag_apply(op, u);
}

Eigen::VectorXd apply(const TridiagOperator& op, const Eigen::VectorXd& u) {
  return tridiag_apply(op, u);
}

namespace {

template <class Vec>
Vec thomas(const Vec& lower, const Vec& diag, const Vec& upper, Vec rhs) {
  const int n = static_cast<int>(rhs.size());
  Vec c(n);
  c[0] = upper[0] / diag[0];
  rhs[0] = rhs[0] / diag[0];
  for (int i = 1; i < n; ++i) {
    const auto m = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / m : upper[i] * 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / m;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace

Eigen::VectorXcd tridiag_solve(const Eigen::VectorXcd& lower, const Eigen::VectorXcd& diag,
                               const Eigen::VectorXcd& upper, const Eigen::VectorXcd& rhs) {
  return thomas(lower, diag, upper, rhs);
}

Eigen::VectorXd tridiag_solve(const Eigen::VectorXd& lower, const Eigen::VectorXd& diag,
                              const Eigen::VectorXd& upper, const Eigen::VectorXd& rhs) {
  return thomas(lower, diag, upper, rhs);
}

Eigen::VectorXcd laplacian_apply(const RadialGrid& grid, const Eigen::VectorXcd& u) {
  return tridiag_apply(laplacian_tridiag(grid), u);
}

Eigen::VectorXd laplacian_apply(const RadialGrid& grid, const Eigen::VectorXd& u) {
  return tridiag_apply(laplacian_tridiag(grid), u);
}

RadialField laplacian_radial(const RadialField& u) {
  if (!u.finite()) throw std::invalid_argument("laplacian_radial: non-finite field");
  return RadialField(u.grid, laplacian_apply(*u.grid, u.values));
}

double grad_norm_sq(const RadialField& u) {
  const RadialGrid& g = *u.grid;
  const int M = g.size();
  const auto& fw = g.face_weights();
  const double h = g.spacing();
  double acc = 0.0;
  for (int f = 1; f < M; ++f)
    acc += fw[f - 1] * std::norm((u.values[f] - u.values[f - 1]) / h);
  acc += g.boundary_weight() * std::norm(u.values[M - 1]);
  return acc;
}

std::complex<double> h1_inner(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const RadialGrid& g = *u.grid;
  const int M = g.size();
  const auto& fw = g.face_weights();
  const double h = g.spacing();
  std::complex<double> acc = 0.0;
  for (int f = 1; f < M; ++f)
    acc += fw[f - 1] * (u.values[f] - u.values[f - 1]) *
           std::conj(v.values[f] - v.values[f - 1]) / (h * h);
  acc += g.boundary_weight() * u.values[M - 1] * std::conj(v.values[M - 1]);
  const auto& w = g.quad_weights(0.0);
  for (int i = 0; i < M; ++i) acc += w[i] * u.values[i] * std::conj(v.values[i]);
  return acc;
}

double h1_norm_sq(const RadialField& u) {
  return grad_norm_sq(u) + integrate_weighted(*u.grid, u.values.cwiseAbs2(), 0.0);
}

}  // namespace inls
