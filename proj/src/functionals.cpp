#include "inls/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace inls {

namespace {

void require_evaluable(const RadialField& u, const ModelParams& params) {
  if (!params.omega)
    throw std::invalid_argument("functionals: params.omega is required");
  if (!admissible(params))
    throw std::invalid_argument("functionals: params outside the admissible range");
  if (!u.finite()) throw std::invalid_argument("functionals: non-finite field");
}

}  // namespace

FunctionalReport report(const RadialField& u, const ModelParams& params) {
  require_evaluable(u, params);
  const RadialGrid& g = *u.grid;
  const double p = params.p, b = params.b, omega = *params.omega;
  const double B = critical_exponents(params).B;

  Eigen::VectorXd abs2 = u.values.cwiseAbs2();
  Eigen::VectorXd absp1 = abs2.array().pow((p + 1.0) / 2.0);

  FunctionalReport r;
  r.mass = integrate_weighted(g, abs2, 0.0);
  r.kinetic = grad_norm_sq(u);
  r.potential = integrate_weighted(g, absp1, b);
  r.variance = integrate_weighted(g, abs2, 2.0);
  r.energy = 0.5 * r.kinetic - r.potential / (p + 1.0);
  r.action = r.energy + 0.5 * omega * r.mass;
  r.nehari = r.kinetic + omega * r.mass - r.potential;
  r.virial = r.kinetic - B / (p + 1.0) * r.potential;
  r.boundary_abs = u.boundary_abs();
  const double peak = u.values.cwiseAbs().maxCoeff();
  r.variance_reliable = r.boundary_abs <= 1e-8 * peak;
  return r;
}

double kac_functional(const RadialField& u, const ModelParams& params, double a,
                      double c) {
  require_evaluable(u, params);
  const double N = params.N, b = params.b, p = params.p;
  const RadialGrid& g = *u.grid;
  Eigen::VectorXd abs2 = u.values.cwiseAbs2();
  const double mass = integrate_weighted(g, abs2, 0.0);
  const double kin = grad_norm_sq(u);
  const double pot =
      integrate_weighted(g, abs2.array().pow((p + 1.0) / 2.0).matrix(), b);
  return 0.5 * (2.0 * a + N * c) * mass + 0.5 * (2.0 * a + (N - 2.0) * c) * kin -
         (a + c * (b + N) / (1.0 + p)) * pot;
}

double gn_ratio(const RadialField& u, const ModelParams& params) {
  validate(params);
  if (!u.finite()) throw std::invalid_argument("gn_ratio: non-finite field");
  const double N = params.N, b = params.b, p = params.p;
  const RadialGrid& g = *u.grid;
  Eigen::VectorXd abs2 = u.values.cwiseAbs2();
  const double mass = integrate_weighted(g, abs2, 0.0);
  if (mass <= 0.0) throw std::invalid_argument("gn_ratio: zero field");
  const double kin = grad_norm_sq(u);
  const double pot =
      integrate_weighted(g, abs2.array().pow((p + 1.0) / 2.0).matrix(), b);
  const double grad_exp = (N * (p - 1.0) - 2.0 * b) / 2.0;
  const double mass_exp = (4.0 + 2.0 * b - (N - 2.0) * (p - 1.0)) / 2.0;
  return pot / (std::pow(std::sqrt(kin), grad_exp) * std::pow(std::sqrt(mass), mass_exp));
}

double phase_optimized_h1_distance(const RadialField& u, const RadialField& phi) {
  require_same_grid(u, phi);
  const double a = h1_norm_sq(u);
  const double b = h1_norm_sq(phi);
  const double cross = std::abs(h1_inner(u, phi));
  return std::sqrt(std::max(0.0, a + b - 2.0 * cross));
}

}  // namespace inls
