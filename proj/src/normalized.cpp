#include "inls/normalized.hpp"

#include <cmath>
#include <stdexcept>

namespace inls {

namespace {

double mass_of(const RadialGrid& g, const Eigen::VectorXd& v) {
  return integrate_weighted(g, v.cwiseAbs2(), 0.0);
}

double potential_of(const RadialGrid& g, const Eigen::VectorXd& v, double b, double p) {
  return integrate_weighted(g, v.cwiseAbs().array().pow(p + 1.0).matrix(), b);
}

double kinetic_of(const RadialGrid& g, const Eigen::VectorXd& v) {
  const auto& fw = g.face_weights();
  const double h = g.spacing();
  double kin = 0.0;
  for (int f = 1; f < g.size(); ++f) {
    const double d = (v[f] - v[f - 1]) / h;
    kin += fw[f - 1] * d * d;
  }
  kin += g.boundary_weight() * v[g.size() - 1] * v[g.size() - 1];
  return kin;
}

}  // namespace

NormalizedSolution scaled_normalized_solution(double c, const ModelParams& params,
                                              const GroundState& Q1) {
  validate(params);
  if (!(c > 0.0)) throw std::domain_error("scaled_normalized_solution: c must be positive");
  if (!admissible(params))
    throw std::domain_error("scaled_normalized_solution: inadmissible params");
  if (is_mass_critical(params))
    throw std::domain_error(
        "scaled_normalized_solution: the dilation preserves mass at p = p_c, "
        "a mass target cannot be prescribed");
  const Exponents e = critical_exponents(params);
  const double mass1 = report(Q1.profile, Q1.params).mass;
  const double expo = 2.0 * (params.p - 1.0) / (params.N * (e.p_mass_critical - params.p));
  const double omega_c = std::pow(c / mass1, expo);
  GroundState q = rescale_omega(Q1, omega_c);

  NormalizedSolution out;
  out.profile = q.profile;
  out.mass_target = c;
  out.omega_c = omega_c;
  out.energy_value = report(q.profile, q.params).energy;
  out.lagrange_residual = q.residual;
  out.iterations = 0;
  return out;
}

NormalizedSolution minimize_mass_constrained(double c, const ModelParams& params,
                                             const RadialField& init,
                                             const DescentOptions& opts) {
  validate(params);
  if (!(c > 0.0)) throw std::domain_error("minimize_mass_constrained: c must be positive");
  if (classify_regime(params) != Regime::MassSubcritical)
    throw std::domain_error(
        "minimize_mass_constrained: constrained minimization requires the "
        "mass-subcritical regime");
  const RadialGrid& g = *init.grid;
  const int M = g.size();
  const double b = params.b, p = params.p;

  Eigen::VectorXd phi = init.values.cwiseAbs();
  if (!(phi.maxCoeff() > 0.0))
    throw std::invalid_argument("minimize_mass_constrained: zero initial iterate");
  phi *= std::sqrt(c / mass_of(g, phi));

  const TridiagOperator lap = laplacian_tridiag(g);
  // preconditioner (I - Delta)
  Eigen::VectorXd pre_diag = Eigen::VectorXd::Ones(M) - lap.diag;
  Eigen::VectorXd pre_lower = -lap.lower, pre_upper = -lap.upper;
  const auto& w0 = g.quad_weights(0.0);
  Eigen::VectorXd rb(M);
  for (int i = 0; i < M; ++i) rb[i] = std::pow(g.nodes()[i], b);

  auto energy = [&](const Eigen::VectorXd& v) {
    return 0.5 * kinetic_of(g, v) - potential_of(g, v, b, p) / (p + 1.0);
  };
  auto gradient = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd nl =
        rb.array() * v.array().abs().pow(p - 1.0) * v.array();
    return (-apply(lap, v) - nl).eval();
  };

  double E = energy(phi);
  double tau = opts.step0;
  int accepted_since_reset = 0;
  long iters = 0;
  bool converged = false;
  for (; iters < opts.max_iters; ++iters) {
    Eigen::VectorXd grad = gradient(phi);
    // first-order stationarity on the mass sphere
    const double ray = w0.dot(grad.cwiseProduct(phi).eval()) / c;
    Eigen::VectorXd proj = grad - ray * phi;
    if (proj.cwiseAbs().maxCoeff() < opts.grad_tol) {
      converged = true;
      break;
    }
    Eigen::VectorXd dir = tridiag_solve(pre_lower, pre_diag, pre_upper, grad);
    bool accepted = false;
    for (int halve = 0; halve < 60; ++halve) {
      Eigen::VectorXd cand = phi - tau * dir;
      const double m = mass_of(g, cand);
      if (m > 0.0) {
        cand *= std::sqrt(c / m);
        const double Ec = energy(cand);
        if (Ec < E) {
          phi = std::move(cand);
          E = Ec;
          accepted = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) break;  // no descent direction at double precision
    if (++accepted_since_reset >= opts.reset_every) {
      tau = opts.step0;
      accepted_since_reset = 0;
    }
  }
  if (!converged) {
    Eigen::VectorXd grad = gradient(phi);
    const double ray = w0.dot(grad.cwiseProduct(phi).eval()) / c;
    if ((grad - ray * phi).cwiseAbs().maxCoeff() >= 10.0 * opts.grad_tol)
      throw std::runtime_error(
          "minimize_mass_constrained: descent stagnated above tolerance");
  }

  // Lagrange frequency by weighted least squares over interior nodes
  double num = 0.0, den = 0.0;
  Eigen::VectorXd lap_phi = apply(lap, phi);
  for (int i = 0; i < M; ++i) {
    if (g.nodes()[i] > 0.5 * g.radius()) break;
    const double y = lap_phi[i] + rb[i] * std::pow(phi[i], p);
    num += w0[i] * phi[i] * y;
    den += w0[i] * phi[i] * phi[i];
  }
  const double omega_c = num / den;

  NormalizedSolution out;
  out.profile = real_field(init.grid, phi);
  out.mass_target = c;
  out.omega_c = omega_c;
  out.energy_value = E;
  out.lagrange_residual = stationary_residual(out.profile, params, omega_c);
  out.iterations = iters;
  return out;
}

std::vector<std::pair<double, double>> dilation_scan(const RadialField& phi,
                                                     const ModelParams& params,
                                                     const std::vector<double>& mus) {
  validate(params);
  if (!phi.finite()) throw std::invalid_argument("dilation_scan: non-finite field");
  const Exponents e = critical_exponents(params);
  const double kappa = 0.5 * params.N * (params.p - e.p_mass_critical);
  const double kin = grad_norm_sq(phi);
  const double pot = integrate_weighted(
      *phi.grid, phi.values.cwiseAbs().array().pow(params.p + 1.0).matrix(), params.b);
  std::vector<std::pair<double, double>> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    if (!(mu > 0.0)) throw std::domain_error("dilation_scan: mu must be positive");
    out.emplace_back(mu, mu * mu * 0.5 * kin -
                             std::pow(mu, 2.0 + kappa) * pot / (params.p + 1.0));
  }
  return out;
}

CoercivityCheck coercivity_bound_check(const RadialField& phi, const ModelParams& params,
                                       double gn_constant, double c_ref) {
  validate(params);
  if (classify_regime(params) != Regime::MassSubcritical)
    throw std::domain_error("coercivity_bound_check: mass-subcritical regime required");
  const RadialGrid& g = *phi.grid;
  const double p = params.p, b = params.b, N = params.N;
  const double mass = integrate_weighted(g, phi.values.cwiseAbs2(), 0.0);
  if (mass > c_ref * (1.0 + 1e-9))
    throw std::invalid_argument("coercivity_bound_check: mass exceeds the calibration level");
  const double kin = grad_norm_sq(phi);
  const double pot = integrate_weighted(
      g, phi.values.cwiseAbs().array().pow(p + 1.0).matrix(), b);

  const double B = critical_exponents(params).B;  // gradient exponent, < 2 here
  const double mass_exp = (4.0 + 2.0 * b - (N - 2.0) * (p - 1.0)) / 2.0;
  const double A = gn_constant * std::pow(std::sqrt(c_ref), mass_exp) / (p + 1.0);
  // Young: A x^{B/2} <= x/4 + K with q = 2/B
  const double q = 2.0 / B;
  const double K =
      (1.0 - 1.0 / q) * std::pow(q / 4.0, 1.0 / (1.0 - q)) * std::pow(A, q / (q - 1.0));

  CoercivityCheck out;
  out.lhs = 0.5 * kin - pot / (p + 1.0);
  out.K = K;
  out.rhs = 0.25 * kin - K;
  out.holds = out.lhs >= out.rhs - 1e-12 * (std::abs(out.rhs) + 1.0);
  return out;
}

}  // namespace inls
