#pragma once

#include <utility>
#include <vector>

#include "inls/groundstate.hpp"

namespace inls {

/// Standing wave with prescribed mass c: profile, fitted frequency and the
/// stationary-equation residual after the fit.
struct NormalizedSolution {
  RadialField profile;
  double mass_target = 0;
  double omega_c = 0;
  double energy_value = 0;
  double lagrange_residual = 0;  // relative sup over nodes r <= R/2
  long iterations = 0;
};

/// Scaling construction: omega_c = (c ||Q1||^{-2})^{2(p-1)/(N(p_c-p))},
/// phi_c = omega_c^{(2+b)/(2(p-1))} Q1(sqrt(omega_c) x). Rejects p = p_c,
/// where the dilation preserves mass. Returned on the grid commensurate with
/// Q1's (so mass(phi_c) = c to round-off).
NormalizedSolution scaled_normalized_solution(double c, const ModelParams& params,
                                              const GroundState& Q1);

struct DescentOptions {
  double step0 = 0.1;
  double grad_tol = 1e-8;      // projected-gradient sup-norm (scaled)
  long max_iters = 100000;
  int reset_every = 20;        // accepted steps between step-size resets
};

/// Mass-constrained energy minimization in the mass-subcritical regime:
/// H^1-preconditioned projected descent with monotone energy decrease.
/// init must be nonzero; every iterate is rescaled to ||phi||^2 = c.
NormalizedSolution minimize_mass_constrained(double c, const ModelParams& params,
                                             const RadialField& init,
                                             const DescentOptions& opts = {});

/// Energies along the L^2-invariant dilation phi_mu = mu^{N/2} phi(mu x),
/// evaluated analytically from one report:
///   E(phi_mu) = mu^2 kinetic/2 - mu^{2+kappa} potential/(p+1),
///   kappa = N(p - p_c)/2.
std::vector<std::pair<double, double>> dilation_scan(const RadialField& phi,
                                                     const ModelParams& params,
                                                     const std::vector<double>& mus);

struct CoercivityCheck {
  double lhs = 0;   // E(phi)
  double rhs = 0;   // ||grad phi||^2 / 4 - K
  double K = 0;
  bool holds = false;
};

/// Checks E(phi) >= ||grad phi||^2/4 - K with K from the Gagliardo-Nirenberg
/// bound (constant gn_constant, calibrated at the ground state) and the Young
/// split, at mass level c_ref >= mass(phi). Mass-subcritical only.
CoercivityCheck coercivity_bound_check(const RadialField& phi, const ModelParams& params,
                                       double gn_constant, double c_ref);

}  // namespace inls
