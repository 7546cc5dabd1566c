#pragma once

#include "inls/grid.hpp"
#include "inls/model.hpp"

namespace inls {

/// All conserved/variational scalars of a field in one quadrature pass.
///   energy  E      = kinetic/2 - potential/(p+1)
///   action  S      = E + (omega/2) mass
///   nehari  I      = kinetic + omega*mass - potential
///   virial  P      = kinetic - B/(p+1) potential
///   variance       = int |x|^2 |u|^2
struct FunctionalReport {
  double mass = 0;
  double kinetic = 0;
  double potential = 0;  // int |x|^b |u|^{p+1}
  double energy = 0;
  double action = 0;
  double nehari = 0;
  double virial = 0;
  double variance = 0;
  bool variance_reliable = true;  // |u(R)| <= 1e-8 max|u|
  double boundary_abs = 0;
};

/// Requires admissible params with omega present and a finite field.
FunctionalReport report(const RadialField& u, const ModelParams& params);

/// Derivative of the action along the two-parameter scaling
/// lambda^a u(x/lambda^c) at lambda = 1:
///   (2a+Nc)/2 ||u||^2 + (2a+(N-2)c)/2 ||grad u||^2
///   - (a + c(b+N)/(1+p)) int |x|^b |u|^{p+1}.
/// K_{1,-2/N} = (2/N) P.
double kac_functional(const RadialField& u, const ModelParams& params, double a,
                      double c);

/// Weighted Gagliardo-Nirenberg ratio
///   potential / (||grad u||^{(N(p-1)-2b)/2} ||u||^{(4+2b-(N-2)(p-1))/2}),
/// exponents on the L^2 norms themselves. Invariant under u -> alpha u and
/// under L^2-preserving dilation.
double gn_ratio(const RadialField& u, const ModelParams& params);

/// inf_theta ||u - e^{i theta} phi||_{H^1}
///   = sqrt(||u||_{H^1}^2 + ||phi||_{H^1}^2 - 2 |<u, phi>_{H^1}|).
double phase_optimized_h1_distance(const RadialField& u, const RadialField& phi);

}  // namespace inls
