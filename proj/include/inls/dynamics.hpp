#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inls/groundstate.hpp"

namespace inls {

enum class EvolutionStatus { Running, Finished, BlowupDetected, StepCollapse };
const char* to_string(EvolutionStatus s);

enum class WellClass { KPlus, KMinus, AboveThreshold };
const char* to_string(WellClass c);

/// Position of initial data relative to the potential well:
///   KPlus:  S_omega < d(omega) and P >= 0   (global existence)
///   KMinus: S_omega < d(omega) and P < 0    (blow-up with finite variance)
///   AboveThreshold: S_omega >= d(omega)
struct Classification {
  WellClass tag = WellClass::AboveThreshold;
  double s_value = 0;
  double p_value = 0;
  double d_value = 0;
};

Classification classify_initial_data(const RadialField& u0, const ModelParams& params,
                                     double d_value);

struct EvolveOptions {
  double dt0 = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1e-3;
  double fp_tol = 1e-12;  // fixed-point sup-norm tolerance
  int fp_max = 50;        // iterations before the step is retried at dt/2
  // A step whose relative energy jump exceeds this is kept, but dt halves.
  double energy_jump_tol = 1e-8;
  // The energy throttle stops halving below dt_max * 2^-energy_halving_cap;
  // past that resolution-collapse scale the run is in the detection regime
  // and only fixed-point failures shrink dt further.
  int energy_halving_cap = 10;
  int calm_steps = 100;  // accepted steps before dt doubles
  double blowup_grad_factor = 1e3;
  int blowup_min_halvings = 20;
};

/// One Crank-Nicolson state. Discrete mass is conserved to the fixed-point
/// tolerance by the midpoint form of the nonlinearity.
struct EvolutionState {
  RadialField field;
  double t = 0;
  double dt = 1e-3;  // nominal adaptive step
  double mass0 = 0;
  double energy0 = 0;
  double grad0 = 0;  // ||grad u0||^2, blow-up detector reference
  EvolutionStatus status = EvolutionStatus::Running;
  int halvings = 0;  // cumulative dt halvings
};

EvolutionState make_state(RadialField u0, const ModelParams& params, double dt0);

/// Advances one accepted step (retrying internally at smaller dt when the
/// fixed-point solve stalls or the energy jump exceeds tolerance).
EvolutionState step(EvolutionState state, const ModelParams& params,
                    const EvolveOptions& opts = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<double> mass, energy, kinetic, potential, virial, variance, grad_norm,
      dist_to_ref;
  std::vector<bool> variance_reliable;
  EvolutionStatus final_status = EvolutionStatus::Finished;
  std::optional<double> blowup_time;  // last resolved time before detection
  double sample_dt = 0;

  size_t samples() const { return times.size(); }
};

/// Evolves to t = T with adaptive dt, recording monitors every sample_dt.
/// dist_to_ref is the phase-optimized H^1 distance to `reference` when given.
Trajectory evolve(const RadialField& u0, const ModelParams& params, double T,
                  double sample_dt, const EvolveOptions& opts = {},
                  const RadialField* reference = nullptr);

/// max over interior samples of |second difference(V)/dt^2 - 8 P| / max(|8P|, eps).
/// Requires >= 5 samples with reliable variance throughout.
double virial_consistency(const Trajectory& traj);

/// L^2-isometric dilation phi^lambda(x) = e^{N lambda/2} Q(e^lambda x) on the
/// commensurate grid (exact discrete mass preservation). For lambda > 0 and
/// p > p_c this datum lies in K^- with S_omega below the ground-state level.
RadialField instability_family(const GroundState& Q, double lambda);
RadialField instability_family(const GroundState& Q, double lambda, const GridPtr& grid);

/// Action along the dilation and its closed-form derivative
/// e^{2 lambda}(1 - e^{lambda(Np-(N+4+2b))/2}) ||grad Q||^2 (valid since P(Q)=0).
double action_along_instability(const GroundState& Q, double lambda);
double action_derivative_closed_form(const GroundState& Q, double lambda);

/// Mass-critical deformation phi_n = lambda^{1+N/2} Q(lambda x), lambda > 1,
/// on the commensurate grid; requires p = p_c. Discrete scaling ratios
/// (mass lambda^2, kinetic lambda^4, potential lambda^{(N+2)(p+1)/2-b-N}) are
/// exact by construction and E(phi_n) < 0.
RadialField mass_critical_family(const GroundState& Q, double lambda);
RadialField mass_critical_family(const GroundState& Q, double lambda, const GridPtr& grid);

/// Smooth seeded radial perturbation: cosine series in r times e^{-r^2/R^2}.
RadialField perturbation_field(const GridPtr& grid, std::uint64_t seed, int modes = 8);

struct StabilityResult {
  double max_distance = 0;
  Trajectory trajectory;
};

/// Evolves u0 = Q + epsilon w/||w||_{H^1} to time T and returns the maximal
/// phase-optimized H^1 distance to Q over the samples.
StabilityResult stability_experiment(const GroundState& Q, double epsilon, double T,
                                     std::uint64_t seed, double sample_dt = 0.05,
                                     const EvolveOptions& opts = {});

}  // namespace inls
