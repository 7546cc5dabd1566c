#include "inls/dynamics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fast_pow.hpp"

namespace inls {

namespace {

using detail::FastPow;
using Cplx = std::complex<double>;

struct Monitors {
  double mass, kinetic, potential, virial, variance, energy;
  bool variance_reliable;
};

Monitors monitors_of(const RadialField& u, const ModelParams& params) {
  const RadialGrid& g = *u.grid;
  const double p = params.p, b = params.b;
  const double B = critical_exponents(params).B;
  const FastPow pw(p + 1.0);
  Eigen::VectorXd abs2 = u.values.cwiseAbs2();
  Eigen::VectorXd absp1(abs2.size());
  for (int i = 0; i < abs2.size(); ++i) absp1[i] = pw(std::sqrt(abs2[i]));
  Monitors m;
  m.mass = integrate_weighted(g, abs2, 0.0);
  m.kinetic = grad_norm_sq(u);
  m.potential = integrate_weighted(g, absp1, b);
  m.variance = integrate_weighted(g, abs2, 2.0);
  m.energy = 0.5 * m.kinetic - m.potential / (p + 1.0);
  m.virial = m.kinetic - B / (p + 1.0) * m.potential;
  m.variance_reliable = u.boundary_abs() <= 1e-8 * u.values.cwiseAbs().maxCoeff();
  return m;
}

// Crank-Nicolson with the mass-conserving midpoint nonlinearity
//   i(u+ - u)/dt + Delta (u+ + u)/2 = -r^b (|u+|^{p-1}+|u|^{p-1})/2 (u+ + u)/2,
// solved by fixed-point iteration on the frozen-coefficient linear system.
class Stepper {
 public:
  Stepper(const RadialGrid& g, const ModelParams& params)
      : g_(g),
        lap_(laplacian_tridiag(g)),
        pm1_(params.p - 1.0),
        rb_(g.size()),
        lo_(g.size()),
        di_(g.size()),
        up_(g.size()),
        rhs_(g.size()),
        gmid_(g.size()) {
    FastPow pb(params.b);
    for (int i = 0; i < g.size(); ++i) rb_[i] = pb(g.nodes()[i]);
  }

  bool try_step(const Eigen::VectorXcd& u, double dt, double fp_tol, int fp_max,
                Eigen::VectorXcd& out) const {
    const int M = g_.size();
    const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
    Eigen::VectorXcd up = u;
    Eigen::VectorXd amp_u(M);
    for (int i = 0; i < M; ++i) amp_u[i] = pm1_(std::abs(u[i]));
    const Cplx idt2(0.0, 0.5 * dt);
    for (int it = 0; it < fp_max; ++it) {
      for (int i = 0; i < M; ++i)
        gmid_[i] = rb_[i] * 0.5 * (amp_u[i] + pm1_(std::abs(up[i])));
      // A = I - i dt/2 (Lap + diag(g)), rhs = (I + i dt/2 (Lap + diag(g))) u
      for (int i = 0; i < M; ++i) {
        const double d = lap_.diag[i] + gmid_[i];
        di_[i] = 1.0 - idt2 * d;
        lo_[i] = -idt2 * lap_.lower[i];
        up_[i] = -idt2 * lap_.upper[i];
        Cplx r = u[i] + idt2 * (d * u[i]);
        if (i > 0) r += idt2 * (lap_.lower[i] * u[i - 1]);
        if (i + 1 < M) r += idt2 * (lap_.upper[i] * u[i + 1]);
        rhs_[i] = r;
      }
      Eigen::VectorXcd next = tridiag_solve(lo_, di_, up_, rhs_);
      const double delta = (next - up).cwiseAbs().maxCoeff();
      up = std::move(next);
      if (delta <= fp_tol * scale) {
        out = std::move(up);
        return out.allFinite();
      }
    }
    return false;
  }

 private:
  const RadialGrid& g_;
  TridiagOperator lap_;
  FastPow pm1_;
  Eigen::VectorXd rb_;
  mutable Eigen::VectorXcd lo_, di_, up_, rhs_;
  mutable Eigen::VectorXd gmid_;
};

// One accepted step with internal dt control; dt_cap additionally limits this
// step (sample alignment) without touching the adaptive nominal dt. e_cur
// carries the energy of st.field across calls.
//
// Fixed-point failures reject the attempt and retry at dt/2. An
// energy-jump violation keeps the (valid) step and halves dt for subsequent
// steps, but only while dt is above the resolution-collapse floor; past that
// the scheme cannot follow the solution anyway and the gradient detector is
// left to mature.
void advance(EvolutionState& st, const Stepper& stepper, const ModelParams& params,
             const EvolveOptions& opts, double dt_cap, int& calm, double& e_cur) {
  const double e_scale = std::max(std::abs(st.energy0), 1.0);
  const double energy_floor =
      opts.dt_max * std::pow(0.5, static_cast<double>(opts.energy_halving_cap));
  while (st.status == EvolutionStatus::Running) {
    const double dt_eff = std::min(st.dt, dt_cap);
    Eigen::VectorXcd next;
    const bool ok =
        stepper.try_step(st.field.values, dt_eff, opts.fp_tol, opts.fp_max, next);
    if (!ok) {
      st.dt *= 0.5;
      ++st.halvings;
      calm = 0;
      if (st.dt < opts.dt_min) st.status = EvolutionStatus::StepCollapse;
      continue;
    }
    RadialField cand(st.field.grid, std::move(next));
    Monitors m = monitors_of(cand, params);
    st.field = std::move(cand);
    st.t += dt_eff;
    const double jump = std::abs(m.energy - e_cur);
    e_cur = m.energy;
    if (jump > opts.energy_jump_tol * e_scale && st.dt > energy_floor) {
      st.dt *= 0.5;
      ++st.halvings;
      calm = 0;
    } else if (++calm >= opts.calm_steps) {
      st.dt = std::min(2.0 * st.dt, opts.dt_max);
      calm = 0;
    }
    if (m.kinetic >= opts.blowup_grad_factor * st.grad0 &&
        st.halvings >= opts.blowup_min_halvings)
      st.status = EvolutionStatus::BlowupDetected;
    return;
  }
}

}  // namespace

const char* to_string(EvolutionStatus s) {
  switch (s) {
    case EvolutionStatus::Running: return "Running";
    case EvolutionStatus::Finished: return "Finished";
    case EvolutionStatus::BlowupDetected: return "BlowupDetected";
    case EvolutionStatus::StepCollapse: return "StepCollapse";
  }
  return "?";
}

const char* to_string(WellClass c) {
  switch (c) {
    case WellClass::KPlus: return "KPlus";
    case WellClass::KMinus: return "KMinus";
    case WellClass::AboveThreshold: return "AboveThreshold";
  }
  return "?";
}

Classification classify_initial_data(const RadialField& u0, const ModelParams& params,
                                     double d_value) {
  if (!params.omega || !(*params.omega > 0.0))
    throw std::invalid_argument("classify_initial_data: omega > 0 required");
  FunctionalReport r = report(u0, params);
  Classification c;
  c.s_value = r.action;
  c.p_value = r.virial;
  c.d_value = d_value;
  if (c.s_value >= d_value)
    c.tag = WellClass::AboveThreshold;
  else
    c.tag = c.p_value >= 0.0 ? WellClass::KPlus : WellClass::KMinus;
  return c;
}

EvolutionState make_state(RadialField u0, const ModelParams& params, double dt0) {
  if (!u0.finite()) throw std::invalid_argument("make_state: non-finite initial data");
  EvolutionState st;
  Monitors m = monitors_of(u0, params);
  st.field = std::move(u0);
  st.t = 0.0;
  st.dt = dt0;
  st.mass0 = m.mass;
  st.energy0 = m.energy;
  st.grad0 = m.kinetic;
  st.status = EvolutionStatus::Running;
  return st;
}

EvolutionState step(EvolutionState state, const ModelParams& params,
                    const EvolveOptions& opts) {
  if (state.status != EvolutionStatus::Running)
    throw std::logic_error("step: state is not running");
  Stepper stepper(*state.field.grid, params);
  int calm = 0;
  double e_cur = monitors_of(state.field, params).energy;
  advance(state, stepper, params, opts, state.dt, calm, e_cur);
  return state;
}

Trajectory evolve(const RadialField& u0, const ModelParams& params, double T,
                  double sample_dt, const EvolveOptions& opts,
                  const RadialField* reference) {
  validate(params);
  if (!(T > 0.0) || !(sample_dt > 0.0))
    throw std::domain_error("evolve: T and sample_dt must be positive");
  EvolutionState st = make_state(u0, params, std::min(opts.dt0, sample_dt));
  Stepper stepper(*u0.grid, params);

  Trajectory traj;
  traj.sample_dt = sample_dt;
  auto record = [&](const EvolutionState& s) {
    Monitors m = monitors_of(s.field, params);
    traj.times.push_back(s.t);
    traj.mass.push_back(m.mass);
    traj.energy.push_back(m.energy);
    traj.kinetic.push_back(m.kinetic);
    traj.potential.push_back(m.potential);
    traj.virial.push_back(m.virial);
    traj.variance.push_back(m.variance);
    traj.grad_norm.push_back(std::sqrt(m.kinetic));
    traj.variance_reliable.push_back(m.variance_reliable);
    traj.dist_to_ref.push_back(
        reference ? phase_optimized_h1_distance(s.field, *reference) : 0.0);
  };
  record(st);

  int calm = 0;
  double e_cur = st.energy0;
  double next_sample = sample_dt;
  const double t_eps = 1e-12 * std::max(1.0, T);
  while (st.status == EvolutionStatus::Running && st.t < T - t_eps) {
    const double dt_cap =
        std::min({opts.dt_max, next_sample - st.t, T - st.t + t_eps});
    advance(st, stepper, params, opts, dt_cap, calm, e_cur);
    if (st.status == EvolutionStatus::Running ||
        st.status == EvolutionStatus::BlowupDetected) {
      if (st.t >= next_sample - t_eps) {
        record(st);
        next_sample += sample_dt;
      }
    }
  }
  if (st.status == EvolutionStatus::Running) st.status = EvolutionStatus::Finished;
  traj.final_status = st.status;
  if (st.status != EvolutionStatus::Finished) traj.blowup_time = st.t;
  return traj;
}

double virial_consistency(const Trajectory& traj) {
  const size_t n = traj.samples();
  if (n < 5) throw std::invalid_argument("virial_consistency: need at least 5 samples");
  for (bool ok : traj.variance_reliable)
    if (!ok)
      throw std::invalid_argument(
          "virial_consistency: variance unreliable on a sample (field not "
          "decayed at the grid boundary)");
  const double dt = traj.sample_dt;
  double pmax = 0.0, kmax = 0.0;
  for (size_t k = 0; k < n; ++k) {
    pmax = std::max(pmax, std::abs(traj.virial[k]));
    kmax = std::max(kmax, traj.kinetic[k]);
  }
  const double floor = 1e-6 * 8.0 * std::max(pmax, kmax);
  double worst = 0.0;
  for (size_t k = 1; k + 1 < n; ++k) {
    const double vpp =
        (traj.variance[k + 1] - 2.0 * traj.variance[k] + traj.variance[k - 1]) /
        (dt * dt);
    const double rhs = 8.0 * traj.virial[k];
    worst = std::max(worst, std::abs(vpp - rhs) / std::max(std::abs(rhs), floor));
  }
  return worst;
}

RadialField instability_family(const GroundState& Q, double lambda) {
  GridPtr g = make_grid(Q.params.N, Q.profile.grid->radius() / std::exp(lambda),
                        Q.profile.grid->size());
  const double amp = std::exp(0.5 * Q.params.N * lambda);
  return RadialField(g, (amp * Q.profile.values).eval());
}

RadialField instability_family(const GroundState& Q, double lambda, const GridPtr& grid) {
  const double s = std::exp(lambda);
  if (s * std::sqrt(Q.omega) * grid->spacing() > 0.1)
    throw std::domain_error("instability_family: grid too coarse for the dilation");
  return sample_profile(Q, grid, std::exp(0.5 * Q.params.N * lambda), s);
}

double action_along_instability(const GroundState& Q, double lambda) {
  const FunctionalReport r = report(Q.profile, Q.params);
  const double B = critical_exponents(Q.params).B;
  return std::exp(2.0 * lambda) * 0.5 * r.kinetic + 0.5 * Q.omega * r.mass -
         std::exp(B * lambda) * r.potential / (Q.params.p + 1.0);
}

double action_derivative_closed_form(const GroundState& Q, double lambda) {
  const double N = Q.params.N, p = Q.params.p, b = Q.params.b;
  const double kin = report(Q.profile, Q.params).kinetic;
  const double expo = 0.5 * (N * p - (N + 4.0 + 2.0 * b));
  return std::exp(2.0 * lambda) * (1.0 - std::exp(lambda * expo)) * kin;
}

RadialField mass_critical_family(const GroundState& Q, double lambda) {
  if (!is_mass_critical(Q.params))
    throw std::domain_error("mass_critical_family: requires p = p_c");
  if (!(lambda >= 1.0))
    throw std::domain_error("mass_critical_family: lambda must be >= 1");
  GridPtr g = make_grid(Q.params.N, Q.profile.grid->radius() / lambda,
                        Q.profile.grid->size());
  const double amp = std::pow(lambda, 1.0 + Q.params.N / 2.0);
  return RadialField(g, (amp * Q.profile.values).eval());
}

RadialField mass_critical_family(const GroundState& Q, double lambda, const GridPtr& grid) {
  if (!is_mass_critical(Q.params))
    throw std::domain_error("mass_critical_family: requires p = p_c");
  if (!(lambda >= 1.0))
    throw std::domain_error("mass_critical_family: lambda must be >= 1");
  return sample_profile(Q, grid, std::pow(lambda, 1.0 + Q.params.N / 2.0), lambda);
}

RadialField perturbation_field(const GridPtr& grid, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Eigen::VectorXcd a(modes);
  for (int k = 0; k < modes; ++k) a[k] = Cplx(coef(rng), coef(rng));
  const double R = grid->radius();
  Eigen::VectorXcd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double r = grid->nodes()[i];
    Cplx s = 0.0;
    for (int k = 0; k < modes; ++k) s += a[k] * std::cos(k * M_PI * r / R);
    v[i] = s * std::exp(-r * r / (R * R));
  }
  return RadialField(grid, std::move(v));
}

StabilityResult stability_experiment(const GroundState& Q, double epsilon, double T,
                                     std::uint64_t seed, double sample_dt,
                                     const EvolveOptions& opts) {
  if (classify_regime(Q.params) != Regime::MassSubcritical)
    throw std::domain_error(
        "stability_experiment: orbital stability holds in the mass-subcritical "
        "regime only");
  if (epsilon < 0.0) throw std::domain_error("stability_experiment: epsilon < 0");
  RadialField u0 = Q.profile;
  if (epsilon > 0.0) {
    RadialField w = perturbation_field(Q.profile.grid, seed);
    const double wn = std::sqrt(h1_norm_sq(w));
    u0.values += (epsilon / wn) * w.values;
  }
  Trajectory traj = evolve(u0, Q.params, T, sample_dt, opts, &Q.profile);
  StabilityResult out;
  out.max_distance = 0.0;
  for (double d : traj.dist_to_ref) out.max_distance = std::max(out.max_distance, d);
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace inls
