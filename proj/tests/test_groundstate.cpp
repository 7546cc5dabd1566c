#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "inls/groundstate.hpp"
#include "shooting_oracle.hpp"

using namespace inls;
using testing::cached_solve;
using testing::rel_err;

TEST_CASE("frozen golden values, RK4 oracle, and the solver agree") {
  // The oracle is an independent fixed-step RK4 shooting; at h = 1e-4 its
  // values carry ~1e-9 error, far below the comparison tolerances.
  oracle::ProfileValues ov = oracle::solve(3, 1.0, 2.5, 1.0, 1e-4, 30.0);
  CHECK(rel_err(ov.q0, testing::kGolden_3_1_25.q0) < 1e-7);
  CHECK(rel_err(ov.mass, testing::kGolden_3_1_25.mass) < 1e-7);
  CHECK(rel_err(ov.potential, testing::kGolden_3_1_25.potential) < 1e-7);
  CHECK(rel_err(ov.action_d, testing::kGolden_3_1_25.d) < 1e-7);

  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 16384);
  FunctionalReport r = Q.functionals();
  CHECK(rel_err(Q.center_value, testing::kGolden_3_1_25.q0) < 1e-4);
  CHECK(rel_err(r.mass, testing::kGolden_3_1_25.mass) < 1e-4);
  CHECK(rel_err(r.kinetic, testing::kGolden_3_1_25.kinetic) < 1e-4);
  CHECK(rel_err(r.potential, testing::kGolden_3_1_25.potential) < 1e-4);
  CHECK(rel_err(Q.action_value, testing::kGolden_3_1_25.d) < 1e-4);

  const GroundState& Q4 = cached_solve(3, 1.0, 4.0, 1.0, 12.0, 16384);
  CHECK(rel_err(Q4.center_value, testing::kGolden_3_1_4.q0) < 1e-4);
  CHECK(rel_err(Q4.functionals().mass, testing::kGolden_3_1_4.mass) < 1e-4);
  CHECK(rel_err(Q4.action_value, testing::kGolden_3_1_4.d) < 1e-4);

  const GroundState& Q2 = cached_solve(2, 1.0, 3.5, 1.0, 12.0, 16384);
  CHECK(rel_err(Q2.center_value, testing::kGolden_2_1_35.q0) < 1e-4);
  CHECK(rel_err(Q2.functionals().mass, testing::kGolden_2_1_35.mass) < 1e-4);
  CHECK(rel_err(Q2.action_value, testing::kGolden_2_1_35.d) < 1e-4);
}

TEST_CASE("profile shape: positive, interior peak, monotone decay beyond it") {
  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 16384);
  Eigen::VectorXd v = Q.profile.values.real();
  CHECK(v.minCoeff() > 0.0);
  // the r^b forcing vanishes at the origin, so the profile rises first
  CHECK(Q.peak_radius > 0.1);
  CHECK(rel_err(Q.peak_radius, 0.764398813249618) < 1e-3);  // oracle value
  int peak_idx = 0;
  v.maxCoeff(&peak_idx);
  for (int i = peak_idx + 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
}

TEST_CASE("stationary identities close on the computed profile") {
  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 16384);
  for (double res : Q.pohozaev) CHECK(res <= 1e-6);
  FunctionalReport r = Q.functionals();
  CHECK(std::abs(r.nehari) <= 1e-8 * r.potential);
  CHECK(Q.residual <= 1e-3);
  CHECK(std::abs(Q.alpha_proj - 1.0) < 1e-4);
  CHECK(std::abs(Q.mu_proj - 1.0) < 1e-4);

  // off the solution manifold the identities fail distinctly
  RadialField bumped(Q.profile.grid, (1.1 * Q.profile.values).eval());
  auto res = pohozaev_residuals(bumped, Q.params);
  CHECK(res[1] >= 1e-2);
  // virial(Q) = 0 is precisely the fourth identity
  CHECK(std::abs(r.virial) <= 1e-6 * r.kinetic);
}

TEST_CASE("solver rejects frequencies without solutions and bad params") {
  auto grid = make_grid(3, 12.0, 1024);
  CHECK_THROWS_AS(solve_profile_shooting(ModelParams(3, 1.0, 2.5, -1.0), grid),
                  std::domain_error);
  CHECK_THROWS_AS(solve_profile_shooting(ModelParams(3, 1.0, 2.5, 0.0), grid),
                  std::domain_error);
  CHECK_THROWS_AS(solve_profile_shooting(ModelParams(3, 1.0, 8.0, 1.0), grid),
                  std::domain_error);  // above the admissible window
}

TEST_CASE("Nehari projection: factor, fixed point, homogeneity") {
  auto grid = make_grid(3, 12.0, 4096);
  ModelParams params(3, 1.0, 3.0, 1.0);
  RadialField u = make_field(grid, [](double r) { return std::exp(-r * r / 2.0); });
  auto [lambda, proj] = nehari_project(u, params);
  CHECK(rel_err(lambda, 2.9769553) < 1e-5);
  CHECK(std::abs(report(proj, params).nehari) <=
        1e-12 * report(proj, params).potential);

  const GroundState& Q = cached_solve(3, 1.0, 3.0, 1.0, 12.0, 16384);
  auto [lq, pq] = nehari_project(Q.profile, Q.params);
  CHECK(std::abs(lq - 1.0) <= 1e-8);

  // p = 3: scaling 3Q gives lambda = ((9 Pot)/(27 Pot))^{1/2} = 1/sqrt(3)
  RadialField tq(Q.profile.grid, (3.0 * Q.profile.values).eval());
  auto [l3, p3] = nehari_project(tq, Q.params);
  CHECK(rel_err(l3, 1.0 / std::sqrt(3.0)) < 1e-10);

  // lambda < 1 iff the Nehari functional is negative
  CHECK(report(tq, Q.params).nehari < 0.0);
  CHECK(l3 < 1.0);

  RadialField zero(grid, Eigen::VectorXcd::Zero(grid->size()));
  CHECK_THROWS_AS(nehari_project(zero, params), std::invalid_argument);
}

TEST_CASE("frequency rescaling agrees with a direct solve") {
  const GroundState& Q1 = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 16384);
  const GroundState& Q4 = cached_solve(3, 1.0, 2.5, 4.0, 12.0, 16384);
  GroundState Q4r = rescale_omega(Q1, 4.0, Q4.profile.grid);
  const double sup =
      (Q4.profile.values - Q4r.profile.values).cwiseAbs().maxCoeff() /
      Q4.profile.values.cwiseAbs().maxCoeff();
  CHECK(sup < 1e-5);
  CHECK(rel_err(Q4.center_value, 4.0 * Q1.center_value) < 1e-4);
  for (double res : Q4r.pohozaev) CHECK(res <= 1e-6);
  CHECK(Q4r.residual <= 1e-3);

  // identity dilation reproduces the grid samples
  GroundState Qid = rescale_omega(Q1, 1.0, Q1.profile.grid);
  CHECK((Qid.profile.values - Q1.profile.values).cwiseAbs().maxCoeff() <
        1e-10 * Q1.center_value);

  // mass scaling: ||Q_omega||^2 = omega^{N(p_c-p)/(2(p-1))} ||Q_1||^2,
  // exponent 1/2 at (3,1,2.5); exact on the commensurate grid
  GroundState Qc = rescale_omega(Q1, 4.0);
  CHECK(rel_err(report(Qc.profile, Qc.params).mass,
                2.0 * report(Q1.profile, Q1.params).mass) < 1e-12);

  // a grid too coarse for the compressed profile is rejected
  CHECK_THROWS_AS(rescale_omega(Q1, 400.0, make_grid(3, 12.0, 1024)),
                  std::domain_error);
}

TEST_CASE("action level: closed form, positivity, convexity") {
  const GroundState& Q1 = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 16384);
  ModelParams params(3, 1.0, 2.5);
  CHECK(rel_err(action_level_sigma(params), 1.5) < 1e-14);

  auto [dn1, dc1] = action_level_d(params.with_omega(1.0), Q1);
  CHECK(rel_err(dn1, dc1) < 1e-6);
  // at omega = 1 the level is S_1(Q_1) = (p-1)/(2(p+1)) potential
  FunctionalReport r1 = report(Q1.profile, Q1.params);
  CHECK(rel_err(dn1, (params.p - 1.0) / (2.0 * (params.p + 1.0)) * r1.potential) <
        1e-10);
  CHECK(rel_err(dn1, testing::kGolden_3_1_25.d) < 1e-4);

  // log-spaced positivity sweep
  for (double w : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
    auto [dn, dc] = action_level_d(params.with_omega(w), Q1);
    CHECK(dn > 0.0);
    CHECK(rel_err(dn, dc) < 1e-6);
  }

  // discrete convexity on a uniform frequency grid (p < p_c here)
  double d_prev = 0, d_mid = 0;
  bool first = true, second = false;
  for (double w : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    auto [dn, dc] = action_level_d(params.with_omega(w), Q1);
    if (!first && second) {
      // second difference of the last three values
      CHECK(dn - 2.0 * d_mid + d_prev > 0.0);
    }
    d_prev = d_mid;
    d_mid = dn;
    if (first)
      first = false;
    else
      second = true;
  }
}

TEST_CASE("ground state minimizes the action on the Nehari set (empirical)") {
  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 4096);
  const double d = Q.action_value;
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> amp(0.3, 2.0);
  for (int k = 0; k < 50; ++k) {
    RadialField w = perturbation_field(Q.profile.grid, 900 + k);
    w.values *= amp(rng);
    auto [lam, proj] = nehari_project(w, Q.params);
    CHECK(report(proj, Q.params).action >= d * (1.0 - 1e-8));
  }
}
