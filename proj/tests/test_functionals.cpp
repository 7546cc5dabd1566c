#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "inls/functionals.hpp"

using namespace inls;
using testing::cached_solve;
using testing::rel_err;

namespace {

// u = e^{-r^2/2} at (N,b,p,omega) = (3,1,3,1): every integral is known in
// closed form.
struct GaussianFixture {
  GridPtr grid = make_grid(3, 12.0, 4096);
  ModelParams params{3, 1.0, 3.0, 1.0};
  RadialField u = make_field(grid, [](double r) { return std::exp(-r * r / 2.0); });
  double mass = std::pow(M_PI, 1.5);
  double kinetic = 1.5 * std::pow(M_PI, 1.5);
  double potential = M_PI / 2.0;
};

}  // namespace

TEST_CASE("report reproduces the Gaussian closed forms") {
  GaussianFixture f;
  FunctionalReport r = report(f.u, f.params);
  CHECK(rel_err(r.mass, f.mass) < 1e-5);
  CHECK(rel_err(r.kinetic, f.kinetic) < 1e-5);
  CHECK(rel_err(r.potential, f.potential) < 1e-5);
  CHECK(rel_err(r.energy, 0.75 * std::pow(M_PI, 1.5) - M_PI / 8.0) < 1e-5);
  CHECK(rel_err(r.action, 6.5677110) < 1e-6);
  CHECK(rel_err(r.nehari, 12.3500237) < 1e-6);
  CHECK(rel_err(r.virial, 7.5670938) < 1e-6);

  // the assembled identities hold to round-off on the computed scalars
  CHECK(std::abs(r.action - (r.energy + 0.5 * r.mass)) <= 1e-12 * std::abs(r.action));
  CHECK(std::abs(r.nehari - (2.0 * r.action - 0.5 * r.potential)) <=
        1e-12 * std::abs(r.nehari));  // (p-1)/(p+1) = 1/2 at p = 3
  CHECK(std::abs(r.virial - (r.kinetic - 0.5 * r.potential)) <=
        1e-12 * std::abs(r.virial));  // B/(p+1) = 1/2 at (3,1,3)

  RadialField zero(f.grid, Eigen::VectorXcd::Zero(f.grid->size()));
  FunctionalReport rz = report(zero, f.params);
  CHECK(rz.mass == 0.0);
  CHECK(rz.kinetic == 0.0);
  CHECK(rz.potential == 0.0);
  CHECK(rz.energy == 0.0);
}

TEST_CASE("report validates its inputs") {
  GaussianFixture f;
  ModelParams no_omega(3, 1.0, 3.0);
  CHECK_THROWS_AS(report(f.u, no_omega), std::invalid_argument);
  ModelParams bad(3, 1.0, 1.5, 1.0);  // below the admissible window
  CHECK_THROWS_AS(report(f.u, bad), std::invalid_argument);
  RadialField nan = f.u;
  nan.values[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(report(nan, f.params), std::invalid_argument);
}

TEST_CASE("gauge invariance of every reported scalar") {
  GaussianFixture f;
  RadialField w = f.u;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
  FunctionalReport r0 = report(w, f.params);
  for (int k = 0; k < 5; ++k) {
    const double theta = th(rng);
    RadialField rot(w.grid,
                    (std::complex<double>(std::cos(theta), std::sin(theta)) * w.values)
                        .eval());
    FunctionalReport r = report(rot, f.params);
    CHECK(rel_err(r.mass, r0.mass) < 1e-14);
    CHECK(rel_err(r.kinetic, r0.kinetic) < 1e-14);
    CHECK(rel_err(r.potential, r0.potential) < 1e-14);
    CHECK(rel_err(r.variance, r0.variance) < 1e-14);
  }
}

TEST_CASE("scaling-derivative functional: K_{1,-2/N} = (2/N) P and edge cases") {
  GaussianFixture f;
  FunctionalReport r = report(f.u, f.params);
  const double kac = kac_functional(f.u, f.params, 1.0, -2.0 / 3.0);
  CHECK(rel_err(kac, 2.0 / 3.0 * r.virial) < 1e-12);
  CHECK(rel_err(kac, 5.0447292) < 1e-6);  // (2/3) * 7.5670938
  CHECK(kac_functional(f.u, f.params, 0.0, 0.0) == 0.0);
  RadialField zero(f.grid, Eigen::VectorXcd::Zero(f.grid->size()));
  CHECK(kac_functional(zero, f.params, 1.3, -0.7) == 0.0);
}

TEST_CASE("weighted Gagliardo-Nirenberg ratio: value and invariances") {
  GaussianFixture f;
  // exponents are 2 and 2 at (3,1,3): ratio = Pot/(K*M) = 1/(3 pi^2)
  CHECK(rel_err(gn_ratio(f.u, f.params), 1.0 / (3.0 * M_PI * M_PI)) < 1e-4);

  // amplitude invariance
  RadialField big(f.grid, (7.3 * f.u.values).eval());
  CHECK(rel_err(gn_ratio(big, f.params), gn_ratio(f.u, f.params)) < 1e-12);

  // L^2-preserving dilation on the commensurate grid is exact
  const double mu = 1.7;
  auto gmu = make_grid(3, 12.0 / mu, 4096);
  RadialField umu(gmu, (std::pow(mu, 1.5) * f.u.values).eval());
  CHECK(rel_err(gn_ratio(umu, f.params), gn_ratio(f.u, f.params)) < 1e-12);

  RadialField zero(f.grid, Eigen::VectorXcd::Zero(f.grid->size()));
  CHECK_THROWS_AS(gn_ratio(zero, f.params), std::invalid_argument);
}

TEST_CASE("ground state empirically dominates the GN ratio") {
  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 4096);
  const double sharp = gn_ratio(Q.profile, Q.params);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> amp(0.1, 3.0);
  for (int k = 0; k < 100; ++k) {
    RadialField w = perturbation_field(Q.profile.grid, 5000 + k);
    w.values *= amp(rng);
    CHECK(gn_ratio(w, Q.params) <= sharp * (1.0 + 1e-3));
  }
  // the ratio is invariant along the frequency family
  const GroundState& Q4 = cached_solve(3, 1.0, 2.5, 4.0, 6.0, 4096);
  CHECK(rel_err(gn_ratio(Q4.profile, Q4.params), sharp) < 1e-4);
}

TEST_CASE("phase-optimized H1 distance") {
  GaussianFixture f;
  RadialField phi = f.u;
  const std::complex<double> rot(std::cos(M_PI / 3.0), std::sin(M_PI / 3.0));
  RadialField u(phi.grid, (rot * phi.values).eval());
  CHECK(phase_optimized_h1_distance(u, phi) < 1e-6);

  RadialField twice(phi.grid, (2.0 * phi.values).eval());
  CHECK(rel_err(phase_optimized_h1_distance(twice, phi), std::sqrt(h1_norm_sq(phi))) <
        1e-12);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
  RadialField w = perturbation_field(f.grid, 31);
  const double d0 = phase_optimized_h1_distance(w, phi);
  for (int k = 0; k < 5; ++k) {
    const double theta = th(rng);
    RadialField wr(w.grid,
                   (std::complex<double>(std::cos(theta), std::sin(theta)) * w.values)
                       .eval());
    CHECK(rel_err(phase_optimized_h1_distance(wr, phi), d0) < 1e-12);
  }
}

TEST_CASE("variance reliability flag tracks the boundary decay") {
  GaussianFixture f;
  CHECK(report(f.u, f.params).variance_reliable);  // e^{-72} at the boundary
  const GroundState& Q = cached_solve(3, 1.0, 2.5, 1.0, 12.0, 4096);
  // exponential tail only reaches ~1e-5 of the peak at R = 12
  CHECK_FALSE(Q.functionals().variance_reliable);
  const GroundState& Qfar = cached_solve(3, 1.0, 2.5, 1.0, 24.0, 4096);
  CHECK(Qfar.functionals().variance_reliable);
}
