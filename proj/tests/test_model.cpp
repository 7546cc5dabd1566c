#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "inls/model.hpp"

using namespace inls;
using testing::rel_err;

TEST_CASE("critical exponents on the reference parameter sets") {
  Exponents e = critical_exponents(ModelParams(3, 1.0, 5.0));
  CHECK(e.p_lower == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.p_mass_critical == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.p_energy_critical == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(e.s_c == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(e.B == doctest::Approx(5.0).epsilon(1e-14));

  Exponents e2 = critical_exponents(ModelParams(2, 1.0, 4.0));
  CHECK(e2.p_lower == doctest::Approx(3.0));
  CHECK(e2.p_mass_critical == doctest::Approx(4.0));
  CHECK(std::isinf(e2.p_energy_critical));
  CHECK(e2.s_c == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(e2.B == doctest::Approx(2.0));

  Exponents e3 = critical_exponents(ModelParams(3, 1.0, 3.0));
  CHECK(std::abs(e3.s_c) < 1e-14);
  CHECK(e3.B == doctest::Approx(2.0));
}

TEST_CASE("parameter domain is enforced") {
  CHECK_THROWS_AS(critical_exponents(ModelParams(1, 1.0, 3.0)), std::domain_error);
  CHECK_THROWS_AS(critical_exponents(ModelParams(13, 1.0, 3.0)), std::domain_error);
  CHECK_THROWS_AS(critical_exponents(ModelParams(3, 0.0, 3.0)), std::domain_error);
  CHECK_THROWS_AS(critical_exponents(ModelParams(3, -1.0, 3.0)), std::domain_error);
  CHECK_THROWS_AS(critical_exponents(ModelParams(3, 1.0, 1.0)), std::domain_error);
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(ModelParams(3, 1.0, 2.5)) == Regime::MassSubcritical);
  CHECK(classify_regime(ModelParams(3, 1.0, 3.0)) == Regime::MassCritical);
  CHECK(classify_regime(ModelParams(3, 1.0, 1.5)) == Regime::BelowAdmissible);
  CHECK(classify_regime(ModelParams(3, 1.0, 2.0)) == Regime::BelowAdmissible);
  CHECK(classify_regime(ModelParams(3, 1.0, 4.0)) == Regime::Intercritical);
  CHECK(classify_regime(ModelParams(3, 1.0, 7.0)) == Regime::EnergyCritical);
  CHECK(classify_regime(ModelParams(3, 1.0, 8.0)) == Regime::AboveEnergyCritical);
  CHECK(classify_regime(ModelParams(2, 1.0, 50.0)) == Regime::Intercritical);
}

TEST_CASE("admissibility window") {
  CHECK(admissible(ModelParams(3, 1.0, 2.5)));
  CHECK(admissible(ModelParams(3, 1.0, 6.9)));
  CHECK_FALSE(admissible(ModelParams(3, 1.0, 7.0)));
  CHECK_FALSE(admissible(ModelParams(3, 1.0, 2.0)));
  CHECK(admissible(ModelParams(2, 1.0, 100.0)));  // no upper bound in 2d
}

TEST_CASE("rational parsing and exact mass-critical detection") {
  auto r = Rational::parse("7/2");
  REQUIRE(r.has_value());
  CHECK(r->num == 7);
  CHECK(r->den == 2);
  r = Rational::parse("2.5");
  REQUIRE(r.has_value());
  CHECK(r->num == 5);
  CHECK(r->den == 2);
  r = Rational::parse("-0.125");
  REQUIRE(r.has_value());
  CHECK(r->num == -1);
  CHECK(r->den == 8);
  CHECK(Rational::parse("3")->value() == 3.0);
  CHECK_FALSE(Rational::parse("abc").has_value());
  CHECK_FALSE(Rational::parse("1/0").has_value());

  ModelParams exact(3, 1.0, 3.0);
  exact.p_exact = Rational::parse("3");
  exact.b_exact = Rational::parse("1");
  CHECK(is_mass_critical(exact));

  ModelParams off = exact;
  off.p_exact = Rational::parse("2999999999/1000000000");
  off.p = off.p_exact->value();
  CHECK_FALSE(is_mass_critical(off));  // exact arithmetic, no tolerance

  // b = 1/4, N = 2: p_c = 1 + (4 + 1/2)/2 = 13/4
  ModelParams quarter(2, 0.25, 3.25);
  quarter.b_exact = Rational::parse("1/4");
  quarter.p_exact = Rational::parse("13/4");
  CHECK(is_mass_critical(quarter));

  // doubles fall back to the relative tolerance
  CHECK(is_mass_critical(ModelParams(3, 1.0, 3.0 * (1.0 + 1e-14))));
  CHECK_FALSE(is_mass_critical(ModelParams(3, 1.0, 3.0 + 1e-9)));
}

TEST_CASE("exponent ordering and regime coherence over randomized parameters") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> bdist(0.05, 6.0);
  std::uniform_real_distribution<double> pdist(1.01, 12.0);
  std::uniform_int_distribution<int> ndist(2, 12);
  for (int k = 0; k < 2000; ++k) {
    const int N = ndist(rng);
    const double b = bdist(rng);
    const double p = pdist(rng);
    ModelParams params(N, b, p);
    Exponents e = critical_exponents(params);
    CHECK(e.p_lower < e.p_mass_critical);
    CHECK(e.p_mass_critical < e.p_energy_critical);
    // B > 2 iff s_c > 0 iff p > p_c
    const bool sup = p > e.p_mass_critical * (1.0 + 1e-13);
    const bool sub = p < e.p_mass_critical * (1.0 - 1e-13);
    if (sup) {
      CHECK(e.B > 2.0);
      CHECK(e.s_c > 0.0);
    }
    if (sub) {
      CHECK(e.B < 2.0);
      CHECK(e.s_c < 0.0);
    }
    // the mass-subcritical window is empty unless N > 1 + b/2
    if (classify_regime(params) == Regime::MassSubcritical) CHECK(N > 1.0 + b / 2.0);
  }
}
