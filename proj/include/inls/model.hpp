#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace inls {

/// Exact fraction used for the mass-critical branch test when p (and b) were
/// supplied as decimal strings or ratios. Always normalized, den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long n, long long d);
  /// Accepts "a/b", integers and finite decimals ("2.5" -> 5/2).
  static std::optional<Rational> parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

/// Problem parameters (N, b, p, omega). omega is absent for mass-constrained
/// problems. p_exact/b_exact carry exact fractions when available so that the
/// mass-critical case can be detected without floating-point tolerance.
struct ModelParams {
  int N = 3;
  double b = 1.0;
  double p = 3.0;
  std::optional<double> omega;
  std::optional<Rational> p_exact;
  std::optional<Rational> b_exact;

  ModelParams() = default;
  ModelParams(int N_, double b_, double p_) : N(N_), b(b_), p(p_) {}
  ModelParams(int N_, double b_, double p_, double omega_)
      : N(N_), b(b_), p(p_), omega(omega_) {}

  ModelParams with_omega(double w) const {
    ModelParams q = *this;
    q.omega = w;
    return q;
  }
};

struct Exponents {
  double p_lower;           // 1 + 2b/(N-1): lower admissibility bound
  double p_mass_critical;   // 1 + (4+2b)/N
  double p_energy_critical; // 1 + (4+2b)/(N-2), +inf for N = 2
  double s_c;               // N/2 - (2+b)/(p-1)
  double B;                 // (N(p-1) - 2b)/2
};

enum class Regime {
  BelowAdmissible,
  MassSubcritical,
  MassCritical,
  Intercritical,
  EnergyCritical,
  AboveEnergyCritical,
};

const char* to_string(Regime r);

/// Throws std::domain_error unless N in [2,12], b > 0, p > 1.
void validate(const ModelParams& params);

bool admissible(const ModelParams& params);

Exponents critical_exponents(const ModelParams& params);

Regime classify_regime(const ModelParams& params);

/// True exactly at p = p_mass_critical: exact arithmetic when both p and b
/// carry fractions, otherwise |p - p_c| <= 1e-12 relative.
bool is_mass_critical(const ModelParams& params);

}  // namespace inls
