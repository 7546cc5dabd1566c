#include "inls/model.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace inls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close_rel(double x, double y, double rtol) {
  return std::abs(x - y) <= rtol * std::max({std::abs(x), std::abs(y), 1.0});
}

}  // namespace

Rational Rational::make(long long n, long long d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational{n, d};
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  auto to_ll = [](std::string_view s, long long& out) -> bool {
    if (s.empty()) return false;
    char* end = nullptr;
    std::string tmp(s);
    errno = 0;
    long long v = std::strtoll(tmp.c_str(), &end, 10);
    if (errno != 0 || end != tmp.c_str() + tmp.size()) return false;
    out = v;
    return true;
  };
  if (slash != std::string_view::npos) {
    long long n = 0, d = 0;
    if (!to_ll(text.substr(0, slash), n) || !to_ll(text.substr(slash + 1), d) || d == 0)
      return std::nullopt;
    return Rational::make(n, d);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    long long n = 0;
    if (!to_ll(text, n)) return std::nullopt;
    return Rational::make(n, 1);
  }
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 12) return std::nullopt;  // not exactly representable here
  bool neg = !whole.empty() && whole[0] == '-';
  long long w = 0;
  if (!whole.empty() && whole != "-" && !to_ll(whole, w)) return std::nullopt;
  long long f = 0;
  if (!frac.empty() && !to_ll(frac, f)) return std::nullopt;
  if (f < 0) return std::nullopt;
  long long den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  long long num = (neg ? -1 : 1) * ((w < 0 ? -w : w) * den + f);
  return Rational::make(num, den);
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::BelowAdmissible: return "BelowAdmissible";
    case Regime::MassSubcritical: return "MassSubcritical";
    case Regime::MassCritical: return "MassCritical";
    case Regime::Intercritical: return "Intercritical";
    case Regime::EnergyCritical: return "EnergyCritical";
    case Regime::AboveEnergyCritical: return "AboveEnergyCritical";
  }
  return "?";
}

void validate(const ModelParams& params) {
  if (params.N < 2 || params.N > 12)
    throw std::domain_error("ModelParams: N must be an integer in [2, 12]");
  if (!(params.b > 0.0) || !std::isfinite(params.b))
    throw std::domain_error("ModelParams: b must be positive");
  if (!(params.p > 1.0) || !std::isfinite(params.p))
    throw std::domain_error("ModelParams: p must exceed 1");
}

Exponents critical_exponents(const ModelParams& params) {
  validate(params);
  const double N = params.N, b = params.b, p = params.p;
  Exponents e;
  e.p_lower = 1.0 + 2.0 * b / (N - 1.0);
  e.p_mass_critical = 1.0 + (4.0 + 2.0 * b) / N;
  e.p_energy_critical = params.N <= 2 ? kInf : 1.0 + (4.0 + 2.0 * b) / (N - 2.0);
  e.s_c = N / 2.0 - (2.0 + b) / (p - 1.0);
  e.B = (N * (p - 1.0) - 2.0 * b) / 2.0;
  return e;
}

bool admissible(const ModelParams& params) {
  if (params.N < 2 || params.N > 12 || !(params.b > 0.0) || !(params.p > 1.0))
    return false;
  Exponents e = critical_exponents(params);
  return params.p > e.p_lower && (params.N <= 2 || params.p < e.p_energy_critical);
}

bool is_mass_critical(const ModelParams& params) {
  if (params.p_exact && params.b_exact) {
    // p = 1 + (4+2b)/N  <=>  N (p-1) = 4 + 2b, cross-multiplied exactly
    const Rational& p = *params.p_exact;
    const Rational& b = *params.b_exact;
    __int128 lhs = static_cast<__int128>(params.N) * (p.num - p.den) * b.den;
    __int128 rhs = static_cast<__int128>(p.den) * (4 * b.den + 2 * b.num);
    return lhs == rhs;
  }
  Exponents e = critical_exponents(params);
  return close_rel(params.p, e.p_mass_critical, 1e-12);
}

Regime classify_regime(const ModelParams& params) {
  Exponents e = critical_exponents(params);
  const double p = params.p;
  if (p <= e.p_lower) return Regime::BelowAdmissible;
  if (is_mass_critical(params)) return Regime::MassCritical;
  if (p < e.p_mass_critical) return Regime::MassSubcritical;
  if (params.N <= 2) return Regime::Intercritical;
  if (close_rel(p, e.p_energy_critical, 1e-12)) return Regime::EnergyCritical;
  if (p < e.p_energy_critical) return Regime::Intercritical;
  return Regime::AboveEnergyCritical;
}

}  // namespace inls
