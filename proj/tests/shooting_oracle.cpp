#include "shooting_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

struct Rhs {
  double N, b, p, omega;
  void operator()(double r, double q, double dq, double& fq, double& fdq) const {
    fq = dq;
    fdq = -(N - 1.0) / r * dq + omega * q -
          std::pow(r, b) * std::pow(std::abs(q), p - 1.0) * q;
  }
};

// +1 overshoot, -1 undershoot
int classify(const Rhs& f, double s, double h, double r_stop,
             std::vector<double>* qs, std::vector<double>* dqs) {
  const double r0 = h;
  const double cn = std::pow(s, f.p) / ((2.0 + f.b) * (f.N + f.b));
  double q = s * (1.0 + f.omega * r0 * r0 / (2.0 * f.N)) - cn * std::pow(r0, 2.0 + f.b);
  double dq = s * f.omega * r0 / f.N - cn * (2.0 + f.b) * std::pow(r0, 1.0 + f.b);
  if (q <= 0.0) return +1;
  if (qs) {
    qs->push_back(q);
    dqs->push_back(dq);
  }
  bool past_peak = false;
  const long steps = std::lround((r_stop - r0) / h);
  for (long k = 0; k < steps; ++k) {
    const double r = r0 + k * h;
    double a1, b1, a2, b2, a3, b3, a4, b4;
    f(r, q, dq, a1, b1);
    f(r + 0.5 * h, q + 0.5 * h * a1, dq + 0.5 * h * b1, a2, b2);
    f(r + 0.5 * h, q + 0.5 * h * a2, dq + 0.5 * h * b2, a3, b3);
    f(r + h, q + h * a3, dq + h * b3, a4, b4);
    q += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    dq += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
    if (qs) {
      qs->push_back(q);
      dqs->push_back(dq);
    }
    if (q <= 0.0) return +1;
    if (!std::isfinite(q) || q > 1e100) return +1;
    if (dq < 0.0) past_peak = true;
    if (past_peak && dq > 0.0) return -1;
  }
  return -1;
}

}  // namespace

ProfileValues solve(int N, double b, double p, double omega, double h, double r_stop) {
  const Rhs f{static_cast<double>(N), b, p, omega};
  double s_lo = 1e-6, s_hi = 1e6;
  if (classify(f, s_lo, h, r_stop, nullptr, nullptr) != -1 ||
      classify(f, s_hi, h, r_stop, nullptr, nullptr) != +1)
    throw std::runtime_error("oracle: bracketing failure");
  for (int it = 0; it < 220 && s_hi - s_lo > 1e-15 * s_hi; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (mid == s_lo || mid == s_hi) break;
    (classify(f, mid, h, r_stop, nullptr, nullptr) == +1 ? s_hi : s_lo) = mid;
  }
  const double s = 0.5 * (s_lo + s_hi);

  std::vector<double> q, dq;
  classify(f, s, h, r_stop, &q, &dq);
  // truncate before the contaminated zone: past the peak, once the profile
  // drops below 1e-7 of the peak the growing mode takes over soon after
  double peak = 0.0;
  for (double v : q) peak = std::max(peak, v);
  size_t last = q.size() - 1;
  for (size_t k = 0; k < q.size(); ++k)
    if (dq[k] < 0.0 && q[k] <= 1e-7 * peak) {
      last = k;
      break;
    }

  const double area = 2.0 * std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0);
  double mass = 0, kin = 0, pot = 0;
  for (size_t k = 0; k + 1 <= last; ++k) {
    const double r_a = h + k * h, r_b = r_a + h;
    auto w = [&](double r, double qq, double dqq, double& fm, double& fk, double& fp_) {
      const double rn = std::pow(r, N - 1.0);
      fm = rn * qq * qq;
      fk = rn * dqq * dqq;
      fp_ = rn * std::pow(r, b) * std::pow(std::abs(qq), p + 1.0);
    };
    double m1, k1, p1, m2, k2, p2;
    w(r_a, q[k], dq[k], m1, k1, p1);
    w(r_b, q[k + 1], dq[k + 1], m2, k2, p2);
    mass += 0.5 * h * (m1 + m2);
    kin += 0.5 * h * (k1 + k2);
    pot += 0.5 * h * (p1 + p2);
  }
  ProfileValues out;
  out.q0 = s;
  out.mass = area * mass;
  out.kinetic = area * kin;
  out.potential = area * pot;
  out.action_d = (p - 1.0) / (2.0 * (p + 1.0)) * out.potential;
  return out;
}

}  // namespace oracle
