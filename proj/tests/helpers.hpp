#pragma once

#include <cmath>
#include <map>
#include <tuple>

#include "inls/dynamics.hpp"
#include "inls/groundstate.hpp"
#include "inls/normalized.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-300});
}

// Golden profile values, frozen from an independent high-resolution shooting
// run (adaptive eighth-order integrator at rtol 1e-13, Simpson quadrature on
// two million points); cross-checked at test time by the RK4 oracle.
struct Golden {
  double q0, mass, kinetic, potential, d;
};

inline const Golden kGolden_3_1_25{1.40675412950049, 84.8107357563821,
                                   47.1170754202125, 131.927811176595,
                                   28.2702452521274};
inline const Golden kGolden_3_1_4{3.06863053257226, 21.4354353851881,
                                  50.0160158987697, 71.4514512839577,
                                  21.4354353851873};
inline const Golden kGolden_2_1_35{1.47395783637596, 18.7144682170843,
                                   9.35723410854192, 28.0717023256263,
                                   7.79769509045174};
inline const Golden kGolden_3_1_3{2.17985812643044, 57.7432053008159,
                                  57.7432053008136, 115.486410601629,
                                  28.8716026504073};

// Ground-state solves are deterministic and reused across test cases.
inline const inls::GroundState& cached_solve(int N, double b, double p, double omega,
                                             double R, int M) {
  static std::map<std::tuple<int, double, double, double, double, int>,
                  inls::GroundState>
      cache;
  auto key = std::make_tuple(N, b, p, omega, R, M);
  auto it = cache.find(key);
  if (it == cache.end()) {
    inls::ModelParams params(N, b, p, omega);
    it = cache.emplace(key, inls::solve_profile_shooting(params, inls::make_grid(N, R, M)))
             .first;
  }
  return it->second;
}

}  // namespace testing
