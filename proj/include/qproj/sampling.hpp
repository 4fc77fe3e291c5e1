#pragma once

#include <random>
#include <vector>

#include "qproj/types.hpp"

namespace qproj {

/// Default seed for every randomized sweep; reports are reproducible
/// byte-for-byte when it is left in place.
constexpr unsigned kDefaultSeed = 20240814;

inline PhasePoint random_pqt(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return PhasePoint::pqt(u(rng), u(rng), u(rng));
}

inline PhasePoint random_pqst(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return PhasePoint::pqst(u(rng), u(rng), u(rng), u(rng));
}

/// Points inside the unit ball of the (p,q,t) label space.
inline std::vector<PhasePoint> random_ball_points(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PhasePoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double p = u(rng), q = u(rng), t = u(rng);
    if (p * p + q * q + t * t <= 1.0) pts.push_back(PhasePoint::pqt(p, q, t));
  }
  return pts;
}

inline std::vector<PhasePoint> random_ball_points_ext(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PhasePoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double p = u(rng), q = u(rng), s = u(rng), t = u(rng);
    if (p * p + q * q + s * s + t * t <= 1.0) pts.push_back(PhasePoint::pqst(p, q, s, t));
  }
  return pts;
}

}  // namespace qproj
