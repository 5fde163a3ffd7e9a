#pragma once

// Structural checks on a single (curve, source) instance.

#include <cstdint>
#include <string>
#include <vector>

#include "caustic/caustic.hpp"

namespace caustic {

struct InvariantCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// Integer matrix with determinant 1, entries of height about h.
Mat3 random_unimodular(Rng& rng, long h);

/// Wedge identity, equivariance under random M, chart independence of h,
/// h dispatch against direct valuation, probranch residuals, sum of e = mu
/// and agreement of the two dual-degree computations.
std::vector<InvariantCheck> check_invariants(const PlaneCurve& c, const Vec3& S, std::uint64_t seed,
                                             int equivariance_trials = 20, int cap_x = 0);

}  // namespace caustic
