#pragma once

// Named test curves and point-matching helpers shared by the test binaries.

#include <string>
#include <vector>

#include "caustic/geometry.hpp"
#include "caustic/parser.hpp"

namespace caustic::testing {

inline PlaneCurve curve(const std::string& text, const ContextPtr& base = nullptr) {
  return PlaneCurve(parse_form(text, base), base ? base : Context::rationals());
}

inline const char* kLemniscate = "(x^2+y^2)^2 - 2*(x^2-y^2)*z^2";
inline const char* kQuintic = "y^2*z^3 - x^5";
inline const char* kQuartic =
    "2*y*z^3 + 2*z^2*y^2 + 2*z*y^3 + 2*y^4 - 2*z^3*x + 2*z*y*x^2 + 5*y^2*x^2 + 3*x^4";
inline const char* kConic = "x^2 + y^2 - z^2";
inline const char* kFermatCubic = "x^3 + y^3 + z^3";

inline Vec3 pt(long a, long b, long c) { return {Elem(a), Elem(b), Elem(c)}; }

/// Number of roots of the cluster's context at which it equals p.
inline int matches(const PointCluster& m, const Vec3& p) {
  int n = 0;
  for (auto [deg, same] : split_map(m, [&](const PointCluster& q) {
         return std::pair<int, bool>(q.size(), same_point(q.coords, lift_vec(p, q.ctx)));
       }))
    if (same) n += deg;
  return n;
}

inline int matches(const std::vector<PointCluster>& ms, const Vec3& p) {
  int n = 0;
  for (const auto& m : ms) n += matches(m, p);
  return n;
}

inline int total_size(const std::vector<PointCluster>& ms) {
  int n = 0;
  for (const auto& m : ms) n += m.size();
  return n;
}

}  // namespace caustic::testing
