#include "caustic/invariants.hpp"

#include <sstream>
#include <tuple>

#include "caustic/parser.hpp"

namespace caustic {

namespace {

long weighted_h(const CausticAnalysis& a) {
  long s = 0;
  for (const auto& r : a.branches) s += static_cast<long>(r.weight) * r.h_direct;
  return s;
}

InvariantCheck wedge_identity(const ReflectedMap& r, int d) {
  InvariantCheck out{"wedge identity", true, ""};
  TriPoly x = parse_form("x", nullptr), y = parse_form("y", nullptr), z = parse_form("z", nullptr);
  if (!(x * r.R[0] + y * r.R[1] + z * r.R[2]).is_zero()) {
    out.ok = false;
    out.detail = "x u + y v + z w is not identically zero";
  }
  for (const auto& f : r.R)
    if (!f.is_zero() && f.degree() != 2 * d - 1) {
      out.ok = false;
      out.detail = "a component has degree " + std::to_string(f.degree());
    }
  return out;
}

InvariantCheck equivariance(const PlaneCurve& c, const ReflectedMap& r, Rng& rng, int trials) {
  InvariantCheck out{"equivariance under " + std::to_string(trials) + " random M", true, ""};
  for (int t = 0; t < trials && out.ok; ++t) {
    Mat3 M = random_unimodular(rng, 2);
    Mat3 inv = adjugate3(M);
    Mat3 com = cofactor3(M);
    auto moved = reflected_map_general(c.F().substitute_linear(M), mat_apply(inv, point_I()),
                                       mat_apply(inv, point_J()), mat_apply(inv, r.S));
    for (int k = 0; k < 3; ++k) {
      TriPoly rhs = com[k][0] * moved[0] + com[k][1] * moved[1] + com[k][2] * moved[2];
      if (r.R[k].substitute_linear(M) != rhs) {
        out.ok = false;
        out.detail = "component " + std::to_string(k) + " differs at trial " + std::to_string(t);
      }
    }
  }
  return out;
}

// Probranch residuals and sum of ramification indices at every singular point.
std::vector<InvariantCheck> branch_checks(const PlaneCurve& c, Rng& rng, int cap_x) {
  InvariantCheck residual{"probranch residuals", true, ""};
  InvariantCheck ram{"sum of e over branches equals multiplicity", true, ""};
  for (const auto& m : singular_points(c, rng)) {
    auto results = split_map(m, [&](const PointCluster& q) {
      PointBranches pb = branches_at(c.restricted(q.ctx), q, rng, cap_x);
      const int mu = multiplicity(c.restricted(q.ctx), q.coords);
      long sum_e = 0;
      bool res_ok = true;
      for (const auto& b : pb.branches) {
        sum_e += static_cast<long>(b.context()->degree()) * b.e();
        Series s = substitute_branch(pb.chart.f, b.gamma(), b.e(), b.y_series(16), 16);
        res_ok = res_ok && series_valuation(s) == -1;
      }
      return std::tuple<std::string, bool, bool>(q.to_string(), res_ok,
                                                 sum_e == static_cast<long>(mu) * q.size());
    });
    for (const auto& [name, res_ok, e_ok] : results) {
      if (!res_ok) {
        residual.ok = false;
        residual.detail = "nonzero residual at " + name;
      }
      if (!e_ok) {
        ram.ok = false;
        ram.detail = "mismatch at " + name;
      }
    }
  }
  return {residual, ram};
}

}  // namespace

Mat3 random_unimodular(Rng& rng, long h) {
  std::uniform_int_distribution<long> dist(-h, h);
  Mat3 m = identity3();
  for (int round = 0; round < 3; ++round) {
    Mat3 lower = identity3(), upper = identity3();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) {
        lower[i][j] = Elem(dist(rng));
        upper[j][i] = Elem(dist(rng));
      }
    m = mat_mul(m, mat_mul(lower, upper));
  }
  return m;
}

std::vector<InvariantCheck> check_invariants(const PlaneCurve& c, const Vec3& S_in, std::uint64_t seed,
                                             int equivariance_trials, int cap_x) {
  if (cap_x <= 0) cap_x = 64 * c.degree();
  Rng rng(seed);
  Vec3 S = lift_vec(S_in, c.base());
  std::vector<InvariantCheck> out;
  ReflectedMap r = reflected_map(c, S);
  out.push_back(wedge_identity(r, c.degree()));
  out.push_back(equivariance(c, r, rng, equivariance_trials));

  CausticAnalysis a1 = analyze(c, S, rng, cap_x);
  Rng other(seed ^ 0x9e3779b97f4a7c15ULL);
  CausticAnalysis a2 = analyze(c, S, other, cap_x);
  InvariantCheck chart{"h independent of the normalizing chart", weighted_h(a1) == weighted_h(a2), ""};
  if (!chart.ok)
    chart.detail = std::to_string(weighted_h(a1)) + " vs " + std::to_string(weighted_h(a2));
  out.push_back(chart);

  InvariantCheck oracle{"h dispatch equals direct valuation", true, ""};
  for (const auto& b : a1.branches)
    if (b.dispatch.h != b.h_direct) {
      oracle.ok = false;
      std::ostringstream os;
      os << "at " << b.point << ": case " << b.dispatch.index << " gives " << b.dispatch.h
         << ", direct " << b.h_direct;
      oracle.detail = os.str();
    }
  out.push_back(oracle);

  for (auto& chk : branch_checks(c, rng, cap_x)) out.push_back(std::move(chk));

  InvariantCheck dual{"dual degree: polar count equals V ledger", a1.dual.agree(), ""};
  dual.detail = std::to_string(a1.dual.polar) + " vs " + std::to_string(a1.dual.ledger);
  out.push_back(dual);
  return out;
}

}  // namespace caustic
