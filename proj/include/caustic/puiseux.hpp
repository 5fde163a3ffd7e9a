#pragma once

// Rational Newton-Puiseux expansion. A branch at the origin is parametrized
// as x = gamma * T^e, y = A(T) + B * T^K * Y(T), where Y solves a regular
// equation g(T, Y) = 0 and is extended lazily. Each root of the branch's
// context corresponds to one branch; its e conjugate probranches are
// obtained by T -> zeta*T and never need to be materialized.

#include <optional>
#include <vector>

#include "caustic/geometry.hpp"

namespace caustic {

/// Truncated power series: coefficients of T^0 .. T^(n-1).
using Series = std::vector<Elem>;

Series series_mul(const Series& a, const Series& b, int n);
Series series_inverse(const Series& a, int n);
/// h(gamma * T^e, y(T)) mod T^n.
Series substitute_branch(const BiPoly& h, const Elem& gamma, int e, const Series& y, int n);
/// Index of the first coefficient that is nonzero (D5 tests), -1 if none.
int series_valuation(const Series& s);

/// Raised when a valuation or exponent cannot be decided below the truncation cap.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Branch {
 public:
  const ContextPtr& context() const { return ctx_; }
  Branch restricted(const ContextPtr& c) const;

  int e() const { return e_; }
  const Elem& gamma() const { return gamma_; }
  /// Cap on the T-precision of any query.
  int cap() const { return cap_; }
  /// True when y(T) is a polynomial (the branch is an exact root y = A(x^(1/e))).
  bool exact() const { return exact_; }
  /// Coefficients of y(T) mod T^n.
  Series y_series(int n) const;

  /// T-valuation of h(x(T), y(T)); throws TruncationError at the cap.
  int valuation(const BiPoly& h) const;
  /// Smallest valuation among several forms; nullopt if all vanish up to the cap.
  std::optional<int> min_valuation(const std::vector<BiPoly>& hs) const;
  /// Smallest k <= limit with a nonzero T^k coefficient of y and e not dividing k*r.
  std::optional<int> first_exponent_off(int r, int limit) const;

 private:
  friend class PuiseuxBuilder;
  Branch() = default;
  void extend_regular(int n) const;

  ContextPtr ctx_;
  Elem gamma_;
  int e_ = 1;
  Poly<Elem> A_;
  Elem B_;
  int K_ = 0;
  BiPoly g_;
  bool exact_ = false;
  int cap_ = 0;
  mutable Series Y_;
};

/// All branches at the origin of V(f). Requires f(0,0) = 0 and x not dividing f.
/// `cap_x` bounds the precision in units of x (the T-cap is cap_x * e).
std::vector<Branch> newton_puiseux(const ContextPtr& ctx, const BiPoly& f, int cap_x);

/// Branches of C at a point cluster, in a normalizing chart.
struct PointBranches {
  PointCluster point;
  LocalChart chart;
  std::vector<Branch> branches;
};
PointBranches branches_at(const PlaneCurve& c, const PointCluster& m, Rng& rng, int cap_x);

/// Lifts a global form into the local chart: G(M(x, y, 1)).
BiPoly local_form(const TriPoly& G, const Mat3& M);
/// Tangent line of a branch in global coordinates.
Vec3 branch_tangent(const Branch& b, const Mat3& M);
/// i(B, V(G)).
int branch_intersection(const Branch& b, const Mat3& M, const TriPoly& G);
int branch_line_intersection(const Branch& b, const Mat3& M, const Vec3& line);

/// First characteristic exponent in T units (e * beta_1), nullopt for smooth branches.
/// Only exponents up to `limit` are inspected when given.
std::optional<int> first_char_exponent(const Branch& b, std::optional<int> limit = std::nullopt);

/// Per-branch decomposition of the valuations of probranch differences.
struct LedgerEntry {
  int weight = 0;  ///< number of branches represented (degree of the branch context)
  int e = 0;
  int total = 0;   ///< sum over probranches of val(D_i), in x units
  int intra = 0;   ///< part coming from pairs of probranches of the same branch
  int cross = 0;   ///< total - intra
};
struct ValuationLedger {
  std::vector<LedgerEntry> entries;
  /// Sum over all roots of the point context of V_m.
  long total = 0;
};
ValuationLedger v_ledger(const PointBranches& pb);

/// Intersection number of C and C' at a point over Q(i) or its base, by
/// summing branch valuations (each probranch contributes val_x of F'(x, g_j(x))).
int intersection_number(const PlaneCurve& c, const TriPoly& other, const PointCluster& m, Rng& rng,
                        int cap_x);

/// Class of C from the valuation ledger: d(d-1) - sum of V over singular points.
int dual_degree_ledger(const PlaneCurve& c, const std::vector<PointCluster>& sing, Rng& rng, int cap_x);

struct DualDegree {
  int polar = 0;
  int ledger = 0;
  bool agree() const { return polar == ledger; }
};
DualDegree dual_degree(const PlaneCurve& c, Rng& rng, int cap_x);

}  // namespace caustic
