#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "caustic/tripoly.hpp"

namespace caustic {

using Rng = std::mt19937_64;

/// Raised when a bounded number of random draws never reaches general position.
class GenericityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// V(F) with F homogeneous and squarefree, coefficients in `base` (or its ancestors).
class PlaneCurve {
 public:
  PlaneCurve() = default;
  PlaneCurve(TriPoly F, ContextPtr base);

  const TriPoly& F() const { return F_; }
  const TriPoly& partial(int k) const { return partials_[k]; }
  int degree() const { return F_.degree(); }
  const ContextPtr& base() const { return base_; }
  /// The same curve with coefficients moved into a descendant of the base.
  PlaneCurve restricted(const ContextPtr& c) const;

 private:
  TriPoly F_;
  std::array<TriPoly, 3> partials_;
  ContextPtr base_;
};

/// One projective point per root of ctx's modulus, given by coordinates in ctx.
struct PointCluster {
  ContextPtr ctx;
  Vec3 coords;

  const ContextPtr& context() const { return ctx; }
  PointCluster restricted(const ContextPtr& c) const { return {c, lift_vec(coords, c)}; }
  int size() const { return ctx->degree(); }
  std::string to_string() const;
};

Vec3 point_I();
Vec3 point_J();
Vec3 line_at_infinity();

/// Scales so that the last nonzero coordinate is 1 (may split the context).
std::vector<PointCluster> normalize(const PointCluster& p);
/// D5 equality of projective points (throws Split when undecided on some roots).
bool same_point(const Vec3& a, const Vec3& b);
bool is_zero_vector(const Vec3& v);
bool on_line(const Vec3& line, const Vec3& p);

/// Multiplicity of C at m (0 when m is not on C). May throw Split.
int multiplicity(const PlaneCurve& c, const Vec3& m);

/// Lowest-degree part of F in the affine chart centred at m: coefficient k
/// multiplies u^k v^(deg-k), where (u, v) are the two chart coordinates
/// other than the normalized one, in the order x, y, z.
struct TangentCone {
  int degree = 0;
  std::vector<Elem> coeffs;
};
TangentCone tangent_cone(const PlaneCurve& c, const Vec3& m);

/// Matrix with last column m whose local equation F(M(x,y,1)) has an
/// invertible y^mu coefficient (tangent cone free of V(x)). May throw Split.
struct LocalChart {
  Mat3 M;
  BiPoly f;
  int mu = 0;
};
LocalChart normalization_matrix(const PlaneCurve& c, const Vec3& m, Rng& rng);
/// Checks the post-condition of normalization_matrix.
bool is_normalizing(const PlaneCurve& c, const Mat3& M, int mu);

/// All singular points, as clusters over descendants of the base context.
std::vector<PointCluster> singular_points(const PlaneCurve& c, Rng& rng);

/// A cluster of C cut on a line together with the intersection number at each of its points.
struct LineHit {
  PointCluster point;
  int i = 0;
};

/// Intersection of C with the line through P and Q, parametrized by
/// lambda*P + Q. P (lambda = infinity), Q (lambda = 0) and each point
/// lambda_k*P + Q listed in `marked` are reported as their own entries
/// whenever they lie on C. With keep_simple false, the remaining simple
/// roots are dropped without adjoining them. May throw Split on the base context.
std::vector<LineHit> line_section(const PlaneCurve& c, const Vec3& P, const Vec3& Q,
                                  const std::vector<Elem>& marked = {}, bool keep_simple = true);
std::vector<LineHit> intersect_with_line(const PlaneCurve& c, const Vec3& line);
/// i_m(C, line) for m on the line (0 if m is not on C).
int line_intersection_at(const PlaneCurve& c, const Vec3& line, const Vec3& m);
/// Omega_m(C, line) = i_m(C, line) - mu_m(C) when m lies on both, else 0.
int contact_number(const PlaneCurve& c, const Vec3& line, const Vec3& m);

/// i_m(V(F), V(G)) by Fulton's local algorithm in a chart centred at m.
/// Throws std::domain_error when F and G share a component through m.
/// May throw Split on m's context.
int local_intersection_number(const TriPoly& F, const TriPoly& G, const PointCluster& m);

/// Intersection numbers i_m(V(F), V(G)) at the given clusters, read off as
/// root multiplicities of a resultant after one random projection.
/// Clusters may be split; each result carries the cluster it applies to.
std::vector<std::pair<PointCluster, int>> resultant_multiplicities(
    const TriPoly& F, const TriPoly& G, const std::vector<PointCluster>& clusters, Rng& rng);

/// Class of C by the polar route: d(d-1) minus the local intersection
/// numbers of C with a random polar at singular points. Two independent
/// draws must agree (a third one arbitrates).
int dual_degree_polar(const PlaneCurve& c, const std::vector<PointCluster>& sing, Rng& rng);

/// Random Gaussian integer with both parts in [-h, h].
QI random_gaussian(Rng& rng, long h);

}  // namespace caustic
