#pragma once

// Class of the caustic by reflection of a plane curve C from a source S.
//
// mclass is computed three ways from one shared analysis:
//   theorem1  closed formula in contact numbers and multiplicities
//   ledger    2 d^v + d - sum of h over (point, branch) pairs
//   flemma    d(2d-1) - sum over base points of i_m(C, generic reflected polar)
// Counts aggregated over clusters are totals over all conjugate points
// and are divided by the degree of the base context at the end.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "caustic/puiseux.hpp"

namespace caustic {

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two computations that must agree do not.
class InconsistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// id ^ [D_A G D_B G S - D_S G D_A G B - D_S G D_B G A], componentwise.
std::array<TriPoly, 3> reflected_map_general(const TriPoly& G, const Vec3& A, const Vec3& B, const Vec3& S);

/// The reflected map m -> [u : v : w] of C from S (forms of degree 2d-1).
struct ReflectedMap {
  Vec3 S;
  std::array<TriPoly, 3> R;
};
ReflectedMap reflected_map(const PlaneCurve& c, const Vec3& S);
/// a0 u + a1 v + a2 w.
TriPoly reflected_polar(const ReflectedMap& r, const Vec3& a);

struct Degeneracy {
  bool degenerate = false;
  std::string reason;
};
Degeneracy degeneracy_check(const PlaneCurve& c, const Vec3& S);

/// Position of a branch tangent relative to I, J, S.
struct HInput {
  int e = 1;
  int i = 0;  ///< i(B, T_B)
  bool I_on_T = false, J_on_T = false, S_on_T = false;
  bool is_I = false, is_J = false, is_S = false;
};
struct HCase {
  int index = 0;  ///< 1..11
  int h = 0;
  std::optional<int> k1;  ///< first characteristic exponent (T units), case 11 only
};
/// `b` supplies the first characteristic exponent when case 11 needs it.
HCase h_value_dispatch(const HInput& in, const Branch& b);
/// min_j val(R_j o M along B) - 2 val(f_y along B).
int h_value_direct(const Branch& b, const std::array<BiPoly, 3>& local_R, const BiPoly& fy);

struct BranchRecord {
  std::string point;
  int weight = 0;  ///< number of conjugate (point, branch) pairs represented
  int mu = 0;
  HInput input;
  int i_infinity = 0;  ///< i(B, l_inf)
  int v = 0;           ///< val(f_y along B)
  HCase dispatch;
  int h_direct = 0;
};

/// A point cluster met on one of the lines of the triangle (IJS).
struct HitRecord {
  int line = 0;  ///< 0: l_inf, 1: (IS), 2: (JS)
  std::string point;
  int weight = 0;
  int i = 0;
  int mu = 0;
  bool is_I = false, is_J = false, is_S = false;
};

struct CausticAnalysis {
  PlaneCurve curve;
  Vec3 S;
  bool S_at_infinity = false;
  ReflectedMap R;
  DualDegree dual;
  std::vector<PointCluster> base_points;
  std::vector<HitRecord> hits;
  std::vector<BranchRecord> branches;
  int mu_I = 0, mu_J = 0, mu_S = 0;
  int base_degree = 1;
};

/// Shared analysis: singular points, triangle-line sections, branches with
/// their h-values and the base points of the reflected map.
CausticAnalysis analyze(const PlaneCurve& c, const Vec3& S, Rng& rng, int cap_x);

/// Base points of the reflected map restricted to C.
std::vector<PointCluster> base_points(const PlaneCurve& c, const Vec3& S, Rng& rng, int cap_x);

struct Theorem1Terms {
  long g = 0, f = 0, f_prime = 0, g_prime = 0, q_prime = 0;
  long mu_I = 0, mu_J = 0, mu_S = 0, c_prime = 0;
};
Theorem1Terms theorem1_terms(const CausticAnalysis& a);
long mclass_theorem1(const CausticAnalysis& a, const Theorem1Terms& t);
long mclass_ledger(const CausticAnalysis& a);
/// Two independent random reflected polars must agree (a third arbitrates).
long mclass_flemma(const CausticAnalysis& a, Rng& rng);

struct BrocardLemoyne {
  long value = 0;
  std::array<long, 4> corrections{};  ///< Omega_I(C,(IS)), Omega_J(C,(JS)), Omega_S(C,(IS)), Omega_S(C,(JS))
  long correction_sum() const { return corrections[0] + corrections[1] + corrections[2] + corrections[3]; }
};
/// Finite sources only.
BrocardLemoyne brocard_lemoyne(const CausticAnalysis& a, const Theorem1Terms& t);

/// Degree of the reflected map on C, estimated from random fibres; nullopt when trials disagree.
std::optional<int> delta1_estimate(const PlaneCurve& c, const Vec3& S, Rng& rng, int trials = 2);

struct ClassOptions {
  bool theorem1 = true, ledger = true, flemma = true;
  int cap_x = 0;  ///< 0 means 64 d
  std::optional<int> delta1 = 1;  ///< nullopt: estimate
  std::uint64_t seed = 1;
};

struct CausticClassReport {
  int d = 0;
  int dual_degree = 0;
  Theorem1Terms terms;
  std::optional<long> mclass_theorem1, mclass_ledger, mclass_flemma;
  std::string flemma_note;
  int delta1 = 1;
  bool delta1_estimated = false;
  long mclass = 0;
  long class_value = 0;
  std::optional<BrocardLemoyne> bl;
  bool consistent = true;
  std::vector<std::string> diagnostics;
  bool h_oracle_ok = true;
};

/// Runs the selected paths; throws DegenerateError for degenerate configurations.
CausticClassReport caustic_class(const PlaneCurve& c, const Vec3& S, const ClassOptions& opt);

}  // namespace caustic
