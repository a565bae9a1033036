#include "kmcg/axis.hpp"

#include <algorithm>
#include <set>

#include "kmcg/errors.hpp"

namespace kmcg::axis {

using roots::Root;
using roots::RootSystem;
using roots::Sign;

const char* end_sign_name(EndSign s) {
  switch (s) {
    case EndSign::EventuallyInside: return "eventually_inside";
    case EndSign::EventuallyOutside: return "eventually_outside";
    case EndSign::Undecided: return "undecided";
  }
  return "?";
}

EndSign end_sign(const RootSystem& rs, const Root& alpha, const weyl::WeylElement& w,
                 Direction dir, int power_cap) {
  if (power_cap < 4) throw InputError("end_sign power cap must be >= 4");
  const Mat& m = dir == Direction::Backward ? w.mat : rs.group().invert(w).mat;
  std::vector<Sign> signs;
  signs.reserve(power_cap);
  Vec v = alpha.c;
  for (int n = 1; n <= power_cap; ++n) {
    v = m.apply(v);
    if (all_nonneg(v) && !is_zero(v))
      signs.push_back(Sign::Plus);
    else if (all_nonpos(v) && !is_zero(v))
      signs.push_back(Sign::Minus);
    else
      throw VerificationError("power image of a real root lost sign coherence");
  }
  int window = (power_cap + 1) / 2;
  Sign last = signs.back();
  for (int n = power_cap - window; n < power_cap; ++n)
    if (signs[n] != last) return EndSign::Undecided;
  return last == Sign::Plus ? EndSign::EventuallyInside : EndSign::EventuallyOutside;
}

std::vector<Root> crossed_walls(const RootSystem& rs, const weyl::WeylElement& w, int periods) {
  if (periods < 1) throw InputError("periods must be >= 1");
  std::vector<Vec> base = rs.group().inversion_set(rs.group().invert(w));
  std::vector<Root> out;
  std::set<Vec> seen;
  std::vector<Vec> level = base;
  for (int k = 0; k < periods; ++k) {
    std::vector<Vec> fresh;
    for (const Vec& v : level) {
      Vec pos = all_nonneg(v) ? v : negate(v);
      if (!seen.count(pos)) {
        seen.insert(pos);
        fresh.push_back(pos);
      }
    }
    std::sort(fresh.begin(), fresh.end());
    for (Vec& v : fresh) out.push_back(Root{std::move(v)});
    if (k + 1 < periods)
      for (Vec& v : level) v = w.mat.apply(v);
  }
  return out;
}

CertifiedPair pick_alpha_beta(const RootSystem& rs, const weyl::WeylElement& w, const Caps& caps) {
  const weyl::WeylGroup& g = rs.group();
  if (g.order(w).has_value()) throw InputError("pick_alpha_beta requires a hyperbolic element");
  const auto& cls = g.classification();
  if (!cls.irreducible) throw InputError("ambient type must be irreducible");
  if (cls.components[0].kind == cartan::Kind::Spherical)
    throw InputError("ambient type must not be spherical");

  std::vector<Root> cand = crossed_walls(rs, w, caps.periods);
  if (cand.empty()) throw VerificationError("hyperbolic element crosses no wall");

  Root alpha;
  const Root* alpha_wall = nullptr;
  for (const Root& rho : cand) {
    EndSign es = end_sign(rs, rho, w, Direction::Backward, caps.power_cap);
    if (es == EndSign::Undecided) continue;
    alpha = es == EndSign::EventuallyInside ? rho : rs.negate(rho);
    alpha_wall = &rho;
    break;
  }
  if (!alpha_wall)
    throw ExhaustedError("alpha", caps.power_cap,
                         "no crossed wall with a decided backward end containment");

  for (const Root& rho : cand) {
    if (rho == *alpha_wall) continue;
    if (rs.walls_cross(rho, alpha)) continue;
    EndSign es = end_sign(rs, rho, w, Direction::Forward, caps.power_cap);
    if (es == EndSign::Undecided) continue;
    Root beta = es == EndSign::EventuallyInside ? rho : rs.negate(rho);
    if (beta == rs.negate(alpha)) continue;
    bool dj;
    try {
      dj = rs.disjoint(alpha, beta, caps.bfs_radius);
    } catch (const ExhaustedError&) {
      continue;  // quadrant witness ran out of budget for this candidate
    }
    if (!dj) continue;
    // Postconditions, re-verified through the public predicates.
    if (end_sign(rs, alpha, w, Direction::Backward, caps.power_cap) != EndSign::EventuallyInside ||
        end_sign(rs, beta, w, Direction::Forward, caps.power_cap) != EndSign::EventuallyInside)
      throw VerificationError("end containment certificates failed re-verification");
    return {alpha, beta};
  }
  throw ExhaustedError("beta", caps.periods,
                       "no crossed wall parallel to alpha certifies the forward end");
}

AxisData axis_data(const RootSystem& rs, const weyl::WeylElement& w, int periods) {
  if (rs.group().order(w).has_value())
    throw InputError("axis data requires a hyperbolic element");
  return AxisData{w, crossed_walls(rs, w, periods)};
}

}  // namespace kmcg::axis
