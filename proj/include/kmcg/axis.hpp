#pragma once

#include <vector>

#include "kmcg/caps.hpp"
#include "kmcg/roots.hpp"

namespace kmcg::axis {

// Does a given end of the axis of w eventually lie inside D(alpha)?
// Decided by a stabilization window over the sign of w^n(alpha) (backward
// direction; w^{-n}(alpha) forward): the backward chamber w^{-n}.c0 lies in
// D(alpha) iff w^n(alpha) > 0.  Undecided is a first-class outcome.
enum class EndSign { EventuallyInside, EventuallyOutside, Undecided };

enum class Direction { Forward, Backward };

const char* end_sign_name(EndSign s);

// power_cap < 4 is rejected; the verdict requires a constant sign over the
// final window of ceil(power_cap/2) consecutive powers.
EndSign end_sign(const roots::RootSystem& rs, const roots::Root& alpha,
                 const weyl::WeylElement& w, Direction dir, int power_cap);

// Walls separating consecutive chambers c0, w.c0, ..., w^periods.c0 along
// the axis: union over k of w^k N(w^{-1}), deduplicated up to sign, oriented
// positive, ordered by period then lexicographically.
std::vector<roots::Root> crossed_walls(const roots::RootSystem& rs, const weyl::WeylElement& w,
                                       int periods);

struct CertifiedPair {
  roots::Root alpha;  // backward end eventually inside D(alpha)
  roots::Root beta;   // forward end eventually inside D(beta)
};

// alpha: the first crossed wall (in enumeration order) oriented so the
// backward end is eventually inside.  beta: the first non-crossing crossed
// wall oriented for the forward end that additionally satisfies
// disjoint(alpha, beta).  Postconditions re-verified before returning.
CertifiedPair pick_alpha_beta(const roots::RootSystem& rs, const weyl::WeylElement& w,
                              const Caps& caps);

// Bundled axis data for reports.
struct AxisData {
  weyl::WeylElement w;
  std::vector<roots::Root> crossed;
  const char* forward_end = "+xi";
  const char* backward_end = "-xi";
};

AxisData axis_data(const roots::RootSystem& rs, const weyl::WeylElement& w, int periods);

}  // namespace kmcg::axis
