#pragma once

#include <vector>

#include "kmcg/intmat.hpp"
#include "kmcg/weyl.hpp"

namespace kmcg::roots {

// Real root in simple-root coordinates.  Coordinates are all >= 0 or all
// <= 0 and the vector lies in the W-orbit of a simple root; construction
// goes through RootSystem so both properties hold by fiat.
struct Root {
  Vec c;
  friend bool operator==(const Root& x, const Root& y) { return x.c == y.c; }
  friend bool operator<(const Root& x, const Root& y) { return x.c < y.c; }
};

struct Coroot {
  Vec c;
  friend bool operator==(const Coroot& x, const Coroot& y) { return x.c == y.c; }
};

enum class Sign : int { Plus = +1, Minus = -1 };
inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// Relation between the walls/half-apartments of two roots.  A Nested pair of
// distinct parallel walls has exactly one empty quadrant among the four
// intersections D(+-alpha) cap D(+-beta); the other three contain chambers.
struct WallRelation {
  enum class Kind { Equal, Opposite, Crossing, Nested };
  Kind kind;
  Sign empty_alpha = Sign::Plus;  // the empty quadrant, Nested only
  Sign empty_beta = Sign::Plus;
};

class RootSystem {
 public:
  explicit RootSystem(const weyl::WeylGroup& w) : w_(w) {}

  const weyl::WeylGroup& group() const { return w_; }
  int rank() const { return w_.rank(); }

  Root simple(int i) const;
  Root negate(const Root& a) const { return Root{kmcg::negate(a.c)}; }
  bool is_positive(const Root& a) const;

  // Validates sign coherence and membership in the real-root orbit.
  Root validate(Vec coords) const;

  Root act(const weyl::WeylElement& w, const Root& a) const;

  // r_alpha = u s_j u^{-1} where u(alpha_j) = alpha, found by height peeling.
  weyl::WeylElement reflection_of(const Root& a) const;

  // alpha^ tracked through the same peeling word in the dual representation.
  Coroot coroot(const Root& a) const;

  // <alpha, beta^> pairing; <alpha_j, alpha_i^> = a_ij.
  Int pairing(const Root& a, const Coroot& bv) const;

  // Side of the chamber w.c0 relative to D(alpha): '+' iff w^{-1}(alpha) > 0.
  Sign side(const Root& a, const weyl::WeylElement& w) const;

  // Crossing test, run through both routes (matrix order of r_a r_b <= 6 and
  // the pairing product p = <a,b^><b,a^> in {0,1,2,3}); they must agree.
  bool walls_cross(const Root& a, const Root& b) const;

  // Equal / Opposite / Crossing / Nested with the empty quadrant certified by
  // witnessing the other three within a BFS of the Cayley ball.  Throws
  // ExhaustedError when the cap runs out before three quadrants are seen.
  WallRelation wall_relation(const Root& a, const Root& b, int radius_cap) const;

  // D(alpha) and D(beta) share no chamber: Nested with empty quadrant (+,+).
  bool disjoint(const Root& a, const Root& b, int radius_cap) const;

  // Real roots reachable from the simple roots by words of length <= max_len,
  // in deterministic breadth-first order.
  std::vector<Root> orbit(int max_len) const;

 private:
  // Peels a (positive representative of a) root down to a simple root;
  // returns the applied letters and the final simple index.
  std::pair<std::vector<int>, int> peel_to_simple(const Root& a) const;
  Sign side_given_winv(const Root& a, const Mat& winv) const;

  const weyl::WeylGroup& w_;
};

// Root literal syntax shared with the command line: comma-separated integer
// coordinates, e.g. "1,1,0".
Root parse_root_literal(const RootSystem& rs, std::string_view text);

}  // namespace kmcg::roots
