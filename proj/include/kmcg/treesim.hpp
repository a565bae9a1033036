#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kmcg::treesim {

// Vertices of the (q+1)-regular tree are coded as words over {0..d-1} with
// no letter equal to its predecessor; the base vertex is the empty word.
// d(u, v) = |u| + |v| - 2 * (length of the longest common prefix).
using Vertex = std::string;

int tree_distance(const Vertex& u, const Vertex& v);
bool valid_vertex(const Vertex& v, int degree);
std::vector<Vertex> neighbors(const Vertex& v, int degree);
std::vector<Vertex> ball_vertices(int degree, int radius);  // BFS order

// Depth-truncated automorphism: a distance-preserving injection of
// B(base, depth) into the tree, stored vertex by vertex.  Truncation depth
// is the neighborhood structure -- two automorphisms at distance 2^{-r}
// agree on B(base, r).
class TreeAut {
 public:
  TreeAut() = default;
  TreeAut(int degree, int depth, std::unordered_map<Vertex, Vertex> map);

  static TreeAut identity(int degree, int depth);

  int degree() const { return degree_; }
  int depth() const { return depth_; }
  const Vertex& base_image() const { return base_image_; }

  bool in_domain(const Vertex& v) const;
  const Vertex& apply(const Vertex& v) const;  // throws outside the domain
  const std::unordered_map<Vertex, Vertex>& mapping() const { return map_; }

  bool is_identity() const;
  // Full consistency check (adjacency preserved, injective); used by tests.
  void verify() const;

 private:
  int degree_ = 0;
  int depth_ = -1;
  Vertex base_image_;
  std::unordered_map<Vertex, Vertex> map_;
};

// compose(f, g) = f after g, defined on radius min(depth(g), depth(f) -
// d(base, g(base))); invert(f) on radius depth(f) - d(base, f(base)).
// Radius < 1 raises InsufficientDepthError.
TreeAut compose(const TreeAut& f, const TreeAut& g);
TreeAut invert(const TreeAut& f);
TreeAut power(const TreeAut& f, int n);

// Largest r <= min(depths) such that f and g agree on B(base, r); -1 when
// they already differ at the base.
int agreement_radius(const TreeAut& f, const TreeAut& g);

// Eventually periodic ray from the base: prefix + repeated block.
struct End {
  Vertex prefix;
  Vertex block;
  Vertex ray_vertex(int t) const;  // word of length t along the ray
};

// Geodesic through the base: two rays whose first letters differ.
struct Line {
  End forward;
  End backward;
  Vertex vertex(int position) const;  // position >= 0 forward, < 0 backward
};

Line standard_line();  // forward (01)^inf, backward (10)^inf
void validate_end(const End& e, int degree);
void validate_line(const Line& l, int degree);

// Local permutation portrait: at each vertex the available child slots
// (sorted) map to the image's available slots through a permutation of
// positions; identity where unspecified.  base_image may move the base.
struct Portrait {
  int degree = 3;
  int depth = 8;
  Vertex base_image;
  std::map<Vertex, std::vector<int>> perms;
};

TreeAut from_portrait(const Portrait& p);

// Moves every line vertex `steps` toward the forward end and extends
// rigidly (remaining branches matched in canonical coding order).
TreeAut translation(int degree, int depth, const Line& line, int steps);

// Fixes B(base, fix_radius) pointwise; beyond it the local permutations are
// drawn from a deterministic seeded generator.
TreeAut random_elliptic(int degree, int depth, int fix_radius, std::uint64_t seed);

// Swaps the branches hanging at u through child letters a and b.
TreeAut child_swap(int degree, int depth, const Vertex& u, char a, char b);

struct TreeIsometry {
  enum class Kind { Elliptic, Hyperbolic };
  Kind kind = Kind::Elliptic;
  int translation_length = 0;              // hyperbolic only
  bool edge_inversion = false;             // elliptic via inverted edge
  Vertex fixed_vertex;                     // elliptic witness
  std::pair<Vertex, Vertex> inverted_edge; // when edge_inversion
  std::vector<Vertex> axis;                // displacement minimizers, BFS order
};

// Standard tree classification: no parabolics exist; the translation length
// is the minimal displacement over the ball.  Requires depth >=
// 2 d(base, g(base)) + 2.
TreeIsometry classify(const TreeAut& g);

// Membership test for the dynamical parabolic group via orbit boundedness:
// d(base, h^n g h^{-n}(base)) = displacement of g at h^{-n}(base), computed
// pointwise; bounded iff the tail of the sequence is periodic.
bool bounded_orbit(const TreeAut& g, const TreeAut& h, int power_cap);

struct FixRadius {
  bool moved = false;      // center itself is moved (radius -infinity)
  int radius = -1;         // largest fully-fixed ball radius observed
  bool saturated = false;  // limited by the available depth, not by a moved point
};

FixRadius fixed_ball_radius(const TreeAut& g, const Vertex& center);

enum class Membership { Verified, Refuted, Inconclusive };
const char* membership_name(Membership m);

struct ContractionVerdict {
  Membership verdict = Membership::Inconclusive;
  Membership ray_route = Membership::Inconclusive;         // fixed balls along the -xi ray
  Membership definitional_route = Membership::Inconclusive;  // fixators of h^n g h^{-n}
  int r_max = -1;     // largest certified fixed radius
  Vertex witness;     // moved point for refutations
  std::string detail;
};

// Both routes run independently and must agree; disagreement raises
// VerificationError.  For elliptic h the verdict is Verified exactly for
// the identity (trivial contraction group).
ContractionVerdict in_contraction(const TreeAut& g, const TreeAut& h, int depth_budget);

// g fixes the repelling end of h iff it maps a tail of the -xi ray into the
// -xi ray.  Kept independent of bounded_orbit so the two can cross-check.
bool in_parabolic(const TreeAut& g, const TreeAut& h);

// 1 for elliptic g, q^(translation length) for hyperbolic g, q = degree - 1.
long long scale(const TreeAut& g);

struct FoldStep {
  int k = 0;                 // corrector index; e_k fixes B(base, k-1)
  bool forward_swap = false;  // a correction happened on the forward side
  bool backward_swap = false;
};

struct FoldResult {
  TreeAut g;                      // g . line = standard line on B(base, depth)
  std::vector<TreeAut> partials;  // p_1, ..., p_depth
  std::vector<FoldStep> steps;
  bool verified = false;  // vertexwise comparison against the standard coding
};

// Folds a line through the base onto the standard line by a product of
// elliptic correctors, the k-th fixing B(base, k-1) pointwise and acting on
// both sides of the line; partial products form a Cauchy sequence in the
// truncation metric.
FoldResult fold_line(const Line& l, int degree, int depth_budget);

struct WitnessCheck {
  int k = 0;
  Membership in_contraction_of_h = Membership::Inconclusive;
  int agreement_radius_with_limit = -1;
  bool differs_from_limit = false;
  Membership mirror_in_contraction_of_h_inverse = Membership::Inconclusive;
};

struct WitnessResult {
  TreeAut h;
  TreeAut limit;                   // fixes the axis, swaps a branch at every axis vertex
  std::vector<TreeAut> approximants;  // g_k: swaps only on the +xi side of -k
  std::vector<WitnessCheck> checks;
  Membership limit_in_contraction = Membership::Inconclusive;  // expected Refuted
  bool all_passed = false;
};

// Finite-depth shadow of a non-closed contraction group: approximants g_k
// converge to the limit in the truncation metric, each g_k is verified in
// U_h, and the limit itself is refuted.
WitnessResult nonclosed_witness(int degree, int translation_length, int depth, int count);

}  // namespace kmcg::treesim
