#include <doctest.h>

#include "kmcg/axis.hpp"
#include "kmcg/errors.hpp"
#include "kmcg/report.hpp"
#include "oracles.hpp"

using namespace kmcg;
using axis::Direction;
using axis::EndSign;
using roots::Root;
using roots::RootSystem;
using roots::Sign;

namespace {

cartan::GeneralizedCartanMatrix corpus(const std::string& name) {
  return cartan::parse_gcm(report::slurp(std::string(KMCG_CORPUS_DIR) + "/" + name + ".json"));
}

}  // namespace

TEST_CASE("end_sign in the infinite dihedral system") {
  weyl::WeylGroup w(corpus("a1t"));
  RootSystem rs(w);
  auto t = w.from_word(std::vector<int>{0, 1});

  CHECK_THROWS_AS(axis::end_sign(rs, rs.simple(0), t, Direction::Backward, 3), InputError);

  // oracle: chamber membership side(alpha, w^{-n}) for n <= 20
  Sign expected = Sign::Plus;
  bool constant = true;
  for (int n = 1; n <= 20; ++n) {
    Sign s = rs.side(rs.simple(0), w.power(t, -n));
    if (n == 1)
      expected = s;
    else if (s != expected)
      constant = false;
  }
  REQUIRE(constant);
  EndSign verdict = axis::end_sign(rs, rs.simple(0), t, Direction::Backward, 20);
  CHECK(verdict ==
        (expected == Sign::Plus ? EndSign::EventuallyInside : EndSign::EventuallyOutside));
  // negating the root flips the verdict
  EndSign flipped = axis::end_sign(rs, rs.negate(rs.simple(0)), t, Direction::Backward, 20);
  CHECK(flipped ==
        (verdict == EndSign::EventuallyInside ? EndSign::EventuallyOutside
                                              : EndSign::EventuallyInside));
}

TEST_CASE("a root fixed by w gives a constant verdict in both directions") {
  weyl::WeylGroup w(corpus("block_a2_a1t"));
  RootSystem rs(w);
  auto t = w.from_word(std::vector<int>{2, 3});  // acts only on the second factor
  Root a1 = rs.simple(0);
  CHECK(rs.act(t, a1) == a1);
  CHECK(axis::end_sign(rs, a1, t, Direction::Backward, 16) == EndSign::EventuallyInside);
  CHECK(axis::end_sign(rs, a1, t, Direction::Forward, 16) == EndSign::EventuallyInside);
  CHECK(axis::end_sign(rs, rs.negate(a1), t, Direction::Forward, 16) ==
        EndSign::EventuallyOutside);
}

TEST_CASE("a wall flipped by a glide yields Undecided") {
  // Construct h with h(alpha_1) = -alpha_1 and infinite order: two walls
  // perpendicular to the wall of alpha_1 that do not cross each other give
  // h = s_1 r_beta r_beta'; then the sign of h^n(alpha_1) alternates.
  weyl::WeylGroup w(corpus("tri334"));
  RootSystem rs(w);
  Root a1 = rs.simple(0);
  auto perp = std::vector<Root>{};
  for (const Root& b : rs.orbit(6)) {
    if (b == a1 || b == rs.negate(a1)) continue;
    if (rs.pairing(a1, rs.coroot(b)) == 0) perp.push_back(b);
  }
  bool found = false;
  for (std::size_t i = 0; i < perp.size() && !found; ++i)
    for (std::size_t j = i + 1; j < perp.size() && !found; ++j) {
      if (perp[i] == rs.negate(perp[j])) continue;
      if (rs.walls_cross(perp[i], perp[j])) continue;
      auto h = w.multiply(w.generator(0),
                          w.multiply(rs.reflection_of(perp[i]), rs.reflection_of(perp[j])));
      if (w.order(h).has_value()) continue;
      if (!(rs.act(h, a1) == rs.negate(a1))) continue;
      found = true;
      CHECK(axis::end_sign(rs, a1, h, Direction::Backward, 16) == EndSign::Undecided);
      CHECK(axis::end_sign(rs, a1, h, Direction::Forward, 16) == EndSign::Undecided);
    }
  CHECK(found);
}

TEST_CASE("crossed walls of a translation") {
  weyl::WeylGroup w(corpus("a1t"));
  RootSystem rs(w);
  auto t = w.from_word(std::vector<int>{0, 1});
  auto one = axis::crossed_walls(rs, t, 1);
  CHECK(one.size() == 2);  // |N(t^{-1})| = l(t) = 2 walls per period
  auto three = axis::crossed_walls(rs, t, 3);
  CHECK(three.size() == 6);
  // every crossed wall is oriented positive and separates some pair of
  // consecutive chambers along the orbit of the identity chamber
  for (const Root& r : three) {
    CHECK(rs.is_positive(r));
    bool separates = false;
    for (int k = 1; k <= 3 && !separates; ++k)
      if (rs.side(r, w.power(t, k)) == Sign::Minus) separates = true;
    CHECK(separates);
  }
  // monotone in the period count, as oriented roots
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == three[i]);
}

TEST_CASE("crossed walls of a triangle-group element") {
  weyl::WeylGroup w(corpus("tri334"));
  RootSystem rs(w);
  auto c = w.from_word(std::vector<int>{0, 1, 2});
  // length additivity first: the element translates, no power collapses
  CHECK(w.length(w.power(c, 3)) == 3 * w.length(c));
  auto walls = axis::crossed_walls(rs, c, 3);
  CHECK(walls.size() >= 3);
}

TEST_CASE("pick_alpha_beta certifies both ends") {
  Caps caps;
  for (const char* name : {"tri334", "affine_a2t", "right_angled"}) {
    weyl::WeylGroup w(corpus(name));
    RootSystem rs(w);
    std::vector<int> word = name == std::string("affine_a2t") ? std::vector<int>{0, 1, 2, 1}
                                                              : std::vector<int>{0, 1, 0, 2};
    auto h = w.from_word(word);
    if (w.order(h).has_value()) continue;  // keep only hyperbolic probes
    auto pair = axis::pick_alpha_beta(rs, h, caps);
    CHECK(rs.disjoint(pair.alpha, pair.beta, caps.bfs_radius));
    CHECK_FALSE(pair.alpha == rs.negate(pair.beta));
    CHECK_FALSE(rs.walls_cross(pair.alpha, pair.beta));
    CHECK(axis::end_sign(rs, pair.alpha, h, Direction::Backward, caps.power_cap) ==
          EndSign::EventuallyInside);
    CHECK(axis::end_sign(rs, pair.beta, h, Direction::Forward, caps.power_cap) ==
          EndSign::EventuallyInside);
  }
}

TEST_CASE("pick_alpha_beta rejects elliptic input") {
  weyl::WeylGroup w(corpus("tri334"));
  RootSystem rs(w);
  Caps caps;
  CHECK_THROWS_AS(axis::pick_alpha_beta(rs, w.generator(0), caps), InputError);
  weyl::WeylGroup a2(corpus("a2"));
  RootSystem rs2(a2);
  CHECK_THROWS_AS(axis::pick_alpha_beta(rs2, a2.from_word(std::vector<int>{0, 1}), caps),
                  InputError);
}

TEST_CASE("forward of w equals backward of its inverse") {
  std::mt19937_64 rng(37);
  weyl::WeylGroup w(corpus("tri334"));
  RootSystem rs(w);
  auto all = rs.orbit(4);
  int done = 0;
  for (int trial = 0; trial < 60 && done < 15; ++trial) {
    auto g = w.from_word(oracles::random_word(rng, 3, 8));
    if (w.order(g).has_value()) continue;
    const Root& a = all[rng() % all.size()];
    CHECK(axis::end_sign(rs, a, g, Direction::Forward, 16) ==
          axis::end_sign(rs, a, w.invert(g), Direction::Backward, 16));
    ++done;
  }
  CHECK(done > 0);
}

TEST_CASE("axis_data bundles the crossed walls") {
  weyl::WeylGroup w(corpus("a1t"));
  RootSystem rs(w);
  auto t = w.from_word(std::vector<int>{0, 1});
  auto data = axis::axis_data(rs, t, 2);
  CHECK(data.crossed.size() == 4);
  CHECK(std::string(data.forward_end) == "+xi");
  CHECK_THROWS_AS(axis::axis_data(rs, w.generator(0), 2), InputError);
}
