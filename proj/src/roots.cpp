#include "kmcg/roots.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "kmcg/errors.hpp"

namespace kmcg::roots {

Root RootSystem::simple(int i) const {
  if (i < 0 || i >= rank()) throw InputError("simple root index out of range");
  Vec v(static_cast<std::size_t>(rank()));
  v[i] = 1;
  return Root{std::move(v)};
}

bool RootSystem::is_positive(const Root& a) const { return all_nonneg(a.c); }

Root RootSystem::act(const weyl::WeylElement& w, const Root& a) const {
  Root r{w.mat.apply(a.c)};
  if (!(all_nonneg(r.c) || all_nonpos(r.c)) || is_zero(r.c))
    throw InputError("image vector is not sign coherent; input was not a real root");
  return r;
}

std::pair<std::vector<int>, int> RootSystem::peel_to_simple(const Root& a) const {
  const auto& gcm = w_.gcm().entries;
  Vec v = all_nonneg(a.c) ? a.c : kmcg::negate(a.c);
  std::vector<int> letters;
  Int height_guard = 0;
  for (const Int& x : v) height_guard += x;
  // Height strictly decreases at every step for a real root.
  while (true) {
    int simple_at = -1;
    for (int j = 0; j < rank(); ++j) {
      bool unit = v[j] == 1;
      if (!unit) continue;
      bool rest_zero = true;
      for (int k = 0; k < rank() && rest_zero; ++k)
        if (k != j && v[k] != 0) rest_zero = false;
      if (rest_zero) {
        simple_at = j;
        break;
      }
    }
    if (simple_at >= 0) return {letters, simple_at};
    int descent = -1;
    for (int i = 0; i < rank(); ++i) {
      Int p = 0;  // <v, alpha_i^>
      for (int k = 0; k < rank(); ++k) p += Int(gcm[i][k]) * v[k];
      if (p > 0) {
        descent = i;
        break;
      }
    }
    if (descent < 0) throw InputError("vector is not a real root (no descent while peeling)");
    v = w_.gen_mat(descent).apply(v);
    letters.push_back(descent);
    if (--height_guard < 0) throw InputError("vector is not a real root (peeling diverged)");
  }
}

Root RootSystem::validate(Vec coords) const {
  if (static_cast<int>(coords.size()) != rank())
    throw InputError("root coordinate count does not match rank");
  if (is_zero(coords)) throw InputError("root vector must be nonzero");
  if (!(all_nonneg(coords) || all_nonpos(coords)))
    throw InputError("root vector violates sign coherence");
  Root r{std::move(coords)};
  peel_to_simple(r);  // throws when outside the real-root orbit
  return r;
}

weyl::WeylElement RootSystem::reflection_of(const Root& a) const {
  auto [letters, j] = peel_to_simple(a);
  // letters applied left-to-right send |a| to alpha_j, so |a| = u(alpha_j)
  // with u = s_{letters[0]} ... s_{letters[last]} read as a word.
  std::vector<int> word(letters.begin(), letters.end());
  std::vector<int> full;
  full.insert(full.end(), word.begin(), word.end());
  full.push_back(j);
  full.insert(full.end(), word.rbegin(), word.rend());
  return w_.from_word(full);
}

Coroot RootSystem::coroot(const Root& a) const {
  auto [letters, j] = peel_to_simple(a);
  Vec v(static_cast<std::size_t>(rank()));
  v[j] = 1;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) v = w_.gen_dual(*it).apply(v);
  if (all_nonpos(a.c)) v = kmcg::negate(v);
  return Coroot{std::move(v)};
}

Int RootSystem::pairing(const Root& a, const Coroot& bv) const {
  const auto& gcm = w_.gcm().entries;
  Int p = 0;
  for (int i = 0; i < rank(); ++i) {
    if (bv.c[i] == 0) continue;
    for (int k = 0; k < rank(); ++k) p += bv.c[i] * Int(gcm[i][k]) * a.c[k];
  }
  return p;
}

Sign RootSystem::side_given_winv(const Root& a, const Mat& winv) const {
  Vec v = winv.apply(a.c);
  if (all_nonneg(v) && !is_zero(v)) return Sign::Plus;
  if (all_nonpos(v) && !is_zero(v)) return Sign::Minus;
  throw VerificationError("chamber side of a real root is undefined");
}

Sign RootSystem::side(const Root& a, const weyl::WeylElement& w) const {
  return side_given_winv(a, w_.invert(w).mat);
}

bool RootSystem::walls_cross(const Root& a, const Root& b) const {
  if (a == b || a == negate(b)) throw InputError("walls_cross requires alpha != +-beta");
  Int p = pairing(a, coroot(b)) * pairing(b, coroot(a));
  bool by_pairing = p >= 0 && p <= 3;
  Mat m = w_.multiply(reflection_of(a), reflection_of(b)).mat;
  Mat acc = m;
  bool by_order = false;
  for (int k = 1; k <= 6; ++k) {
    if (acc.is_identity()) {
      by_order = true;
      break;
    }
    acc = acc * m;
  }
  if (by_pairing != by_order)
    throw VerificationError("crossing tests disagree (pairing vs matrix order)");
  return by_order;
}

WallRelation RootSystem::wall_relation(const Root& a, const Root& b, int radius_cap) const {
  if (a == b) return {WallRelation::Kind::Equal};
  if (a == negate(b)) return {WallRelation::Kind::Opposite};
  if (walls_cross(a, b)) return {WallRelation::Kind::Crossing};

  // Two distinct parallel walls leave exactly one of the four quadrants
  // empty; witness the other three by scanning chambers in BFS order.  The
  // ball is grown in stages so deep caps cost nothing when the witnesses
  // sit close to the identity chamber.
  bool seen[2][2] = {{false, false}, {false, false}};
  int distinct = 0;
  std::size_t scanned = 0;
  for (int stage = std::min(4, radius_cap); distinct < 3;
       stage = std::min(stage * 2, radius_cap)) {
    auto ball = w_.ball(stage);
    for (; scanned < ball->elems.size(); ++scanned) {
      const auto& e = ball->elems[scanned];
      if (e.length > radius_cap) break;
      int ia = side_given_winv(a, e.inv) == Sign::Plus ? 0 : 1;
      int ib = side_given_winv(b, e.inv) == Sign::Plus ? 0 : 1;
      if (!seen[ia][ib]) {
        seen[ia][ib] = true;
        if (++distinct == 3) break;
      }
    }
    if (stage >= radius_cap || (ball->closed && scanned >= ball->elems.size())) break;
  }
  if (distinct == 4) throw VerificationError("parallel walls witnessed all four quadrants");
  if (distinct < 3)
    throw ExhaustedError("wall_relation", radius_cap,
                         "BFS radius " + std::to_string(radius_cap) +
                             " exhausted before witnessing three quadrants");
  WallRelation r{WallRelation::Kind::Nested};
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      if (!seen[ia][ib]) {
        r.empty_alpha = ia == 0 ? Sign::Plus : Sign::Minus;
        r.empty_beta = ib == 0 ? Sign::Plus : Sign::Minus;
      }
  return r;
}

bool RootSystem::disjoint(const Root& a, const Root& b, int radius_cap) const {
  WallRelation r = wall_relation(a, b, radius_cap);
  return r.kind == WallRelation::Kind::Nested && r.empty_alpha == Sign::Plus &&
         r.empty_beta == Sign::Plus;
}

std::vector<Root> RootSystem::orbit(int max_len) const {
  std::vector<Root> out;
  std::set<Vec> seen;
  for (int i = 0; i < rank(); ++i) {
    out.push_back(simple(i));
    seen.insert(out.back().c);
  }
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    std::vector<Vec> fresh;
    for (std::size_t p = level_begin; p < level_end; ++p)
      for (int i = 0; i < rank(); ++i) {
        Vec v = w_.gen_mat(i).apply(out[p].c);
        if (seen.count(v)) continue;
        seen.insert(v);
        fresh.push_back(std::move(v));
      }
    std::sort(fresh.begin(), fresh.end());
    for (Vec& v : fresh) out.push_back(Root{std::move(v)});
    if (out.size() == level_end) break;
    level_begin = level_end;
  }
  return out;
}

Root parse_root_literal(const RootSystem& rs, std::string_view text) {
  Vec coords;
  std::string tok;
  std::istringstream in{std::string(text)};
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(tok, &pos);
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos != tok.size()) throw std::invalid_argument(tok);
      coords.push_back(Int(v));
    } catch (const std::exception&) {
      throw InputError("root coordinate \"" + tok + "\" is not an integer");
    }
  }
  return rs.validate(std::move(coords));
}

}  // namespace kmcg::roots
