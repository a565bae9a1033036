#include "kmcg/treesim.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "kmcg/errors.hpp"

namespace kmcg::treesim {

namespace {

void require_degree(int degree) {
  if (degree < 3 || degree > 10)
    throw InputError("tree degree must be between 3 and 10 (one letter per direction)");
}

}  // namespace

int tree_distance(const Vertex& u, const Vertex& v) {
  std::size_t lcp = 0;
  while (lcp < u.size() && lcp < v.size() && u[lcp] == v[lcp]) ++lcp;
  return static_cast<int>(u.size() + v.size() - 2 * lcp);
}

bool valid_vertex(const Vertex& v, int degree) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < '0' || v[i] >= '0' + degree) return false;
    if (i > 0 && v[i] == v[i - 1]) return false;
  }
  return true;
}

std::vector<Vertex> neighbors(const Vertex& v, int degree) {
  std::vector<Vertex> out;
  if (!v.empty()) out.push_back(v.substr(0, v.size() - 1));
  for (int c = 0; c < degree; ++c) {
    char ch = static_cast<char>('0' + c);
    if (v.empty() || v.back() != ch) out.push_back(v + ch);
  }
  return out;
}

std::vector<Vertex> ball_vertices(int degree, int radius) {
  std::vector<Vertex> out{Vertex{}};
  std::size_t level_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t p = level_begin; p < level_end; ++p)
      for (int c = 0; c < degree; ++c) {
        char ch = static_cast<char>('0' + c);
        if (!out[p].empty() && out[p].back() == ch) continue;
        out.push_back(out[p] + ch);
      }
    level_begin = level_end;
  }
  return out;
}

TreeAut::TreeAut(int degree, int depth, std::unordered_map<Vertex, Vertex> map)
    : degree_(degree), depth_(depth), map_(std::move(map)) {
  require_degree(degree_);
  if (depth_ < 0) throw InputError("automorphism depth must be >= 0");
  auto it = map_.find(Vertex{});
  if (it == map_.end()) throw VerificationError("automorphism mapping lacks the base vertex");
  base_image_ = it->second;
}

TreeAut TreeAut::identity(int degree, int depth) {
  require_degree(degree);
  std::unordered_map<Vertex, Vertex> m;
  for (Vertex& v : ball_vertices(degree, depth)) {
    Vertex copy = v;
    m.emplace(std::move(copy), std::move(v));
  }
  return TreeAut(degree, depth, std::move(m));
}

bool TreeAut::in_domain(const Vertex& v) const { return map_.count(v) != 0; }

const Vertex& TreeAut::apply(const Vertex& v) const {
  auto it = map_.find(v);
  if (it == map_.end())
    throw InsufficientDepthError(static_cast<int>(v.size()), depth_,
                                 "vertex outside the truncation domain");
  return it->second;
}

bool TreeAut::is_identity() const {
  for (const auto& [u, v] : map_)
    if (u != v) return false;
  return true;
}

void TreeAut::verify() const {
  std::vector<Vertex> ball = ball_vertices(degree_, depth_);
  if (ball.size() != map_.size())
    throw VerificationError("automorphism domain is not the full ball");
  std::set<Vertex> image;
  for (const Vertex& v : ball) {
    auto it = map_.find(v);
    if (it == map_.end()) throw VerificationError("automorphism domain is missing a ball vertex");
    if (!valid_vertex(it->second, degree_)) throw VerificationError("image is not a valid vertex");
    if (!image.insert(it->second).second) throw VerificationError("automorphism is not injective");
    if (!v.empty()) {
      const Vertex parent = v.substr(0, v.size() - 1);
      if (tree_distance(map_.at(parent), it->second) != 1)
        throw VerificationError("automorphism does not preserve adjacency");
    }
  }
}

TreeAut compose(const TreeAut& f, const TreeAut& g) {
  if (f.degree() != g.degree()) throw InputError("composing automorphisms of different degrees");
  int r = std::min(g.depth(), f.depth() - static_cast<int>(g.base_image().size()));
  if (r < 1)
    throw InsufficientDepthError(1, r, "composition would have no usable depth");
  std::unordered_map<Vertex, Vertex> m;
  for (Vertex& v : ball_vertices(f.degree(), r)) {
    Vertex img = f.apply(g.apply(v));
    m.emplace(std::move(v), std::move(img));
  }
  return TreeAut(f.degree(), r, std::move(m));
}

TreeAut invert(const TreeAut& f) {
  int r = f.depth() - static_cast<int>(f.base_image().size());
  if (r < 1) throw InsufficientDepthError(1, r, "inverse would have no usable depth");
  std::unordered_map<Vertex, Vertex> m;
  for (const auto& [u, v] : f.mapping())
    if (static_cast<int>(v.size()) <= r) m.emplace(v, u);
  std::size_t expected = ball_vertices(f.degree(), r).size();
  if (m.size() != expected)
    throw VerificationError("inverse mapping does not cover the expected ball");
  return TreeAut(f.degree(), r, std::move(m));
}

TreeAut power(const TreeAut& f, int n) {
  if (n == 0) return TreeAut::identity(f.degree(), f.depth());
  TreeAut base = n < 0 ? invert(f) : f;
  int e = n < 0 ? -n : n;
  TreeAut acc = base;
  for (int i = 1; i < e; ++i) acc = compose(base, acc);
  return acc;
}

int agreement_radius(const TreeAut& f, const TreeAut& g) {
  int rmax = std::min(f.depth(), g.depth());
  if (f.degree() != g.degree()) throw InputError("comparing automorphisms of different degrees");
  int agree = -1;
  for (const Vertex& v : ball_vertices(f.degree(), rmax)) {
    int lv = static_cast<int>(v.size());
    if (f.apply(v) != g.apply(v)) return std::min(agree, lv - 1);
    agree = std::max(agree, lv);
  }
  return rmax;
}

Vertex End::ray_vertex(int t) const {
  if (t < 0) throw InputError("ray position must be >= 0");
  Vertex out;
  out.reserve(static_cast<std::size_t>(t));
  std::size_t i = 0;
  while (static_cast<int>(out.size()) < t) {
    if (out.size() < prefix.size())
      out.push_back(prefix[out.size()]);
    else {
      out.push_back(block[i % block.size()]);
      ++i;
    }
  }
  return out;
}

Vertex Line::vertex(int position) const {
  return position >= 0 ? forward.ray_vertex(position) : backward.ray_vertex(-position);
}

Line standard_line() { return Line{End{"", "01"}, End{"", "10"}}; }

void validate_end(const End& e, int degree) {
  require_degree(degree);
  if (e.block.empty()) throw InputError("end block must be non-empty");
  Vertex probe = e.prefix + e.block + e.block;
  if (!valid_vertex(probe, degree))
    throw InputError("end coding repeats a letter consecutively or uses an invalid letter");
}

void validate_line(const Line& l, int degree) {
  validate_end(l.forward, degree);
  validate_end(l.backward, degree);
  if (l.forward.ray_vertex(1) == l.backward.ray_vertex(1))
    throw InputError("the two ends of a line must leave the base in distinct directions");
}

namespace {

// Shared construction: breadth-first assignment of images.  At each vertex
// the unmatched child slots (sorted) map onto the image's unmatched
// neighbor slots (sorted); `pinned` entries are honored first and `perms`
// reorder the full slot lists positionally.
TreeAut build_aut(int degree, int depth, const Vertex& base_image,
                  const std::map<Vertex, Vertex>* pinned,
                  const std::map<Vertex, std::vector<int>>* perms) {
  require_degree(degree);
  if (!valid_vertex(base_image, degree)) throw InputError("base image is not a valid vertex");
  std::unordered_map<Vertex, Vertex> img;
  img[Vertex{}] = base_image;
  for (const Vertex& v : ball_vertices(degree, depth)) {
    if (static_cast<int>(v.size()) >= depth) continue;
    const Vertex v_img = img.at(v);
    std::vector<char> dom;
    for (int c = 0; c < degree; ++c) {
      char ch = static_cast<char>('0' + c);
      if (v.empty() || v.back() != ch) dom.push_back(ch);
    }
    std::vector<Vertex> slots = neighbors(v_img, degree);
    if (!v.empty()) {
      const Vertex parent = v.substr(0, v.size() - 1);
      std::erase(slots, img.at(parent));
    }
    std::sort(slots.begin(), slots.end());
    if (slots.size() != dom.size())
      throw VerificationError("slot bookkeeping lost a direction");

    const std::vector<int>* sigma = nullptr;
    if (perms) {
      auto it = perms->find(v);
      if (it != perms->end()) sigma = &it->second;
    }
    if (sigma) {
      if (sigma->size() != dom.size())
        throw InputError("portrait permutation at \"" + v + "\" must have size " +
                         std::to_string(dom.size()));
      std::vector<bool> hit(dom.size(), false);
      for (int s : *sigma) {
        if (s < 0 || s >= static_cast<int>(dom.size()) || hit[s])
          throw InputError("portrait entry at \"" + v + "\" is not a permutation");
        hit[s] = true;
      }
      for (std::size_t i = 0; i < dom.size(); ++i) img[v + dom[i]] = slots[(*sigma)[i]];
      continue;
    }

    std::vector<char> dom_rest;
    std::vector<Vertex> slots_rest = slots;
    if (pinned) {
      for (char ch : dom) {
        Vertex child = v + ch;
        auto it = pinned->find(child);
        if (it == pinned->end()) {
          dom_rest.push_back(ch);
          continue;
        }
        auto sit = std::find(slots_rest.begin(), slots_rest.end(), it->second);
        if (sit == slots_rest.end())
          throw VerificationError("pinned image at \"" + child + "\" is not an available slot");
        img[child] = it->second;
        slots_rest.erase(sit);
      }
    } else {
      dom_rest = dom;
    }
    for (std::size_t i = 0; i < dom_rest.size(); ++i) img[v + dom_rest[i]] = slots_rest[i];
  }
  return TreeAut(degree, depth, std::move(img));
}

}  // namespace

TreeAut from_portrait(const Portrait& p) {
  require_degree(p.degree);
  if (p.depth < 1) throw InputError("portrait depth must be >= 1");
  for (const auto& [v, sigma] : p.perms) {
    if (!valid_vertex(v, p.degree))
      throw InputError("portrait vertex \"" + v + "\" is not a valid coding word");
    std::size_t expected = v.empty() ? p.degree : p.degree - 1;
    if (sigma.size() != expected)
      throw InputError("portrait permutation at \"" + v + "\" must have size " +
                       std::to_string(expected));
  }
  return build_aut(p.degree, p.depth, p.base_image, nullptr, &p.perms);
}

TreeAut translation(int degree, int depth, const Line& line, int steps) {
  validate_line(line, degree);
  if (steps == 0) throw InputError("translation step count must be nonzero");
  if (depth < 1) throw InputError("translation depth must be >= 1");
  std::map<Vertex, Vertex> pinned;
  for (int p = -depth; p <= depth; ++p) pinned[line.vertex(p)] = line.vertex(p + steps);
  return build_aut(degree, depth, line.vertex(steps), &pinned, nullptr);
}

TreeAut random_elliptic(int degree, int depth, int fix_radius, std::uint64_t seed) {
  require_degree(degree);
  if (depth < 1 || fix_radius < 0) throw InputError("bad random elliptic parameters");
  std::mt19937_64 rng(seed);
  std::map<Vertex, std::vector<int>> perms;
  for (const Vertex& v : ball_vertices(degree, depth - 1)) {
    if (static_cast<int>(v.size()) < fix_radius) continue;
    std::size_t k = v.empty() ? degree : degree - 1;
    std::vector<int> sigma(k);
    for (std::size_t i = 0; i < k; ++i) sigma[i] = static_cast<int>(i);
    // hand-rolled shuffle: std::shuffle ordering is implementation-defined
    for (std::size_t i = k; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(sigma[i - 1], sigma[j]);
    }
    perms[v] = std::move(sigma);
  }
  return build_aut(degree, depth, Vertex{}, nullptr, &perms);
}

TreeAut child_swap(int degree, int depth, const Vertex& u, char a, char b) {
  require_degree(degree);
  if (!valid_vertex(u, degree)) throw InputError("swap vertex is not valid");
  std::vector<char> dom;
  for (int c = 0; c < degree; ++c) {
    char ch = static_cast<char>('0' + c);
    if (u.empty() || u.back() != ch) dom.push_back(ch);
  }
  auto ia = std::find(dom.begin(), dom.end(), a);
  auto ib = std::find(dom.begin(), dom.end(), b);
  if (ia == dom.end() || ib == dom.end() || a == b)
    throw InputError("swap letters must be two distinct child directions");
  std::vector<int> sigma(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) sigma[i] = static_cast<int>(i);
  std::swap(sigma[ia - dom.begin()], sigma[ib - dom.begin()]);
  std::map<Vertex, std::vector<int>> perms{{u, sigma}};
  return build_aut(degree, depth, Vertex{}, nullptr, &perms);
}

TreeIsometry classify(const TreeAut& g) {
  int moved_base = static_cast<int>(g.base_image().size());
  if (g.depth() < 2 * moved_base + 2)
    throw InsufficientDepthError(2 * moved_base + 2, g.depth(),
                                 "classification needs depth >= 2 d(base, g(base)) + 2");
  int best = -1;
  std::vector<Vertex> minimizers;
  for (const Vertex& v : ball_vertices(g.degree(), g.depth())) {
    int d = tree_distance(v, g.apply(v));
    if (best < 0 || d < best) {
      best = d;
      minimizers.assign(1, v);
    } else if (d == best) {
      minimizers.push_back(v);
    }
  }
  TreeIsometry out;
  if (best == 0) {
    out.kind = TreeIsometry::Kind::Elliptic;
    out.fixed_vertex = minimizers.front();
    return out;
  }
  if (best == 1) {
    for (const Vertex& v : minimizers) {
      const Vertex& w = g.apply(v);
      if (g.in_domain(w)) {
        if (g.apply(w) == v) {
          out.kind = TreeIsometry::Kind::Elliptic;
          out.edge_inversion = true;
          out.inverted_edge = {v, w};
          return out;
        }
        break;  // one displacement-1 vertex decides inversion for all
      }
    }
  }
  out.kind = TreeIsometry::Kind::Hyperbolic;
  out.translation_length = best;
  out.axis = std::move(minimizers);
  return out;
}

bool bounded_orbit(const TreeAut& g, const TreeAut& h, int power_cap) {
  if (power_cap < 4) throw InputError("power cap must be >= 4");
  TreeAut h_inv = invert(h);
  // d(base, h^n g h^{-n}(base)) equals the displacement of g at h^{-n}(base).
  std::vector<int> xs;
  Vertex p;
  for (int n = 0; n <= power_cap; ++n) {
    if (!g.in_domain(p)) break;
    xs.push_back(tree_distance(p, g.apply(p)));
    if (!h_inv.in_domain(p)) break;
    p = h_inv.apply(p);
  }
  int count = static_cast<int>(xs.size());
  if (count < 4)
    throw InsufficientDepthError(4, count, "orbit horizon too short for a periodicity verdict");
  int last = count - 1;
  for (int period = 1; 2 * period <= count; ++period) {
    bool ok = true;
    for (int i = last - 2 * period + 1; i <= last - period && ok; ++i)
      if (xs[i] != xs[i + period]) ok = false;
    if (ok) return true;
  }
  return false;
}

FixRadius fixed_ball_radius(const TreeAut& g, const Vertex& center) {
  if (!g.in_domain(center))
    throw InsufficientDepthError(static_cast<int>(center.size()), g.depth(),
                                 "center lies outside the truncation domain");
  FixRadius out;
  if (g.apply(center) != center) {
    out.moved = true;
    return out;
  }
  int rho_max = g.depth() - static_cast<int>(center.size());
  std::vector<Vertex> frontier{center};
  for (int rho = 1; rho <= rho_max; ++rho) {
    std::vector<Vertex> next;
    for (const Vertex& v : frontier)
      for (Vertex& u : neighbors(v, g.degree())) {
        if (tree_distance(u, center) != rho) continue;  // stay on the outward sphere
        if (g.apply(u) != u) {
          out.radius = rho - 1;
          return out;
        }
        next.push_back(std::move(u));
      }
    frontier = std::move(next);
  }
  out.radius = rho_max;
  out.saturated = true;
  return out;
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Verified: return "verified";
    case Membership::Refuted: return "refuted";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// The repelling ray of a hyperbolic h: axis vertices from the one nearest
// the base, walking away from the translation direction.
std::vector<Vertex> repelling_ray(const TreeAut& h, const TreeIsometry& cls) {
  if (cls.kind != TreeIsometry::Kind::Hyperbolic)
    throw InputError("repelling ray requires a hyperbolic automorphism");
  std::vector<Vertex> axis = cls.axis;
  // linear order along the axis path: sort by distance from one endpoint
  const Vertex& a0 = axis.front();
  const Vertex* far = &a0;
  for (const Vertex& v : axis)
    if (tree_distance(a0, v) > tree_distance(a0, *far)) far = &v;
  Vertex endpoint = *far;
  std::sort(axis.begin(), axis.end(), [&](const Vertex& x, const Vertex& y) {
    return tree_distance(endpoint, x) < tree_distance(endpoint, y);
  });
  std::map<Vertex, int> index;
  for (std::size_t i = 0; i < axis.size(); ++i) index[axis[i]] = static_cast<int>(i);
  int direction = 0;  // +1: h moves toward increasing index
  for (const Vertex& v : axis) {
    if (!h.in_domain(v)) continue;
    auto it = index.find(h.apply(v));
    if (it == index.end()) continue;
    direction = it->second > index[v] ? +1 : -1;
    break;
  }
  if (direction == 0)
    throw InsufficientDepthError(cls.translation_length + 1, static_cast<int>(axis.size()),
                                 "axis segment too short to orient");
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (axis[i].size() < axis[nearest].size()) nearest = i;
  std::vector<Vertex> ray;
  if (direction > 0)
    for (std::size_t i = nearest + 1; i-- > 0;) ray.push_back(axis[i]);
  else
    for (std::size_t i = nearest; i < axis.size(); ++i) ray.push_back(axis[i]);
  return ray;
}

struct GrowthEntry {
  bool moved = false;
  int value = -1;
  bool saturated = false;
  int avail = 0;
  int position = 0;  // sampling coordinate, for witnesses
};

// Fixed-ball radii sampled while approaching the repelling end.  Verified
// needs witnessed strict growth with a sound (non-decreasing) tail; Refuted
// needs persistent motion or a stall with headroom; anything else stays
// Inconclusive.
Membership analyze_growth(const std::vector<GrowthEntry>& s, int& r_max, int& refute_position) {
  r_max = -1;
  refute_position = -1;
  for (const GrowthEntry& e : s)
    if (!e.moved) r_max = std::max(r_max, e.saturated ? e.avail : e.value);
  if (s.size() < 2) return Membership::Inconclusive;

  std::size_t first_fixed = 0;
  while (first_fixed < s.size() && s[first_fixed].moved) ++first_fixed;
  if (first_fixed == s.size()) {
    refute_position = s.back().position;
    return Membership::Refuted;  // moved everywhere we looked
  }
  for (std::size_t i = first_fixed; i < s.size(); ++i)
    if (s[i].moved) {
      refute_position = s[i].position;
      return Membership::Refuted;  // fixed set collapsed again
    }

  std::vector<GrowthEntry> inf;
  for (std::size_t i = first_fixed; i < s.size(); ++i)
    if (!s[i].saturated) inf.push_back(s[i]);
  if (inf.empty())
    return s.size() - first_fixed >= 2 ? Membership::Verified : Membership::Inconclusive;

  // strict decrease near the end is a shrinking fixed set
  std::size_t tail = inf.size() >= 3 ? inf.size() - 3 : 0;
  for (std::size_t i = tail; i + 1 < inf.size(); ++i)
    if (inf[i + 1].value < inf[i].value) {
      refute_position = inf[i + 1].position;
      return Membership::Refuted;
    }

  bool saturated_after_last_inf = !s.empty() && s.back().saturated;
  if (inf.size() >= 2) {
    const GrowthEntry& a = inf[inf.size() - 2];
    const GrowthEntry& b = inf.back();
    if (a.value == b.value && b.avail - b.value >= 2 && !saturated_after_last_inf) {
      refute_position = b.position;
      return Membership::Refuted;  // stalled with headroom to grow
    }
  }
  bool grew = false;
  for (std::size_t i = 0; i + 1 < inf.size(); ++i)
    if (inf[i + 1].value > inf[i].value) grew = true;
  if (!grew && saturated_after_last_inf && s.back().avail > inf.back().value) grew = true;
  return grew ? Membership::Verified : Membership::Inconclusive;
}

constexpr int kMinMargin = 3;  // sample only where at least this much depth remains

}  // namespace

ContractionVerdict in_contraction(const TreeAut& g, const TreeAut& h, int depth_budget) {
  ContractionVerdict out;
  if (depth_budget < 1) throw InputError("depth budget must be >= 1");
  if (g.is_identity()) {
    out.verdict = out.ray_route = out.definitional_route = Membership::Verified;
    out.r_max = g.depth();
    out.detail = "identity";
    return out;
  }
  TreeIsometry cls = classify(h);
  if (cls.kind == TreeIsometry::Kind::Elliptic) {
    // periodic h: the contraction group is trivial
    out.verdict = out.ray_route = out.definitional_route = Membership::Refuted;
    for (const Vertex& v : ball_vertices(g.degree(), g.depth()))
      if (g.apply(v) != v) {
        out.witness = v;
        break;
      }
    out.detail = "h is elliptic; only the identity contracts";
    return out;
  }

  // Route A: fixed balls around successive ray points toward the repelling end.
  std::vector<GrowthEntry> ray_seq;
  std::vector<Vertex> ray = repelling_ray(h, cls);
  for (std::size_t t = 0; t < ray.size(); ++t) {
    const Vertex& c = ray[t];
    if (!g.in_domain(c)) break;
    int avail = g.depth() - static_cast<int>(c.size());
    if (avail < kMinMargin) break;
    FixRadius fr = fixed_ball_radius(g, c);
    ray_seq.push_back({fr.moved, fr.radius, fr.saturated, avail, static_cast<int>(t)});
  }
  int ray_rmax = -1, ray_refute = -1;
  out.ray_route = analyze_growth(ray_seq, ray_rmax, ray_refute);

  // Route B: fixators of the conjugates h^n g h^{-n}, built through the
  // truncation bookkeeping of compose/invert.
  std::vector<GrowthEntry> def_seq;
  {
    TreeAut h_pow = h;
    for (int n = 1; n <= depth_budget; ++n) {
      TreeAut conj;
      try {
        conj = compose(h_pow, compose(g, invert(h_pow)));
      } catch (const InsufficientDepthError&) {
        break;
      }
      if (conj.depth() < kMinMargin) break;
      FixRadius fr = fixed_ball_radius(conj, Vertex{});
      def_seq.push_back({fr.moved, fr.radius, fr.saturated, conj.depth(), n});
      try {
        h_pow = compose(h, h_pow);
      } catch (const InsufficientDepthError&) {
        break;
      }
    }
  }
  int def_rmax = -1, def_refute = -1;
  out.definitional_route = analyze_growth(def_seq, def_rmax, def_refute);

  if ((out.ray_route == Membership::Verified && out.definitional_route == Membership::Refuted) ||
      (out.ray_route == Membership::Refuted && out.definitional_route == Membership::Verified))
    throw VerificationError("contraction membership routes disagree");

  if (out.ray_route == Membership::Verified && out.definitional_route == Membership::Verified) {
    out.verdict = Membership::Verified;
    out.r_max = std::min(ray_rmax, def_rmax);
  } else if (out.ray_route == Membership::Refuted || out.definitional_route == Membership::Refuted) {
    out.verdict = Membership::Refuted;
    int pos = out.ray_route == Membership::Refuted ? ray_refute : def_refute;
    if (out.ray_route == Membership::Refuted && pos >= 0 && pos < static_cast<int>(ray.size()))
      out.witness = ray[pos];
    out.detail = "stall or motion at sample " + std::to_string(pos);
  } else {
    out.verdict = Membership::Inconclusive;
    out.r_max = std::max(ray_rmax, def_rmax);
  }
  return out;
}

bool in_parabolic(const TreeAut& g, const TreeAut& h) {
  TreeIsometry cls = classify(h);
  if (cls.kind == TreeIsometry::Kind::Elliptic)
    throw InputError("in_parabolic requires a hyperbolic h");
  std::vector<Vertex> ray = repelling_ray(h, cls);
  std::set<Vertex> rayset(ray.begin(), ray.end());
  int t_limit = -1;
  for (std::size_t t = 0; t < ray.size(); ++t) {
    if (!g.in_domain(ray[t])) break;
    t_limit = static_cast<int>(t);
  }
  if (t_limit < 4)
    throw InsufficientDepthError(4, t_limit, "repelling ray too short inside the domain");
  int window = std::max(3, t_limit / 3);
  for (int b = t_limit; b >= window - 1 && b >= t_limit - window; --b) {
    bool ok = true;
    for (int t = b - window + 1; t <= b && ok; ++t)
      if (!rayset.count(g.apply(ray[t]))) ok = false;
    if (ok) return true;
  }
  return false;
}

long long scale(const TreeAut& g) {
  TreeIsometry cls = classify(g);
  if (cls.kind == TreeIsometry::Kind::Elliptic) return 1;
  long long q = g.degree() - 1;
  long long s = 1;
  for (int i = 0; i < cls.translation_length; ++i) {
    if (s > std::numeric_limits<long long>::max() / q)
      throw VerificationError("scale value exceeds the 64-bit range");
    s *= q;
  }
  return s;
}

namespace {

// Completes a partial slot assignment into a position permutation,
// matching the unpinned slots in ascending order.
std::vector<int> complete_perm(const std::vector<char>& dom, const std::vector<char>& img,
                               const std::vector<std::pair<char, char>>& pins) {
  std::vector<int> sigma(dom.size(), -1);
  std::vector<bool> used(img.size(), false);
  for (const auto& [a, b] : pins) {
    auto ia = std::find(dom.begin(), dom.end(), a);
    auto ib = std::find(img.begin(), img.end(), b);
    if (ia == dom.end() || ib == img.end())
      throw VerificationError("fold corrector pin outside the slot lists");
    sigma[ia - dom.begin()] = static_cast<int>(ib - img.begin());
    used[ib - img.begin()] = true;
  }
  std::size_t next = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] >= 0) continue;
    while (used[next]) ++next;
    sigma[i] = static_cast<int>(next);
    used[next] = true;
  }
  return sigma;
}

std::vector<char> child_letters(const Vertex& v, int degree) {
  std::vector<char> out;
  for (int c = 0; c < degree; ++c) {
    char ch = static_cast<char>('0' + c);
    if (v.empty() || v.back() != ch) out.push_back(ch);
  }
  return out;
}

bool is_identity_perm(const std::vector<int>& sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != static_cast<int>(i)) return false;
  return true;
}

}  // namespace

FoldResult fold_line(const Line& l, int degree, int depth_budget) {
  validate_line(l, degree);
  if (depth_budget < 1) throw InputError("fold depth must be >= 1");
  Line std_line = standard_line();
  FoldResult out;
  TreeAut cur = TreeAut::identity(degree, depth_budget);
  for (int k = 1; k <= depth_budget; ++k) {
    // pins at the two position-(k-1) vertices of the standard line; for k=1
    // both land on the base and merge into one local permutation
    std::map<Vertex, std::vector<std::pair<char, char>>> pins;
    auto add_pin = [&](int position) {
      Vertex source = cur.apply(l.vertex(position));
      Vertex target = std_line.vertex(position);
      if (source == target) return;
      Vertex anchor = std_line.vertex(position > 0 ? position - 1 : position + 1);
      if (source.size() != target.size() || source.substr(0, source.size() - 1) != anchor)
        throw VerificationError("fold invariant broken: image is not a child of the anchor");
      pins[anchor].push_back({source.back(), target.back()});
    };
    add_pin(k);
    add_pin(-k);
    FoldStep step;
    step.k = k;
    if (!pins.empty()) {
      std::map<Vertex, std::vector<int>> perms;
      for (const auto& [anchor, pin_list] : pins) {
        std::vector<char> slots = child_letters(anchor, degree);
        std::vector<int> sigma = complete_perm(slots, slots, pin_list);
        if (!is_identity_perm(sigma)) perms[anchor] = std::move(sigma);
      }
      if (!perms.empty()) {
        for (const auto& [anchor, _] : perms) {
          if (anchor == std_line.vertex(k - 1)) step.forward_swap = true;
          if (anchor == std_line.vertex(-(k - 1))) step.backward_swap = true;
        }
        TreeAut corrector = build_aut(degree, depth_budget, Vertex{}, nullptr, &perms);
        cur = compose(corrector, cur);
      }
    }
    out.partials.push_back(cur);
    out.steps.push_back(step);
  }
  out.g = cur;
  out.verified = true;
  for (int p = -depth_budget; p <= depth_budget; ++p)
    if (out.g.apply(l.vertex(p)) != std_line.vertex(p)) out.verified = false;
  return out;
}

WitnessResult nonclosed_witness(int degree, int translation_length, int depth, int count) {
  require_degree(degree);
  if (translation_length == 0) throw InputError("translation length must be nonzero");
  if (count < 1) throw InputError("approximant count must be >= 1");
  Line std_line = standard_line();
  WitnessResult out;
  out.h = translation(degree, depth, std_line, translation_length);

  // One chosen child swap on the first branch hanging at each axis vertex.
  auto branch_perms = [&](int from_position) {
    std::map<Vertex, std::vector<int>> perms;
    for (int p = -(depth - 2); p <= depth - 2; ++p) {
      if (p < from_position) continue;
      Vertex v = std_line.vertex(p);
      // at the base both line directions are coded as children
      Vertex line_next = std_line.vertex(p + 1);
      Vertex line_prev = std_line.vertex(p - 1);
      char branch_letter = 0;
      for (char ch : child_letters(v, degree))
        if (v + ch != line_next && v + ch != line_prev) {
          branch_letter = ch;
          break;
        }
      Vertex root = v + branch_letter;
      std::vector<int> sigma(static_cast<std::size_t>(degree - 1));
      for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = static_cast<int>(i);
      std::swap(sigma[0], sigma[1]);
      perms[root] = std::move(sigma);
    }
    return perms;
  };
  auto limit_perms = branch_perms(-(depth - 2));
  out.limit = build_aut(degree, depth, Vertex{}, nullptr, &limit_perms);

  TreeAut h_inv = invert(out.h);
  for (int k = 1; k <= count; ++k) {
    auto gk_perms = branch_perms(-k + 1);
    out.approximants.push_back(build_aut(degree, depth, Vertex{}, nullptr, &gk_perms));
    const TreeAut& gk = out.approximants.back();

    WitnessCheck chk;
    chk.k = k;
    chk.in_contraction_of_h = in_contraction(gk, out.h, depth).verdict;
    chk.agreement_radius_with_limit = agreement_radius(gk, out.limit);
    chk.differs_from_limit = chk.agreement_radius_with_limit < std::min(gk.depth(), out.limit.depth());

    // mirrored approximant: support on the -xi side only, member of U_{h^{-1}}
    std::map<Vertex, std::vector<int>> mirror;
    for (const auto& [root, sigma] : limit_perms) {
      Vertex v = root.substr(0, root.size() - 1);
      int pos;
      if (v.empty())
        pos = 0;
      else if (v[0] == '0')
        pos = static_cast<int>(v.size());
      else
        pos = -static_cast<int>(v.size());
      if (pos <= k - 1) mirror[root] = sigma;
    }
    TreeAut gk_mirror = build_aut(degree, depth, Vertex{}, nullptr, &mirror);
    chk.mirror_in_contraction_of_h_inverse = in_contraction(gk_mirror, h_inv, depth).verdict;
    out.checks.push_back(chk);
  }
  out.limit_in_contraction = in_contraction(out.limit, out.h, depth).verdict;
  out.all_passed = out.limit_in_contraction == Membership::Refuted;
  for (const WitnessCheck& c : out.checks)
    out.all_passed = out.all_passed && c.in_contraction_of_h == Membership::Verified &&
                     c.agreement_radius_with_limit >= c.k - 2 && c.differs_from_limit &&
                     c.mirror_in_contraction_of_h_inverse == Membership::Verified;
  return out;
}

}  // namespace kmcg::treesim
