#include "kmcg/weyl.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "kmcg/errors.hpp"

namespace kmcg::weyl {

WeylGroup::WeylGroup(cartan::GeneralizedCartanMatrix a) : a_(std::move(a)) {
  cartan::validate(a_);
  diagram_ = cartan::coxeter_matrix(a_);
  cls_ = cartan::classify_type(diagram_);
  int n = a_.rank;
  gen_.reserve(n);
  gen_dual_.reserve(n);
  for (int i = 0; i < n; ++i) {
    // s_i(alpha_j) = alpha_j - a_ij alpha_i ; s_i(alpha_j^) = alpha_j^ - a_ji alpha_i^
    Mat m = Mat::identity(n), d = Mat::identity(n);
    for (int j = 0; j < n; ++j) {
      m.at(i, j) -= a_.entries[i][j];
      d.at(i, j) -= a_.entries[j][i];
    }
    gen_.push_back(std::move(m));
    gen_dual_.push_back(std::move(d));
  }
}

WeylElement WeylGroup::identity() const {
  return {{}, Mat::identity(a_.rank), Mat::identity(a_.rank)};
}

WeylElement WeylGroup::generator(int i) const {
  if (i < 0 || i >= a_.rank)
    throw InputError("generator index " + std::to_string(i + 1) + " out of range 1.." +
                     std::to_string(a_.rank));
  return {{i}, gen_[i], gen_dual_[i]};
}

WeylElement WeylGroup::from_word(std::span<const int> letters) const {
  WeylElement w = identity();
  for (int i : letters) {
    if (i < 0 || i >= a_.rank)
      throw InputError("generator index " + std::to_string(i + 1) + " out of range 1.." +
                       std::to_string(a_.rank));
    w.word.push_back(i);
    w.mat = w.mat * gen_[i];
    w.dual = w.dual * gen_dual_[i];
  }
  return w;
}

WeylElement WeylGroup::multiply(const WeylElement& u, const WeylElement& v) const {
  WeylElement w;
  w.word = u.word;
  w.word.insert(w.word.end(), v.word.begin(), v.word.end());
  w.mat = u.mat * v.mat;
  w.dual = u.dual * v.dual;
  return w;
}

WeylElement WeylGroup::invert(const WeylElement& u) const {
  std::vector<int> rev(u.word.rbegin(), u.word.rend());
  return from_word(rev);  // generators are involutions
}

WeylElement WeylGroup::power(const WeylElement& u, long long k) const {
  WeylElement base = k < 0 ? invert(u) : u;
  long long e = k < 0 ? -k : k;
  WeylElement acc = identity();
  for (long long i = 0; i < e; ++i) acc = multiply(acc, base);
  return acc;
}

namespace {

// True when the column vector w(alpha_i) is a negative root.
bool column_negative(const Mat& m, int i) {
  bool some = false;
  for (int r = 0; r < m.n; ++r) {
    if (m.at(r, i) > 0) return false;
    if (m.at(r, i) < 0) some = true;
  }
  return some;
}

}  // namespace

std::vector<int> WeylGroup::canonical_word(const WeylElement& w) const {
  Mat m = w.mat;
  std::vector<int> peeled;
  while (!m.is_identity()) {
    int descent = -1;
    for (int i = 0; i < a_.rank; ++i)
      if (column_negative(m, i)) {
        descent = i;
        break;
      }
    if (descent < 0)
      throw VerificationError("non-identity Weyl matrix without a descent");
    m = m * gen_[descent];
    peeled.push_back(descent);
  }
  return {peeled.rbegin(), peeled.rend()};
}

int WeylGroup::length(const WeylElement& w) const {
  return static_cast<int>(canonical_word(w).size());
}

std::vector<Vec> WeylGroup::inversion_set(const WeylElement& w) const {
  std::vector<int> red = canonical_word(w);
  int l = static_cast<int>(red.size());
  std::vector<Vec> out;
  out.reserve(l);
  for (int k = 0; k < l; ++k) {
    Vec v(static_cast<std::size_t>(a_.rank));
    v[red[k]] = 1;
    for (int j = k + 1; j < l; ++j) v = gen_[red[j]].apply(v);
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw VerificationError("inversion set of a reduced word has a repeated root");
  return out;
}

std::optional<long long> WeylGroup::order(const WeylElement& w) const {
  long long bound = max_finite_order(a_.rank);
  Mat acc = w.mat;
  for (long long k = 1; k <= bound; ++k) {
    if (acc.is_identity()) return k;
    acc = acc * w.mat;
  }
  return std::nullopt;
}

Isometry WeylGroup::classify_isometry(const WeylElement& w) const {
  return order(w).has_value() ? Isometry::Elliptic : Isometry::Hyperbolic;
}

std::shared_ptr<const WeylGroup::Ball> WeylGroup::ball(int radius) const {
  if (radius < 0) throw InputError("ball radius must be >= 0");
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_ && (cache_->radius >= radius || cache_->closed)) return cache_;
  }
  auto b = std::make_shared<Ball>();
  b->radius = radius;
  std::map<Mat, int> seen;
  WeylElement e = identity();
  b->elems.push_back({{}, e.mat, e.mat, 0});
  seen.emplace(e.mat, 0);
  std::size_t level_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    std::size_t level_end = b->elems.size();
    for (std::size_t p = level_begin; p < level_end; ++p)
      for (int i = 0; i < a_.rank; ++i) {
        Mat m = b->elems[p].mat * gen_[i];
        if (seen.count(m)) continue;
        Mat inv = gen_[i] * b->elems[p].inv;
        std::vector<int> word = b->elems[p].word;
        word.push_back(i);
        seen.emplace(m, static_cast<int>(b->elems.size()));
        b->elems.push_back({std::move(word), std::move(m), std::move(inv), len});
      }
    if (b->elems.size() == level_end) {
      b->closed = true;  // the whole group fits inside the requested radius
      break;
    }
    level_begin = level_end;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (!cache_ || (cache_->radius < radius && !cache_->closed)) cache_ = b;
  return cache_;
}

std::optional<std::size_t> WeylGroup::finite_size(std::size_t cap) const {
  std::map<Mat, int> seen;
  std::vector<Mat> frontier{Mat::identity(a_.rank)};
  seen.emplace(frontier[0], 0);
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const Mat& m : frontier)
      for (int i = 0; i < a_.rank; ++i) {
        Mat t = m * gen_[i];
        if (seen.count(t)) continue;
        seen.emplace(t, 0);
        if (seen.size() > cap) return std::nullopt;
        next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return seen.size();
}

long long max_finite_order(int n) {
  if (n < 1) throw InputError("dimension must be positive");
  // Euler totients up to the largest m with phi(m) <= n (phi(m) >= sqrt(m/2)).
  int mmax = 2 * n * n + 2;
  std::vector<int> phi(mmax + 1);
  for (int i = 0; i <= mmax; ++i) phi[i] = i;
  for (int p = 2; p <= mmax; ++p)
    if (phi[p] == p)  // p prime
      for (int k = p; k <= mmax; k += p) phi[k] -= phi[k] / p;
  std::vector<int> usable;
  for (int m = 2; m <= mmax; ++m)
    if (phi[m] <= n) usable.push_back(m);
  long long best = 1;
  auto dfs = [&](auto&& self, std::size_t idx, int budget, long long lcm) -> void {
    best = std::max(best, lcm);
    for (std::size_t t = idx; t < usable.size(); ++t) {
      int m = usable[t];
      if (phi[m] > budget) continue;
      long long g = std::gcd<long long>(lcm, m);
      self(self, t + 1, budget - phi[m], lcm / g * m);
    }
  };
  dfs(dfs, 0, n, 1);
  return best;
}

std::vector<int> parse_word(std::string_view text, int rank) {
  std::vector<int> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      if (v < 1 || v > rank)
        throw InputError("word letter " + tok + " out of range 1.." + std::to_string(rank));
      out.push_back(v - 1);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("word letter \"" + tok + "\" is not an integer");
    }
  }
  return out;
}

std::string format_word(std::span<const int> letters0) {
  std::string s;
  for (std::size_t i = 0; i < letters0.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(letters0[i] + 1);
  }
  return s;
}

}  // namespace kmcg::weyl
