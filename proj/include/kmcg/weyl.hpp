#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmcg/cartan.hpp"
#include "kmcg/intmat.hpp"

namespace kmcg::weyl {

// Group element as a word in the generators together with its exact integer
// action on the root lattice (and on the coroot lattice, which is needed for
// pairings).  The geometric representation is faithful, so equality of
// elements is equality of matrices.
struct WeylElement {
  std::vector<int> word;  // 0-based generator letters, as built
  Mat mat;                // action on root coordinates
  Mat dual;               // action on coroot coordinates

  friend bool operator==(const WeylElement& x, const WeylElement& y) { return x.mat == y.mat; }
};

enum class Isometry { Elliptic, Hyperbolic };

class WeylGroup {
 public:
  explicit WeylGroup(cartan::GeneralizedCartanMatrix a);

  int rank() const { return a_.rank; }
  const cartan::GeneralizedCartanMatrix& gcm() const { return a_; }
  const cartan::CoxeterDiagram& diagram() const { return diagram_; }
  const cartan::TypeClassification& classification() const { return cls_; }

  WeylElement identity() const;
  WeylElement generator(int i) const;  // 0-based; throws InputError when out of range
  WeylElement from_word(std::span<const int> letters) const;
  WeylElement multiply(const WeylElement& u, const WeylElement& v) const;
  WeylElement invert(const WeylElement& u) const;
  WeylElement power(const WeylElement& u, long long k) const;

  // Smallest-descent peeling; also the source of the canonical reduced word.
  int length(const WeylElement& w) const;
  std::vector<int> canonical_word(const WeylElement& w) const;

  // N(w) = { alpha > 0 : w(alpha) < 0 }, as root coordinates, sorted.
  std::vector<Vec> inversion_set(const WeylElement& w) const;

  // Least k <= B(rank) with mat^k = 1, where B is the maximal finite order of
  // an integer matrix of that dimension; nullopt = infinite order.
  std::optional<long long> order(const WeylElement& w) const;

  Isometry classify_isometry(const WeylElement& w) const;

  const Mat& gen_mat(int i) const { return gen_[i]; }
  const Mat& gen_dual(int i) const { return gen_dual_[i]; }

  // Cayley ball enumerated breadth-first (length ascending, letters ascending
  // within a level); deterministic, cached, thread-safe.
  struct BallElem {
    std::vector<int> word;  // discovery word, reduced
    Mat mat;
    Mat inv;
    int length;
  };
  struct Ball {
    int radius = 0;
    std::vector<BallElem> elems;
    bool closed = false;  // group exhausted before the radius bound
  };
  std::shared_ptr<const Ball> ball(int radius) const;

  // |W| when smaller than cap, found by BFS closure; nullopt otherwise.
  std::optional<std::size_t> finite_size(std::size_t cap) const;

 private:
  cartan::GeneralizedCartanMatrix a_;
  cartan::CoxeterDiagram diagram_;
  cartan::TypeClassification cls_;
  std::vector<Mat> gen_, gen_dual_;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const Ball> cache_;
};

// Maximal order of a finite-order integer matrix in dimension n: the largest
// lcm(m_1..m_r) over distinct m_i with sum of totients phi(m_i) <= n.
long long max_finite_order(int n);

// Shared word syntax: whitespace-separated 1-based generator indices.
std::vector<int> parse_word(std::string_view text, int rank);
std::string format_word(std::span<const int> letters0);

}  // namespace kmcg::weyl
