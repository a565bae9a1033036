#include <doctest.h>

#include "kmcg/cartan.hpp"
#include "kmcg/errors.hpp"
#include "kmcg/report.hpp"
#include "kmcg/weyl.hpp"
#include "oracles.hpp"

using namespace kmcg;
using cartan::CoxeterDiagram;
using cartan::GeneralizedCartanMatrix;
using cartan::Kind;

namespace {

GeneralizedCartanMatrix gcm(std::vector<std::vector<long long>> entries) {
  GeneralizedCartanMatrix a;
  a.rank = static_cast<int>(entries.size());
  a.entries = std::move(entries);
  cartan::validate(a);
  return a;
}

GeneralizedCartanMatrix corpus(const std::string& name) {
  return cartan::parse_gcm(report::slurp(std::string(KMCG_CORPUS_DIR) + "/" + name + ".json"));
}

CoxeterDiagram diagram_from_edges(int rank, std::vector<std::tuple<int, int, int>> edges) {
  CoxeterDiagram d;
  d.rank = rank;
  d.bond.assign(rank, std::vector<int>(rank, 2));
  for (int i = 0; i < rank; ++i) d.bond[i][i] = 1;
  for (auto [i, j, m] : edges) d.bond[i][j] = d.bond[j][i] = m;
  return d;
}

}  // namespace

TEST_CASE("parse_gcm accepts well-formed documents") {
  auto a = cartan::parse_gcm(R"({"cartan": [[2,-1],[-1,2]]})");
  CHECK(a.rank == 2);
  CHECK(a.q == 2);  // default
  CHECK(a.name.empty());

  auto b = cartan::parse_gcm(R"({"name":"x","cartan": [[2,-5],[-1,2]],"q":3})");
  CHECK(b.entries[0][1] == -5);
  CHECK(b.q == 3);
  CHECK(b.name == "x");
}

TEST_CASE("parse_gcm rejects invariant violations with locations") {
  CHECK_THROWS_WITH_AS(cartan::parse_gcm(R"({"cartan": [[2,-1],[0,2]]})"),
                       doctest::Contains("zero-asymmetry at (1,2)/(2,1)"), InputError);
  CHECK_THROWS_WITH_AS(cartan::parse_gcm(R"({"cartan": [[1,-1],[-1,2]]})"),
                       doctest::Contains("diagonal"), InputError);
  CHECK_THROWS_WITH_AS(cartan::parse_gcm(R"({"cartan": [[2,1],[1,2]]})"),
                       doctest::Contains("(1,2)"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm(R"({"cartan": [[2,-1],[-1,2]]} trailing)"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm(R"({"cartan": [[2,-1],[-1,2]], "unknown": 1})"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm(R"({"cartan": [[2,-1.5],[-1,2]]})"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm(R"({"cartan": []})"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm(R"({"cartan": [[2,-1],[-1,2]], "q": 1})"), InputError);
  CHECK_THROWS_AS(cartan::parse_gcm("not json"), InputError);
}

TEST_CASE("coxeter_matrix applies the product rule") {
  auto m3 = cartan::coxeter_matrix(gcm({{2, -1}, {-1, 2}}));
  CHECK(m3.bond[0][1] == 3);
  auto minf = cartan::coxeter_matrix(gcm({{2, -5}, {-1, 2}}));
  CHECK(minf.bond[0][1] == cartan::kInfiniteBond);
  auto m2 = cartan::coxeter_matrix(gcm({{2, 0}, {0, 2}}));
  CHECK(m2.bond[0][1] == 2);
  auto m4 = cartan::coxeter_matrix(gcm({{2, -2}, {-1, 2}}));
  CHECK(m4.bond[0][1] == 4);
  auto m6 = cartan::coxeter_matrix(gcm({{2, -3}, {-1, 2}}));
  CHECK(m6.bond[0][1] == 6);
}

TEST_CASE("coxeter_matrix is invariant under transposing the input") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<long long>> e(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) e[i][i] = 2;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 2) continue;
        e[i][j] = -static_cast<long long>(1 + rng() % 3);
        e[j][i] = -static_cast<long long>(1 + rng() % 3);
      }
    auto a = gcm(e);
    std::vector<std::vector<long long>> t(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[j][i] = e[i][j];
    auto at = gcm(t);
    CHECK(cartan::coxeter_matrix(a).bond == cartan::coxeter_matrix(at).bond);
  }
}

TEST_CASE("components split at bonds below 3") {
  auto d1 = cartan::coxeter_matrix(gcm({{2, -1}, {-1, 2}}));
  CHECK(cartan::components(d1) == std::vector<std::vector<int>>{{0, 1}});
  auto d2 = cartan::coxeter_matrix(gcm({{2, 0}, {0, 2}}));
  CHECK(cartan::components(d2) == std::vector<std::vector<int>>{{0}, {1}});
  auto d3 = cartan::coxeter_matrix(corpus("block_a2_a1t"));
  CHECK(cartan::components(d3) == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
}

TEST_CASE("classification of the shipped corpus") {
  auto kind_of = [](const std::string& name) {
    auto t = cartan::classify_type(cartan::coxeter_matrix(corpus(name)));
    REQUIRE(t.components.size() == 1);
    return std::pair{t.components[0].kind, t.components[0].label};
  };
  CHECK(kind_of("a2") == std::pair{Kind::Spherical, std::string("A2")});
  CHECK(kind_of("m_minus1") == std::pair{Kind::Spherical, std::string("A2")});
  CHECK(kind_of("m_minus2") == std::pair{Kind::Spherical, std::string("B2")});
  CHECK(kind_of("m_minus3") == std::pair{Kind::Spherical, std::string("G2")});
  CHECK(kind_of("b3") == std::pair{Kind::Spherical, std::string("B3")});
  CHECK(kind_of("d4") == std::pair{Kind::Spherical, std::string("D4")});
  CHECK(kind_of("f4") == std::pair{Kind::Spherical, std::string("F4")});
  CHECK(kind_of("a1t") == std::pair{Kind::Affine, std::string("A1~")});
  CHECK(kind_of("m_minus5") == std::pair{Kind::Affine, std::string("A1~")});
  CHECK(kind_of("m_minus6") == std::pair{Kind::Affine, std::string("A1~")});
  CHECK(kind_of("m_minus10") == std::pair{Kind::Affine, std::string("A1~")});
  CHECK(kind_of("affine_a2t") == std::pair{Kind::Affine, std::string("A2~")});
  CHECK(kind_of("affine_c2t") == std::pair{Kind::Affine, std::string("C2~")});
  CHECK(kind_of("tri334").first == Kind::Indefinite);
  CHECK(kind_of("right_angled").first == Kind::Indefinite);

  auto block = cartan::classify_type(cartan::coxeter_matrix(corpus("block_a2_tri334")));
  REQUIRE(block.components.size() == 2);
  CHECK_FALSE(block.irreducible);
  CHECK(block.components[0].label == "A2");
  CHECK(block.components[1].kind == Kind::Indefinite);
}

TEST_CASE("classification matches the exceptional and affine tables") {
  auto label_of = [](const CoxeterDiagram& d) {
    auto t = cartan::classify_type(d);
    REQUIRE(t.components.size() == 1);
    return t.components[0].label;
  };
  // E6: chain of five with a branch on the middle vertex
  CHECK(label_of(diagram_from_edges(6, {{0, 1, 3}, {1, 2, 3}, {2, 3, 3}, {3, 4, 3}, {2, 5, 3}})) ==
        "E6");
  CHECK(label_of(diagram_from_edges(
            8, {{0, 1, 3}, {1, 2, 3}, {2, 3, 3}, {3, 4, 3}, {4, 5, 3}, {5, 6, 3}, {2, 7, 3}})) ==
        "E8");
  // affine E8: chain of eight, branch on the third vertex
  CHECK(label_of(diagram_from_edges(9, {{0, 1, 3},
                                        {1, 2, 3},
                                        {2, 3, 3},
                                        {3, 4, 3},
                                        {4, 5, 3},
                                        {5, 6, 3},
                                        {6, 7, 3},
                                        {2, 8, 3}})) == "E8~");
  // affine B3: fork, then a 4-bond
  CHECK(label_of(diagram_from_edges(4, {{0, 2, 3}, {1, 2, 3}, {2, 3, 4}})) == "B3~");
  // affine D4: star with four leaves
  CHECK(label_of(diagram_from_edges(5, {{0, 2, 3}, {1, 2, 3}, {3, 2, 3}, {4, 2, 3}})) == "D4~");
  // affine F4 and G2
  CHECK(label_of(diagram_from_edges(5, {{0, 1, 3}, {1, 2, 3}, {2, 3, 4}, {3, 4, 3}})) == "F4~");
  CHECK(label_of(diagram_from_edges(3, {{0, 1, 3}, {1, 2, 6}})) == "G2~");
  // a labeled triangle that is in no table
  CHECK(label_of(diagram_from_edges(3, {{0, 1, 3}, {1, 2, 4}, {0, 2, 3}})).empty());
}

TEST_CASE("classification agrees with the cosine-form signature oracle") {
  for (const char* name : {"a2", "m_minus2", "m_minus3", "b3", "d4", "f4", "a1t", "m_minus5",
                           "affine_a2t", "affine_c2t", "tri334", "right_angled"}) {
    auto d = cartan::coxeter_matrix(corpus(name));
    auto t = cartan::classify_type(d);
    REQUIRE(t.components.size() == 1);
    auto sig = oracles::gram_signature(d);
    switch (t.components[0].kind) {
      case Kind::Spherical:
        CHECK(sig.positive == d.rank);
        break;
      case Kind::Affine:
        CHECK(sig.zero == 1);
        CHECK(sig.negative == 0);
        break;
      case Kind::Indefinite:
        CHECK(sig.negative > 0);
        break;
    }
  }
  // the (3,3,4) triangle: angle sum below pi, so the form is indefinite
  auto tri = cartan::coxeter_matrix(corpus("tri334"));
  CHECK(oracles::gram_signature(tri).negative == 1);
}

TEST_CASE("rank-2 components are never indefinite") {
  for (long long m : {-1, -2, -3, -4, -5, -9}) {
    auto t = cartan::classify_type(cartan::coxeter_matrix(gcm({{2, m}, {-1, 2}})));
    CHECK(t.components[0].kind != Kind::Indefinite);
  }
}

TEST_CASE("spherical classification matches finiteness of W (rank <= 3)") {
  for (const char* name : {"a2", "m_minus2", "m_minus3", "b3", "a1t", "affine_a2t", "tri334",
                           "right_angled", "affine_c2t"}) {
    auto a = corpus(name);
    weyl::WeylGroup w(a);
    bool spherical = w.classification().components.size() == 1 &&
                     w.classification().components[0].kind == Kind::Spherical;
    auto size = w.finite_size(100000);
    CHECK(spherical == size.has_value());
  }
}

TEST_CASE("main_theorem_applicable names the failing condition") {
  auto ok = cartan::main_theorem_applicable(corpus("tri334"));
  CHECK(ok.applicable);
  CHECK(ok.reason.empty());
  auto aff = cartan::main_theorem_applicable(corpus("m_minus5"));
  CHECK_FALSE(aff.applicable);
  CHECK(aff.reason == "affine");
  auto sph = cartan::main_theorem_applicable(corpus("a2"));
  CHECK_FALSE(sph.applicable);
  CHECK(sph.reason == "spherical");
  auto red = cartan::main_theorem_applicable(corpus("block_a2_a1t"));
  CHECK_FALSE(red.applicable);
  CHECK(red.reason == "reducible");
  auto tri = cartan::main_theorem_applicable(gcm({{2, -1, -1}, {-1, 2, -1}, {-1, -2, 2}}));
  CHECK(tri.applicable);
}

TEST_CASE("classification is deterministic") {
  auto d = cartan::coxeter_matrix(corpus("block_a2_tri334"));
  auto t1 = cartan::classify_type(d);
  auto t2 = cartan::classify_type(d);
  REQUIRE(t1.components.size() == t2.components.size());
  for (std::size_t i = 0; i < t1.components.size(); ++i) {
    CHECK(t1.components[i].indices == t2.components[i].indices);
    CHECK(t1.components[i].kind == t2.components[i].kind);
    CHECK(t1.components[i].label == t2.components[i].label);
  }
}
