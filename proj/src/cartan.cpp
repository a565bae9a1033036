#include "kmcg/cartan.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

#include "kmcg/errors.hpp"

namespace kmcg::cartan {

namespace {

using nlohmann::json;

std::string at(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

void validate(const GeneralizedCartanMatrix& a) {
  if (a.rank <= 0) throw InputError("cartan matrix must have positive rank");
  if (static_cast<int>(a.entries.size()) != a.rank)
    throw InputError("cartan matrix row count does not match rank");
  for (int i = 0; i < a.rank; ++i) {
    if (static_cast<int>(a.entries[i].size()) != a.rank)
      throw InputError("cartan matrix row " + std::to_string(i + 1) + " is not square");
    if (a.entries[i][i] != 2)
      throw InputError("diagonal entry must be 2 at " + at(i, i));
  }
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) {
      if (i == j) continue;
      if (a.entries[i][j] > 0)
        throw InputError("off-diagonal entry must be <= 0 at " + at(i, j));
      if ((a.entries[i][j] == 0) != (a.entries[j][i] == 0))
        throw InputError("zero-asymmetry at " + at(i, j) + "/" + at(j, i));
    }
  if (a.q < 2) throw InputError("q must be an integer >= 2");
}

GeneralizedCartanMatrix parse_gcm(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);  // rejects trailing data
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("input document must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "cartan" && key != "name" && key != "q")
      throw InputError("unknown key \"" + key + "\" in input document");
  if (!doc.contains("cartan")) throw InputError("missing key \"cartan\"");

  GeneralizedCartanMatrix a;
  const json& rows = doc["cartan"];
  if (!rows.is_array() || rows.empty()) throw InputError("\"cartan\" must be a non-empty array");
  a.rank = static_cast<int>(rows.size());
  a.entries.resize(a.rank);
  for (int i = 0; i < a.rank; ++i) {
    if (!rows[i].is_array()) throw InputError("\"cartan\" row " + std::to_string(i + 1) + " must be an array");
    for (const json& cell : rows[i]) {
      if (!cell.is_number_integer())
        throw InputError("\"cartan\" entries must be integers (row " + std::to_string(i + 1) + ")");
      a.entries[i].push_back(cell.get<long long>());
    }
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("\"name\" must be a string");
    a.name = doc["name"].get<std::string>();
  }
  if (doc.contains("q")) {
    if (!doc["q"].is_number_integer()) throw InputError("\"q\" must be an integer");
    a.q = doc["q"].get<int>();
  }
  validate(a);
  return a;
}

CoxeterDiagram coxeter_matrix(const GeneralizedCartanMatrix& a) {
  CoxeterDiagram d;
  d.rank = a.rank;
  d.bond.assign(a.rank, std::vector<int>(a.rank, 2));
  for (int i = 0; i < a.rank; ++i) {
    d.bond[i][i] = 1;
    for (int j = i + 1; j < a.rank; ++j) {
      long long p = a.entries[i][j] * a.entries[j][i];
      int m;
      switch (p) {
        case 0: m = 2; break;
        case 1: m = 3; break;
        case 2: m = 4; break;
        case 3: m = 6; break;
        default: m = kInfiniteBond; break;
      }
      d.bond[i][j] = d.bond[j][i] = m;
    }
  }
  return d;
}

std::vector<std::vector<int>> components(const CoxeterDiagram& d) {
  std::vector<int> comp(d.rank, -1);
  int next = 0;
  for (int s = 0; s < d.rank; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < d.rank; ++u)
        if (comp[u] < 0 && d.bond[v][u] >= 3) {
          comp[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  std::vector<std::vector<int>> out(next);
  for (int v = 0; v < d.rank; ++v) out[comp[v]].push_back(v);
  return out;  // BFS seeds run in index order, so components sort by least index
}

namespace {

using Bonds = std::vector<std::vector<int>>;

Bonds blank(int k) {
  Bonds b(k, std::vector<int>(k, 2));
  for (int i = 0; i < k; ++i) b[i][i] = 1;
  return b;
}

void edge(Bonds& b, int i, int j, int m) { b[i][j] = b[j][i] = m; }

Bonds path(int k, const std::vector<int>& labels) {
  Bonds b = blank(k);
  for (int i = 0; i + 1 < k; ++i) edge(b, i, i + 1, labels[i]);
  return b;
}

Bonds plain_path(int k) { return path(k, std::vector<int>(k - 1, 3)); }

// Families of the crystallographic classification tables, instantiated at a
// given size.  The Coxeter diagram does not distinguish B_n from C_n.
std::vector<std::pair<std::string, Bonds>> table_diagrams(int k) {
  std::vector<std::pair<std::string, Bonds>> out;
  auto add = [&](std::string label, Bonds b) { out.emplace_back(std::move(label), std::move(b)); };

  // spherical
  add("A" + std::to_string(k), plain_path(k));
  if (k == 2) {
    add("B2", path(2, {4}));
    add("G2", path(2, {6}));
  }
  if (k >= 3) {
    std::vector<int> lab(k - 1, 3);
    lab[k - 2] = 4;
    add("B" + std::to_string(k), path(k, lab));
  }
  if (k >= 4) {
    Bonds b = blank(k);
    for (int i = 0; i + 1 < k - 1; ++i) edge(b, i, i + 1, 3);
    edge(b, k - 3, k - 1, 3);  // fork at the far end
    add("D" + std::to_string(k), b);
  }
  if (k >= 6 && k <= 8) {
    Bonds b = blank(k);
    for (int i = 0; i + 1 < k - 1; ++i) edge(b, i, i + 1, 3);
    edge(b, 2, k - 1, 3);  // branch node on the third chain vertex
    add("E" + std::to_string(k), b);
  }
  if (k == 4) add("F4", path(4, {3, 4, 3}));

  // affine
  if (k == 2) add("A1~", path(2, {kInfiniteBond}));
  if (k >= 3) {
    Bonds b = plain_path(k);
    edge(b, 0, k - 1, 3);  // cycle
    add("A" + std::to_string(k - 1) + "~", b);
  }
  if (k >= 3) {
    std::vector<int> lab(k - 1, 3);
    lab[0] = 4;
    lab[k - 2] = 4;
    add("C" + std::to_string(k - 1) + "~", path(k, lab));
  }
  if (k >= 4) {
    Bonds b = blank(k);
    for (int i = 1; i + 1 < k; ++i) edge(b, i, i + 1, 3);
    edge(b, 0, 2, 3);          // fork sharing node 2 with node 1
    edge(b, k - 2, k - 1, 4);  // 4-bond at the far end
    add("B" + std::to_string(k - 1) + "~", b);
  }
  if (k >= 5) {
    Bonds b = blank(k);
    for (int i = 1; i + 1 < k - 1; ++i) edge(b, i, i + 1, 3);
    edge(b, 0, 2, 3);      // fork at one end
    edge(b, k - 1, k - 3, 3);  // fork at the other
    add("D" + std::to_string(k - 1) + "~", b);
  }
  if (k == 7) {
    Bonds b = blank(7);  // star with three arms of length 2
    edge(b, 0, 1, 3);
    edge(b, 1, 2, 3);
    edge(b, 3, 4, 3);
    edge(b, 4, 2, 3);
    edge(b, 5, 6, 3);
    edge(b, 6, 2, 3);
    add("E6~", b);
  }
  if (k == 8) {
    Bonds b = blank(8);  // chain of 7 with a branch at the middle vertex
    for (int i = 0; i < 6; ++i) edge(b, i, i + 1, 3);
    edge(b, 3, 7, 3);
    add("E7~", b);
  }
  if (k == 9) {
    Bonds b = blank(9);  // chain of 8 with a branch on the third vertex
    for (int i = 0; i < 7; ++i) edge(b, i, i + 1, 3);
    edge(b, 2, 8, 3);
    add("E8~", b);
  }
  if (k == 5) add("F4~", path(5, {3, 3, 4, 3}));
  if (k == 3) add("G2~", path(3, {3, 6}));
  return out;
}

// Backtracking labeled-graph isomorphism.  Sizes here are small (component
// ranks), and the bond-multiset pruning keeps the search shallow.
bool isomorphic(const Bonds& x, const Bonds& y) {
  int k = static_cast<int>(x.size());
  if (static_cast<int>(y.size()) != k) return false;
  auto profile = [k](const Bonds& b, int v) {
    std::vector<int> p;
    for (int u = 0; u < k; ++u)
      if (u != v) p.push_back(b[v][u]);
    std::sort(p.begin(), p.end());
    return p;
  };
  std::vector<std::vector<int>> px(k), py(k);
  for (int v = 0; v < k; ++v) {
    px[v] = profile(x, v);
    py[v] = profile(y, v);
  }
  std::vector<int> map(k, -1), used(k, 0);
  auto dfs = [&](auto&& self, int v) -> bool {
    if (v == k) return true;
    for (int u = 0; u < k; ++u) {
      if (used[u] || px[v] != py[u]) continue;
      bool ok = true;
      for (int w = 0; w < v && ok; ++w)
        if (x[v][w] != y[u][map[w]]) ok = false;
      if (!ok) continue;
      map[v] = u;
      used[u] = 1;
      if (self(self, v + 1)) return true;
      used[u] = 0;
      map[v] = -1;
    }
    return false;
  };
  return dfs(dfs, 0);
}

}  // namespace

TypeClassification classify_type(const CoxeterDiagram& d) {
  TypeClassification out;
  auto comps = components(d);
  out.irreducible = comps.size() == 1;
  for (const auto& idx : comps) {
    int k = static_cast<int>(idx.size());
    Bonds sub(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub[i][j] = d.bond[idx[i]][idx[j]];
    Component c;
    c.indices = idx;
    c.kind = Kind::Indefinite;
    for (const auto& [label, cand] : table_diagrams(k)) {
      if (isomorphic(sub, cand)) {
        c.label = label;
        c.kind = label.back() == '~' ? Kind::Affine : Kind::Spherical;
        break;
      }
    }
    if (k <= 2 && c.kind == Kind::Indefinite)
      throw VerificationError("rank <= 2 component escaped the classification tables");
    out.components.push_back(std::move(c));
  }
  return out;
}

Applicability main_theorem_applicable(const GeneralizedCartanMatrix& a) {
  validate(a);
  TypeClassification t = classify_type(coxeter_matrix(a));
  if (t.components.size() != 1) return {false, "reducible"};
  switch (t.components[0].kind) {
    case Kind::Spherical: return {false, "spherical"};
    case Kind::Affine: return {false, "affine"};
    case Kind::Indefinite: return {true, ""};
  }
  return {false, "reducible"};  // unreachable
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Spherical: return "spherical";
    case Kind::Affine: return "affine";
    case Kind::Indefinite: return "indefinite";
  }
  return "?";
}

GeneralizedCartanMatrix restrict(const GeneralizedCartanMatrix& a, const std::vector<int>& indices) {
  GeneralizedCartanMatrix r;
  r.rank = static_cast<int>(indices.size());
  r.name = a.name;
  r.q = a.q;
  r.entries.assign(r.rank, std::vector<long long>(r.rank));
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < r.rank; ++j) r.entries[i][j] = a.entries[indices[i]][indices[j]];
  return r;
}

}  // namespace kmcg::cartan
