#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace kmcg::cartan {

// Square integer matrix with 2s on the diagonal, non-positive off-diagonal
// entries and a symmetric zero pattern.  `q` is the residue field size used
// by downstream consumers (default 2, the smallest locally finite case).
struct GeneralizedCartanMatrix {
  int rank = 0;
  std::vector<std::vector<long long>> entries;
  std::string name;  // empty when absent
  int q = 2;
};

// Bond orders live in {1,2,3,4,6,inf}; infinity is kept as a sentinel so that
// "m >= 3" tests behave naturally.
constexpr int kInfiniteBond = std::numeric_limits<int>::max();

struct CoxeterDiagram {
  int rank = 0;
  std::vector<std::vector<int>> bond;  // symmetric, bond[i][i] == 1
};

enum class Kind { Spherical, Affine, Indefinite };

struct Component {
  std::vector<int> indices;  // 0-based, ascending
  Kind kind = Kind::Indefinite;
  std::string label;  // "A2", "A1~", ...; empty for Indefinite
};

struct TypeClassification {
  std::vector<Component> components;  // ordered by least index
  bool irreducible = false;
};

struct Applicability {
  bool applicable = false;
  std::string reason;  // "reducible" | "spherical" | "affine"; empty when applicable
};

// Throws InputError on malformed documents or invariant violations, with
// 1-based index locations in the message.
GeneralizedCartanMatrix parse_gcm(std::string_view document);

// Validates the invariants of an in-memory matrix (same checks as parse_gcm).
void validate(const GeneralizedCartanMatrix& a);

// p = a_ij * a_ji maps to the bond order: 0->2, 1->3, 2->4, 3->6, >=4->inf.
CoxeterDiagram coxeter_matrix(const GeneralizedCartanMatrix& a);

// Connected components of the graph with an edge wherever bond >= 3,
// ordered by least index.
std::vector<std::vector<int>> components(const CoxeterDiagram& d);

// Matches every component against the crystallographic spherical and affine
// diagram tables by labeled-graph isomorphism; unmatched components are
// Indefinite.
TypeClassification classify_type(const CoxeterDiagram& d);

// True iff the diagram is connected and its single component is Indefinite.
Applicability main_theorem_applicable(const GeneralizedCartanMatrix& a);

const char* kind_name(Kind k);

// Restriction of a matrix to a subset of its index set (ascending indices).
GeneralizedCartanMatrix restrict(const GeneralizedCartanMatrix& a, const std::vector<int>& indices);

}  // namespace kmcg::cartan
