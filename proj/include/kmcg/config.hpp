#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "kmcg/axis.hpp"
#include "kmcg/caps.hpp"
#include "kmcg/cartan.hpp"
#include "kmcg/errors.hpp"
#include "kmcg/roots.hpp"

namespace kmcg::config {

// Raised when an input falls outside the supported theorem hypotheses
// (reducible, spherical or affine type); analyze() converts it into a
// NotApplicable certificate instead of failing.
struct NotApplicableError : InputError {
  NotApplicableError(std::string reason_, const std::string& what_)
      : InputError(what_), reason(std::move(reason_)) {}
  std::string reason;
};

// Certified triple: alpha and beta contain the two ends of the axis, gamma
// is disjoint from both, and all six pairwise predicates are re-verified
// before emission.
struct HyperbolicConfiguration {
  std::vector<int> word;  // 0-based letters
  roots::Root alpha, beta, gamma;
  struct Relations {
    bool ab_disjoint = false, ag_disjoint = false, bg_disjoint = false;
    bool ab_non_opposite = false, ag_non_opposite = false, bg_non_opposite = false;
  } relations;
  axis::EndSign alpha_backward = axis::EndSign::Undecided;
  axis::EndSign beta_forward = axis::EndSign::Undecided;
  Caps caps_used;
  int gamma_candidates_skipped_inconclusive = 0;
};

// First real root (in deterministic orbit order, words of length <= orbit
// cap) disjoint from both alpha and beta and opposite to neither.  Throws
// ExhaustedError("gamma", ...) when the orbit is exhausted -- the expected
// outcome for spherical and affine inputs.  Candidates whose quadrant
// witness runs out of budget are skipped and counted, never trusted.
roots::Root find_gamma(const roots::RootSystem& rs, const roots::Root& alpha,
                       const roots::Root& beta, int orbit_cap, int radius_cap,
                       int* skipped_inconclusive = nullptr);

HyperbolicConfiguration fundamental_configuration(const roots::RootSystem& rs,
                                                  const std::vector<int>& word, const Caps& caps);
HyperbolicConfiguration fundamental_configuration(const cartan::GeneralizedCartanMatrix& a,
                                                  const std::vector<int>& word, const Caps& caps);

struct ContractionCertificate {
  enum class Kind { TrivialContraction, NotClosed, ProductSplit, NotApplicable, Inconclusive };

  cartan::GeneralizedCartanMatrix input;
  std::vector<int> word;  // 0-based letters
  cartan::TypeClassification classification;
  Kind kind = Kind::Inconclusive;
  std::string reason;  // NotApplicable reason or Inconclusive stage message
  std::optional<HyperbolicConfiguration> configuration;  // NotClosed
  std::string symbolic_conclusion;                       // NotClosed
  std::vector<ContractionCertificate> factors;           // ProductSplit
  Caps caps;
};

const char* kind_name(ContractionCertificate::Kind k);

// Full dispatch: reducible inputs split through the irreducible factors
// (projections of the word commute, and contraction groups of products are
// products of contraction groups); elliptic words are trivial; irreducible
// indefinite hyperbolic words get a configuration and the symbolic
// conclusion; irreducible affine hyperbolic words are out of scope.
ContractionCertificate analyze(const cartan::GeneralizedCartanMatrix& a,
                               const std::vector<int>& word, const Caps& caps);

// Stable key order; byte-identical across repeated runs on the same input.
nlohmann::ordered_json certificate_json(const ContractionCertificate& c);
nlohmann::ordered_json classification_json(const cartan::TypeClassification& t);

}  // namespace kmcg::config
