#include "kmcg/config.hpp"

#include <algorithm>
#include <limits>

#include "kmcg/errors.hpp"

namespace kmcg::config {

using roots::Root;
using roots::RootSystem;

Root find_gamma(const RootSystem& rs, const Root& alpha, const Root& beta, int orbit_cap,
                int radius_cap, int* skipped_inconclusive) {
  if (alpha == rs.negate(beta)) throw InputError("find_gamma requires alpha != -beta");
  if (!rs.disjoint(alpha, beta, radius_cap))
    throw InputError("find_gamma requires disjoint(alpha, beta)");
  int skipped = 0;
  for (const Root& gamma : rs.orbit(orbit_cap)) {
    if (gamma == rs.negate(alpha) || gamma == rs.negate(beta)) continue;
    try {
      if (rs.disjoint(gamma, alpha, radius_cap) && rs.disjoint(gamma, beta, radius_cap)) {
        if (skipped_inconclusive) *skipped_inconclusive = skipped;
        return gamma;
      }
    } catch (const ExhaustedError&) {
      ++skipped;  // budget ran out for this candidate; skipping is sound
    }
  }
  if (skipped_inconclusive) *skipped_inconclusive = skipped;
  throw ExhaustedError("gamma", orbit_cap,
                       "root orbit of length " + std::to_string(orbit_cap) +
                           " exhausted without a third disjoint root (" +
                           std::to_string(skipped) + " candidates inconclusive)");
}

HyperbolicConfiguration fundamental_configuration(const RootSystem& rs,
                                                  const std::vector<int>& word, const Caps& caps) {
  const weyl::WeylGroup& g = rs.group();
  cartan::Applicability app = cartan::main_theorem_applicable(g.gcm());
  if (!app.applicable)
    throw NotApplicableError(app.reason, "ambient type is " + app.reason +
                                             "; the construction requires an irreducible "
                                             "indefinite type");
  weyl::WeylElement w = g.from_word(word);
  if (g.order(w).has_value()) throw InputError("elliptic");

  axis::CertifiedPair pair = axis::pick_alpha_beta(rs, w, caps);
  HyperbolicConfiguration cfg;
  cfg.word = word;
  cfg.alpha = pair.alpha;
  cfg.beta = pair.beta;
  cfg.gamma = find_gamma(rs, pair.alpha, pair.beta, caps.orbit_cap, caps.bfs_radius,
                         &cfg.gamma_candidates_skipped_inconclusive);
  cfg.caps_used = caps;

  // Re-verify the six predicates and the two end certificates before
  // emitting anything.
  cfg.relations.ab_disjoint = rs.disjoint(cfg.alpha, cfg.beta, caps.bfs_radius);
  cfg.relations.ag_disjoint = rs.disjoint(cfg.alpha, cfg.gamma, caps.bfs_radius);
  cfg.relations.bg_disjoint = rs.disjoint(cfg.beta, cfg.gamma, caps.bfs_radius);
  cfg.relations.ab_non_opposite = !(cfg.alpha == rs.negate(cfg.beta));
  cfg.relations.ag_non_opposite = !(cfg.alpha == rs.negate(cfg.gamma));
  cfg.relations.bg_non_opposite = !(cfg.beta == rs.negate(cfg.gamma));
  cfg.alpha_backward = axis::end_sign(rs, cfg.alpha, w, axis::Direction::Backward, caps.power_cap);
  cfg.beta_forward = axis::end_sign(rs, cfg.beta, w, axis::Direction::Forward, caps.power_cap);
  bool ok = cfg.relations.ab_disjoint && cfg.relations.ag_disjoint && cfg.relations.bg_disjoint &&
            cfg.relations.ab_non_opposite && cfg.relations.ag_non_opposite &&
            cfg.relations.bg_non_opposite &&
            cfg.alpha_backward == axis::EndSign::EventuallyInside &&
            cfg.beta_forward == axis::EndSign::EventuallyInside;
  if (!ok) throw VerificationError("configuration failed predicate re-verification");
  return cfg;
}

HyperbolicConfiguration fundamental_configuration(const cartan::GeneralizedCartanMatrix& a,
                                                  const std::vector<int>& word, const Caps& caps) {
  weyl::WeylGroup g(a);
  RootSystem rs(g);
  return fundamental_configuration(rs, word, caps);
}

const char* kind_name(ContractionCertificate::Kind k) {
  using K = ContractionCertificate::Kind;
  switch (k) {
    case K::TrivialContraction: return "trivial_contraction";
    case K::NotClosed: return "not_closed";
    case K::ProductSplit: return "product_split";
    case K::NotApplicable: return "not_applicable";
    case K::Inconclusive: return "inconclusive";
  }
  return "?";
}

ContractionCertificate analyze(const cartan::GeneralizedCartanMatrix& a,
                               const std::vector<int>& word, const Caps& caps) {
  cartan::validate(a);
  ContractionCertificate cert;
  cert.input = a;
  cert.word = word;
  cert.caps = caps;
  cartan::CoxeterDiagram d = cartan::coxeter_matrix(a);
  cert.classification = cartan::classify_type(d);
  for (int i : word)
    if (i < 0 || i >= a.rank) throw InputError("word letter out of range");

  if (cert.classification.components.size() > 1) {
    // Letters of different components commute, so the word projects onto
    // each factor by deleting foreign letters.
    cert.kind = ContractionCertificate::Kind::ProductSplit;
    for (const auto& comp : cert.classification.components) {
      std::vector<int> pos(a.rank, -1);
      for (std::size_t k = 0; k < comp.indices.size(); ++k) pos[comp.indices[k]] = static_cast<int>(k);
      std::vector<int> sub_word;
      for (int i : word)
        if (pos[i] >= 0) sub_word.push_back(pos[i]);
      cert.factors.push_back(analyze(cartan::restrict(a, comp.indices), sub_word, caps));
    }
    return cert;
  }

  weyl::WeylGroup g(a);
  weyl::WeylElement w = g.from_word(word);
  if (g.order(w).has_value()) {
    cert.kind = ContractionCertificate::Kind::TrivialContraction;
    return cert;
  }
  cartan::Kind kind = cert.classification.components[0].kind;
  if (kind == cartan::Kind::Affine) {
    cert.kind = ContractionCertificate::Kind::NotApplicable;
    cert.reason = "affine: outside Main Theorem scope";
    return cert;
  }
  if (kind == cartan::Kind::Spherical)
    throw VerificationError("spherical type produced an infinite-order element");

  try {
    RootSystem rs(g);
    cert.configuration = fundamental_configuration(rs, word, caps);
    cert.kind = ContractionCertificate::Kind::NotClosed;
    cert.symbolic_conclusion = "RootGroup(-gamma) <= U_w intersect U_w^-1";
  } catch (const ExhaustedError& e) {
    cert.kind = ContractionCertificate::Kind::Inconclusive;
    cert.reason = std::string("stage ") + e.stage + ": " + e.what();
  }
  return cert;
}

namespace {

nlohmann::ordered_json vec_json(const Vec& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Int& x : v) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
      throw VerificationError("root coordinate exceeds the serializable range");
    arr.push_back(static_cast<long long>(x));
  }
  return arr;
}

nlohmann::ordered_json gcm_json(const cartan::GeneralizedCartanMatrix& a) {
  nlohmann::ordered_json j;
  if (!a.name.empty()) j["name"] = a.name;
  j["cartan"] = a.entries;
  j["q"] = a.q;
  return j;
}

nlohmann::ordered_json caps_json(const Caps& c) {
  nlohmann::ordered_json j;
  j["orbit_cap"] = c.orbit_cap;
  j["bfs_radius"] = c.bfs_radius;
  j["power_cap"] = c.power_cap;
  j["periods"] = c.periods;
  return j;
}

nlohmann::ordered_json configuration_json(const HyperbolicConfiguration& cfg) {
  nlohmann::ordered_json j;
  j["word"] = weyl::format_word(cfg.word);
  j["alpha"] = vec_json(cfg.alpha.c);
  j["beta"] = vec_json(cfg.beta.c);
  j["gamma"] = vec_json(cfg.gamma.c);
  nlohmann::ordered_json rel;
  rel["alpha_beta_disjoint"] = cfg.relations.ab_disjoint;
  rel["alpha_gamma_disjoint"] = cfg.relations.ag_disjoint;
  rel["beta_gamma_disjoint"] = cfg.relations.bg_disjoint;
  rel["alpha_beta_non_opposite"] = cfg.relations.ab_non_opposite;
  rel["alpha_gamma_non_opposite"] = cfg.relations.ag_non_opposite;
  rel["beta_gamma_non_opposite"] = cfg.relations.bg_non_opposite;
  j["relations"] = rel;
  nlohmann::ordered_json ends;
  ends["alpha_backward"] = axis::end_sign_name(cfg.alpha_backward);
  ends["beta_forward"] = axis::end_sign_name(cfg.beta_forward);
  j["end_certificates"] = ends;
  j["caps_used"] = caps_json(cfg.caps_used);
  j["gamma_candidates_skipped_inconclusive"] = cfg.gamma_candidates_skipped_inconclusive;
  return j;
}

}  // namespace

nlohmann::ordered_json classification_json(const cartan::TypeClassification& t) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& c : t.components) {
    nlohmann::ordered_json cj;
    nlohmann::ordered_json idx = nlohmann::ordered_json::array();
    for (int i : c.indices) idx.push_back(i + 1);
    cj["indices"] = idx;
    cj["kind"] = cartan::kind_name(c.kind);
    if (!c.label.empty()) cj["label"] = c.label;
    comps.push_back(cj);
  }
  j["components"] = comps;
  j["irreducible"] = t.irreducible;
  return j;
}

nlohmann::ordered_json certificate_json(const ContractionCertificate& c) {
  nlohmann::ordered_json j;
  j["input"] = gcm_json(c.input);
  j["word"] = weyl::format_word(c.word);
  j["classification"] = classification_json(c.classification);
  j["caps"] = caps_json(c.caps);
  j["conclusion"] = kind_name(c.kind);
  if (!c.reason.empty()) j["reason"] = c.reason;
  if (c.configuration) {
    j["configuration"] = configuration_json(*c.configuration);
    j["symbolic"] = c.symbolic_conclusion;
    nlohmann::ordered_json assume;
    assume["contractive_root_groups"] = "asserted-by-theory";
    assume["note"] =
        "holds for the natural root groups of split and almost split inputs; "
        "not verified computationally";
    j["assumptions"] = assume;
  }
  if (!c.factors.empty()) {
    nlohmann::ordered_json fs = nlohmann::ordered_json::array();
    for (const auto& f : c.factors) fs.push_back(certificate_json(f));
    j["factors"] = fs;
  }
  return j;
}

}  // namespace kmcg::config
