// Command-line surface: GCM classification, contraction certificates, and
// the locally finite tree simulator.  All reports are UTF-8 JSON on stdout
// with stable key order; diagnostics go to stderr.  Exit codes: 0 success,
// 1 verification failure, 2 inconclusive or cap-exhausted, 3 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

#include "kmcg/caps.hpp"
#include "kmcg/cartan.hpp"
#include "kmcg/config.hpp"
#include "kmcg/errors.hpp"
#include "kmcg/report.hpp"
#include "kmcg/roots.hpp"
#include "kmcg/treesim.hpp"
#include "kmcg/weyl.hpp"

namespace {

using nlohmann::ordered_json;
namespace ts = kmcg::treesim;

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json input_echo(const std::string& path, const std::string& bytes) {
  ordered_json j;
  j["file"] = path;
  j["digest"] = kmcg::report::fnv1a64_hex(bytes);
  return j;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& path) {
  std::string bytes = kmcg::report::slurp(path);
  kmcg::cartan::GeneralizedCartanMatrix a = kmcg::cartan::parse_gcm(bytes);
  kmcg::cartan::CoxeterDiagram d = kmcg::cartan::coxeter_matrix(a);
  kmcg::cartan::TypeClassification t = kmcg::cartan::classify_type(d);
  kmcg::cartan::Applicability app = kmcg::cartan::main_theorem_applicable(a);

  ordered_json j = kmcg::report::envelope("classify");
  j["input"] = input_echo(path, bytes);
  if (!a.name.empty()) j["name"] = a.name;
  j["rank"] = a.rank;
  j["q"] = a.q;
  ordered_json m = ordered_json::array();
  for (int i = 0; i < d.rank; ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < d.rank; ++k)
      row.push_back(d.bond[i][k] == kmcg::cartan::kInfiniteBond ? 0 : d.bond[i][k]);
    m.push_back(row);
  }
  j["coxeter_matrix"] = m;  // 0 encodes an infinite bond
  j["classification"] = kmcg::config::classification_json(t);
  ordered_json ap;
  ap["applicable"] = app.applicable;
  if (!app.reason.empty()) ap["reason"] = app.reason;
  j["main_theorem_applicable"] = ap;
  emit(j);
  return 0;
}

// ----------------------------------------------------------------- analyze

int cmd_analyze(const std::string& path, const std::string& word_text, const kmcg::Caps& caps) {
  std::string bytes = kmcg::report::slurp(path);
  kmcg::cartan::GeneralizedCartanMatrix a = kmcg::cartan::parse_gcm(bytes);
  std::vector<int> word = kmcg::weyl::parse_word(word_text, a.rank);
  kmcg::config::ContractionCertificate cert = kmcg::config::analyze(a, word, caps);

  ordered_json j = kmcg::report::envelope("analyze");
  j["input"] = input_echo(path, bytes);
  j["certificate"] = kmcg::config::certificate_json(cert);
  emit(j);
  return cert.kind == kmcg::config::ContractionCertificate::Kind::Inconclusive ? 2 : 0;
}

// ------------------------------------------------------------------- tree

struct ElementFlags {
  std::string portrait_file;
  std::string line_file;
  int translation = 0;
  int random_elliptic = -1;
};

ts::End end_from_json(const ordered_json& j) {
  ts::End e;
  if (j.contains("prefix")) e.prefix = j["prefix"].get<std::string>();
  e.block = j.at("block").get<std::string>();
  return e;
}

ts::Line load_line(const std::string& path, int degree, ordered_json* echo) {
  std::string bytes = kmcg::report::slurp(path);
  ordered_json j;
  try {
    j = ordered_json::parse(bytes);
    ts::Line l{end_from_json(j.at("forward")), end_from_json(j.at("backward"))};
    ts::validate_line(l, degree);
    if (echo) {
      (*echo)["line_file"] = path;
      (*echo)["line_digest"] = kmcg::report::fnv1a64_hex(bytes);
    }
    return l;
  } catch (const ordered_json::exception& e) {
    throw kmcg::InputError(std::string("malformed line spec: ") + e.what());
  }
}

ts::TreeAut load_portrait(const std::string& path, int depth_override, ordered_json* echo) {
  std::string bytes = kmcg::report::slurp(path);
  ts::Portrait p;
  try {
    ordered_json j = ordered_json::parse(bytes);
    p.degree = j.at("degree").get<int>();
    p.depth = j.contains("depth") ? j["depth"].get<int>() : depth_override;
    if (j.contains("base_image")) p.base_image = j["base_image"].get<std::string>();
    if (j.contains("perms"))
      for (const auto& [v, sigma] : j["perms"].items())
        p.perms[v] = sigma.get<std::vector<int>>();
  } catch (const ordered_json::exception& e) {
    throw kmcg::InputError(std::string("malformed portrait: ") + e.what());
  }
  if (echo) {
    (*echo)["portrait_file"] = path;
    (*echo)["portrait_digest"] = kmcg::report::fnv1a64_hex(bytes);
  }
  return ts::from_portrait(p);
}

ts::TreeAut build_element(const ElementFlags& f, int degree, int depth, std::uint64_t seed,
                          bool type_preserving, ordered_json* echo) {
  int specs = (f.portrait_file.empty() ? 0 : 1) + (f.translation != 0 ? 1 : 0) +
              (f.random_elliptic >= 0 ? 1 : 0);
  if (specs != 1)
    throw kmcg::InputError("specify exactly one of --portrait / --translation / --random-elliptic");
  if (!f.portrait_file.empty()) {
    ts::TreeAut g = load_portrait(f.portrait_file, depth, echo);
    if (type_preserving && g.base_image().size() % 2 != 0)
      throw kmcg::InputError("--type-preserving forbids portraits that move the base an odd distance");
    return g;
  }
  if (f.translation != 0) {
    if (type_preserving && f.translation % 2 != 0)
      throw kmcg::InputError("--type-preserving requires an even translation length");
    ts::Line line = f.line_file.empty() ? ts::standard_line() : load_line(f.line_file, degree, echo);
    if (echo) (*echo)["translation"] = f.translation;
    return ts::translation(degree, depth, line, f.translation);
  }
  if (echo) {
    (*echo)["random_elliptic_fix_radius"] = f.random_elliptic;
    (*echo)["seed"] = seed;
  }
  return ts::random_elliptic(degree, depth, f.random_elliptic, seed);
}

ordered_json isometry_json(const ts::TreeIsometry& cls) {
  ordered_json j;
  j["kind"] = cls.kind == ts::TreeIsometry::Kind::Elliptic ? "elliptic" : "hyperbolic";
  if (cls.kind == ts::TreeIsometry::Kind::Elliptic) {
    j["edge_inversion"] = cls.edge_inversion;
    if (cls.edge_inversion) {
      j["inverted_edge"] = ordered_json::array({cls.inverted_edge.first, cls.inverted_edge.second});
    } else {
      j["fixed_vertex"] = cls.fixed_vertex;
    }
  } else {
    j["translation_length"] = cls.translation_length;
    ordered_json axis = ordered_json::array();
    for (std::size_t i = 0; i < cls.axis.size() && i < 8; ++i) axis.push_back(cls.axis[i]);
    j["axis_sample"] = axis;
  }
  return j;
}

int tree_classify(const ElementFlags& f, int degree, int depth, std::uint64_t seed, bool tp) {
  ordered_json j = kmcg::report::envelope("tree classify");
  ordered_json echo;
  ts::TreeAut g = build_element(f, degree, depth, seed, tp, &echo);
  j["element"] = echo;
  j["degree"] = degree;
  j["depth"] = g.depth();
  j["verdict"] = isometry_json(ts::classify(g));
  emit(j);
  return 0;
}

int tree_contract(const ElementFlags& gf, const ElementFlags& hf, int degree, int depth,
                  std::uint64_t seed, bool tp, int budget) {
  ordered_json j = kmcg::report::envelope("tree contract");
  ordered_json ge, he;
  ts::TreeAut g = build_element(gf, degree, depth, seed, tp, &ge);
  ts::TreeAut h = build_element(hf, degree, depth, seed + 1, tp, &he);
  j["g"] = ge;
  j["h"] = he;
  ts::ContractionVerdict v = ts::in_contraction(g, h, budget);
  ordered_json vj;
  vj["verdict"] = ts::membership_name(v.verdict);
  vj["ray_route"] = ts::membership_name(v.ray_route);
  vj["definitional_route"] = ts::membership_name(v.definitional_route);
  vj["r_max"] = v.r_max;
  if (!v.witness.empty()) vj["witness"] = v.witness;
  if (!v.detail.empty()) vj["detail"] = v.detail;
  j["contraction"] = vj;
  emit(j);
  return v.verdict == ts::Membership::Inconclusive ? 2 : 0;
}

int tree_parabolic(const ElementFlags& gf, const ElementFlags& hf, int degree, int depth,
                   std::uint64_t seed, bool tp, int power_cap) {
  ordered_json j = kmcg::report::envelope("tree parabolic");
  ordered_json ge, he;
  ts::TreeAut g = build_element(gf, degree, depth, seed, tp, &ge);
  ts::TreeAut h = build_element(hf, degree, depth, seed + 1, tp, &he);
  j["g"] = ge;
  j["h"] = he;
  bool end_fix = ts::in_parabolic(g, h);
  bool bounded = ts::bounded_orbit(g, h, power_cap);
  j["in_parabolic"] = end_fix;
  j["bounded_orbit"] = bounded;
  emit(j);
  if (end_fix != bounded)
    throw kmcg::VerificationError("end-stabilizer and bounded-orbit routes disagree");
  return 0;
}

int tree_scale(const ElementFlags& f, int degree, int depth, std::uint64_t seed, bool tp) {
  ordered_json j = kmcg::report::envelope("tree scale");
  ordered_json echo;
  ts::TreeAut g = build_element(f, degree, depth, seed, tp, &echo);
  j["element"] = echo;
  j["verdict"] = isometry_json(ts::classify(g));
  j["scale"] = ts::scale(g);
  emit(j);
  return 0;
}

int tree_fold(const std::string& line_file, int degree, int depth) {
  ordered_json j = kmcg::report::envelope("tree fold");
  ordered_json echo;
  ts::Line line = load_line(line_file, degree, &echo);
  j["line"] = echo;
  j["degree"] = degree;
  j["depth"] = depth;
  ts::FoldResult r = ts::fold_line(line, degree, depth);
  ordered_json steps = ordered_json::array();
  for (const ts::FoldStep& s : r.steps) {
    ordered_json sj;
    sj["k"] = s.k;
    sj["forward_swap"] = s.forward_swap;
    sj["backward_swap"] = s.backward_swap;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  ordered_json cauchy = ordered_json::array();
  for (std::size_t k = 1; k < r.partials.size(); ++k) {
    ts::TreeAut diff = ts::compose(r.partials[k], ts::invert(r.partials[k - 1]));
    ts::FixRadius fr = ts::fixed_ball_radius(diff, ts::Vertex{});
    ordered_json cj;
    cj["k"] = static_cast<int>(k + 1);
    cj["difference_fixes_radius"] = fr.moved ? -1 : fr.radius;
    cauchy.push_back(cj);
  }
  j["cauchy"] = cauchy;
  j["verified"] = r.verified;
  emit(j);
  if (!r.verified) throw kmcg::VerificationError("folded line does not match the standard coding");
  return 0;
}

int tree_witness(int degree, int translation_length, int depth, int count, bool tp) {
  if (tp && translation_length % 2 != 0)
    throw kmcg::InputError("--type-preserving requires an even translation length");
  ordered_json j = kmcg::report::envelope("tree witness");
  j["degree"] = degree;
  j["translation_length"] = translation_length;
  j["depth"] = depth;
  j["count"] = count;
  ts::WitnessResult r = ts::nonclosed_witness(degree, translation_length, depth, count);
  ordered_json checks = ordered_json::array();
  for (const ts::WitnessCheck& c : r.checks) {
    ordered_json cj;
    cj["k"] = c.k;
    cj["in_contraction_of_h"] = ts::membership_name(c.in_contraction_of_h);
    cj["agreement_radius_with_limit"] = c.agreement_radius_with_limit;
    cj["differs_from_limit"] = c.differs_from_limit;
    cj["mirror_in_contraction_of_h_inverse"] = ts::membership_name(c.mirror_in_contraction_of_h_inverse);
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["limit_in_contraction"] = ts::membership_name(r.limit_in_contraction);
  j["all_passed"] = r.all_passed;
  emit(j);
  return r.all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial engine for Coxeter classification, contraction-group "
               "certificates, and a locally finite tree simulator"};
  app.require_subcommand(1);

  // classify
  std::string classify_file;
  CLI::App* c_classify = app.add_subcommand("classify", "classify a generalized Cartan matrix");
  c_classify->add_option("file", classify_file, "GCM JSON document")->required();

  // analyze
  std::string analyze_file, analyze_word;
  kmcg::Caps caps;
  CLI::App* c_analyze = app.add_subcommand("analyze", "emit a contraction-group certificate");
  c_analyze->add_option("file", analyze_file, "GCM JSON document")->required();
  c_analyze->add_option("--word", analyze_word, "whitespace-separated 1-based generator indices")
      ->required();
  c_analyze->add_option("--orbit-cap", caps.orbit_cap, "root orbit word-length cap");
  c_analyze->add_option("--bfs-radius", caps.bfs_radius, "Cayley BFS radius cap");
  c_analyze->add_option("--power-cap", caps.power_cap, "end-sign power cap");
  c_analyze->add_option("--periods", caps.periods, "translation periods for crossed walls");

  // tree
  CLI::App* c_tree = app.add_subcommand("tree", "locally finite tree simulator");
  c_tree->require_subcommand(1);
  int degree = 3, depth = 12, budget = 12, power_cap = 12, count = 4, translation_length = 2;
  std::uint64_t seed = 0;
  bool type_preserving = false;
  ElementFlags ef, gf, hf;
  std::string fold_line_file;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--degree", degree, "tree degree d = q + 1 (default 3)");
    sub->add_option("--depth", depth, "truncation depth (default 12)");
    sub->add_option("--seed", seed, "seed for all randomness (default 0)");
    sub->add_flag("--type-preserving", type_preserving,
                  "restrict to even translations and non-inverting elliptics");
  };
  auto add_element = [&](CLI::App* sub, ElementFlags& f, const std::string& prefix) {
    sub->add_option("--" + prefix + "portrait", f.portrait_file, "portrait JSON file");
    sub->add_option("--" + prefix + "translation", f.translation,
                    "translation length along the standard line");
    sub->add_option("--" + prefix + "random-elliptic", f.random_elliptic,
                    "random elliptic fixing this radius");
    sub->add_option("--" + prefix + "line", f.line_file, "line spec for the translation");
  };

  CLI::App* t_classify = c_tree->add_subcommand("classify", "elliptic/hyperbolic with witness");
  add_common(t_classify);
  add_element(t_classify, ef, "");

  CLI::App* t_contract = c_tree->add_subcommand("contract", "contraction membership, dual routes");
  add_common(t_contract);
  add_element(t_contract, gf, "g-");
  add_element(t_contract, hf, "h-");
  t_contract->add_option("--budget", budget, "conjugation depth budget");

  CLI::App* t_parabolic = c_tree->add_subcommand("parabolic", "end stabilizer vs bounded orbit");
  add_common(t_parabolic);
  add_element(t_parabolic, gf, "g-");
  add_element(t_parabolic, hf, "h-");
  t_parabolic->add_option("--power-cap", power_cap, "bounded-orbit power cap");

  CLI::App* t_scale = c_tree->add_subcommand("scale", "scale of a truncated automorphism");
  add_common(t_scale);
  add_element(t_scale, ef, "");

  CLI::App* t_fold = c_tree->add_subcommand("fold", "fold a line onto the standard line");
  add_common(t_fold);
  t_fold->add_option("--line", fold_line_file, "line spec JSON file")->required();

  CLI::App* t_witness = c_tree->add_subcommand("witness", "non-closedness witness transcript");
  add_common(t_witness);
  t_witness->add_option("--translation-length", translation_length, "axis translation length");
  t_witness->add_option("--count", count, "number of approximants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*c_classify) {
      code = cmd_classify(classify_file);
    } else if (*c_analyze) {
      code = cmd_analyze(analyze_file, analyze_word, caps);
    } else if (*t_classify) {
      code = tree_classify(ef, degree, depth, seed, type_preserving);
    } else if (*t_contract) {
      code = tree_contract(gf, hf, degree, depth, seed, type_preserving, budget);
    } else if (*t_parabolic) {
      code = tree_parabolic(gf, hf, degree, depth, seed, type_preserving, power_cap);
    } else if (*t_scale) {
      code = tree_scale(ef, degree, depth, seed, type_preserving);
    } else if (*t_fold) {
      code = tree_fold(fold_line_file, degree, depth);
    } else if (*t_witness) {
      code = tree_witness(degree, translation_length, depth, count, type_preserving);
    }
  } catch (const kmcg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const kmcg::ExhaustedError& e) {
    std::cerr << "exhausted (" << e.stage << ", cap " << e.cap << "): " << e.what() << "\n";
    return 2;
  } catch (const kmcg::InsufficientDepthError& e) {
    std::cerr << "insufficient depth (need " << e.required << ", have " << e.available
              << "): " << e.what() << "\n";
    return 2;
  } catch (const kmcg::VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  std::cerr << "elapsed_ms=" << ms.count() << "\n";
  return code;
}
