#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

std::string slurp_or_empty(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  std::string out_path = "cli_out_" + std::to_string(counter++) + ".tmp";
  std::string cmd = std::string(KMCG_CLI_PATH) + " " + args + " > " + out_path + " 2> /dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp_or_empty(out_path);
  std::remove(out_path.c_str());
  return r;
}

std::string corpus(const std::string& name) {
  return std::string(KMCG_CORPUS_DIR) + "/" + name + ".json";
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("classify command reports the crystallographic type") {
  auto a2 = run("classify " + corpus("a2"));
  CHECK(a2.code == 0);
  auto j = parse(a2);
  CHECK(j["classification"]["components"][0]["kind"] == "spherical");
  CHECK(j["classification"]["components"][0]["label"] == "A2");
  CHECK(j["main_theorem_applicable"]["applicable"] == false);
  CHECK(j["main_theorem_applicable"]["reason"] == "spherical");

  auto m5 = parse(run("classify " + corpus("m_minus5")));
  CHECK(m5["classification"]["components"][0]["kind"] == "affine");
  CHECK(m5["classification"]["components"][0]["label"] == "A1~");

  auto tri = parse(run("classify " + corpus("tri334")));
  CHECK(tri["classification"]["components"][0]["kind"] == "indefinite");
  CHECK(tri["main_theorem_applicable"]["applicable"] == true);
}

TEST_CASE("analyze command emits certificates with the exit-code contract") {
  auto nc = run("analyze " + corpus("tri334") + " --word \"1 2 1 3\"");
  CHECK(nc.code == 0);
  auto j = parse(nc);
  CHECK(j["certificate"]["conclusion"] == "not_closed");
  CHECK(j["certificate"]["configuration"]["relations"]["alpha_beta_disjoint"] == true);

  auto tc = run("analyze " + corpus("a2") + " --word \"1 2\"");
  CHECK(tc.code == 0);
  CHECK(parse(tc)["certificate"]["conclusion"] == "trivial_contraction");

  auto na = run("analyze " + corpus("m_minus5") + " --word \"1 2\"");
  CHECK(na.code == 0);
  CHECK(parse(na)["certificate"]["conclusion"] == "not_applicable");

  auto split = run("analyze " + corpus("block_a2_tri334") + " --word \"1 3 4 3 5\"");
  CHECK(split.code == 0);
  CHECK(parse(split)["certificate"]["conclusion"] == "product_split");
}

TEST_CASE("input errors exit with code 3") {
  CHECK(run("classify /nonexistent/file.json").code == 3);
  CHECK(run("analyze " + corpus("a2") + " --word \"1 7\"").code == 3);
  CHECK(run("analyze " + corpus("a2") + " --word \"x\"").code == 3);
  CHECK(run("classify " + corpus("line_standard")).code == 3);  // not a GCM document
  CHECK(run("bogus-subcommand").code == 3);
  CHECK(run("tree scale --translation 1 --type-preserving --depth 10").code == 3);
}

TEST_CASE("repeated runs are byte-identical") {
  std::string cmd = "analyze " + corpus("tri334") + " --word \"1 2 1 3\"";
  auto first = run(cmd);
  auto second = run(cmd);
  CHECK(first.out == second.out);
  CHECK(!first.out.empty());

  std::string wit = "tree witness --degree 3 --translation-length 2 --depth 12 --count 3";
  CHECK(run(wit).out == run(wit).out);

  std::string rnd = "tree classify --random-elliptic 3 --seed 9 --depth 10";
  CHECK(run(rnd).out == run(rnd).out);
}

TEST_CASE("tree subcommands run the simulator") {
  auto wit = run("tree witness --degree 3 --translation-length 2 --depth 14 --count 4");
  CHECK(wit.code == 0);
  CHECK(parse(wit)["all_passed"] == true);

  auto fold = run("tree fold --line " + corpus("line_bend3") + " --depth 10");
  CHECK(fold.code == 0);
  CHECK(parse(fold)["verified"] == true);

  auto scale = run("tree scale --portrait " + corpus("portrait_swap") + " --depth 8");
  CHECK(scale.code == 0);
  CHECK(parse(scale)["scale"] == 1);

  auto scale2 = run("tree scale --translation 2 --depth 12");
  CHECK(scale2.code == 0);
  CHECK(parse(scale2)["scale"] == 4);

  auto par = run("tree parabolic --g-translation 2 --h-translation 2 --depth 12");
  CHECK(par.code == 0);
  auto pj = parse(par);
  CHECK(pj["in_parabolic"] == true);
  CHECK(pj["bounded_orbit"] == true);
}
