#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "manna/json_io.hpp"

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string work_dir() {
  static std::string dir = [] {
    std::string d = "/tmp/manna_cli_test";
    int rc = std::system(("mkdir -p " + d).c_str());
    REQUIRE(rc == 0);
    return d;
  }();
  return dir;
}

CmdResult run_cli(const std::string& args, const std::string& env = "") {
  std::string out_path = work_dir() + "/stdout.txt";
  std::string err_path = work_dir() + "/stderr.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(MANNA_CLI_PATH) + " " + args +
                    " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_path), slurp(err_path)};
}

nlohmann::json as_json(const std::string& text) { return nlohmann::json::parse(text); }

std::string partition_path() {
  static std::string path = [] {
    std::string p = work_dir() + "/partition.json";
    REQUIRE(run_cli("gen partition --weights 3 1 2 --out " + p).exit_code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("gen partition pipes into the oracle at a quarter") {
  auto res = run_cli("oracle mms " + partition_path());
  REQUIRE(res.exit_code == 0);
  auto j = as_json(res.out);
  CHECK(j["mms"] == nlohmann::json::array({"1/4", "1/4"}));

  auto astar = run_cli("oracle alpha-star " + partition_path());
  REQUIRE(astar.exit_code == 0);
  CHECK(as_json(astar.out)["alpha_star"] == "1");

  auto padded = run_cli("gen partition --weights 3 1 2 --variant tau --n 11");
  REQUIRE(padded.exit_code == 0);
  auto inst = manna::parse_instance(padded.out);
  CHECK(inst.n == 11);
  CHECK(inst.m == 14);
}

TEST_CASE("solve emits an allocation and exits zero") {
  std::string inst_path = work_dir() + "/ones.json";
  spit(inst_path, "{\"agents\": 2, \"items\": [\"a\", \"b\"], \"values\": [[1, 1], [1, 1]]}\n");
  auto res = run_cli("solve " + inst_path + " --alpha 1");
  REQUIRE(res.exit_code == 0);
  auto j = as_json(res.out);
  CHECK(j["alpha"] == "1");
  CHECK(j["bundles"] == nlohmann::json::array({{"a"}, {"b"}}));

  std::string out_path = work_dir() + "/alloc.json";
  auto redirected = run_cli("solve " + inst_path + " --alpha 1 --out " + out_path);
  REQUIRE(redirected.exit_code == 0);
  CHECK(redirected.out.empty());
  CHECK(as_json(slurp(out_path)) == j);
}

TEST_CASE("solve output is byte deterministic and thread independent") {
  std::string cmd = "solve " + partition_path() + " --alpha 0.5";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  auto c = run_cli(cmd + " --threads 3");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  auto alloc = manna::parse_allocation(a.out, manna::parse_instance(slurp(partition_path())));
  CHECK(alloc.bundles.size() == 2);
}

TEST_CASE("solve enforces an explicit tau check with a per-agent report") {
  std::string inst_path = work_dir() + "/tau_violator.json";
  spit(inst_path,
       "{\"agents\": 2, \"items\": [\"a\", \"b\"], \"values\": [[1, -1], [1, 1]]}\n");
  auto res = run_cli("solve " + inst_path + " --alpha 1/2 --tau 1/4");
  CHECK(res.exit_code == 1);
  auto err = as_json(res.err);
  CHECK(err["error"]["code"] == "tau-violation");
  CHECK(std::string(err["error"]["message"]).find("0") != std::string::npos);
  CHECK(res.out.find("error:") == 0);

  auto mms_res = run_cli("mms " + inst_path + " --tau 1/4");
  CHECK(mms_res.exit_code == 1);
  CHECK(as_json(mms_res.err)["error"]["code"] == "tau-violation");
}

TEST_CASE("mms reports shares per agent or for one agent") {
  std::string inst_path = work_dir() + "/mms_rows.json";
  spit(inst_path,
       "{\"agents\": 2, \"items\": [\"a\", \"b\"], \"values\": [[0, 0], [1, 1]]}\n");
  auto all = run_cli("mms " + inst_path);
  REQUIRE(all.exit_code == 0);
  CHECK(as_json(all.out)["mu_tilde"] == nlohmann::json::array({"0", "1"}));

  auto one = run_cli("mms " + inst_path + " --agent 1");
  REQUIRE(one.exit_code == 0);
  CHECK(as_json(one.out)["mu_tilde"] == nlohmann::json::array({"1"}));

  CHECK(run_cli("mms " + inst_path + " --agent 5").exit_code == 1);
}

TEST_CASE("opt reports the reached alpha with its probe count") {
  auto res = run_cli("opt " + partition_path() + " --delta 1/64");
  REQUIRE(res.exit_code == 0);
  auto j = as_json(res.out);
  CHECK(j["alpha"] == "1");
  CHECK(j["probes"] == 1);

  auto threaded = run_cli("opt " + partition_path() + " --delta 1/64 --threads 3");
  CHECK(threaded.out == res.out);
}

TEST_CASE("verify reports alpha-mms and the dominating allocation") {
  std::string inst_path = work_dir() + "/diag.json";
  spit(inst_path,
       "{\"agents\": 2, \"items\": [\"i0\", \"i1\"], \"values\": [[2, 0], [0, 2]]}\n");
  std::string alloc_path = work_dir() + "/swapped.json";
  spit(alloc_path, "{\"bundles\": [[\"i1\"], [\"i0\"]]}\n");
  auto res = run_cli("verify " + inst_path + " " + alloc_path + " --alpha 1 --gamma 0");
  REQUIRE(res.exit_code == 0);
  auto j = as_json(res.out);
  CHECK(j["alpha_mms"] == true);  // both maximin shares are zero here
  CHECK(j["gamma_po"] == false);
  auto expected = nlohmann::json::array({{"i0", "i1"}, nlohmann::json::array()});
  CHECK(j["dominator"] == expected);

  auto oracled = run_cli("verify " + inst_path + " " + alloc_path + " --alpha 1 --use-oracle");
  REQUIRE(oracled.exit_code == 0);
  CHECK(as_json(oracled.out).contains("gamma_po"));

  std::string short_path = work_dir() + "/short.json";
  spit(short_path, "{\"bundles\": [[\"i1\"], []]}\n");
  auto missing = run_cli("verify " + inst_path + " " + short_path + " --alpha 1");
  CHECK(missing.exit_code == 1);
  CHECK(as_json(missing.err)["error"]["code"] == "bad-allocation");
}

TEST_CASE("verify flags a bundle below the alpha threshold") {
  std::string alloc_path = work_dir() + "/lopsided.json";
  spit(alloc_path, "{\"bundles\": [[\"c1\", \"c2\", \"g1\", \"g2\", \"g3\"], []]}\n");
  auto res = run_cli("verify " + partition_path() + " " + alloc_path + " --alpha 1");
  REQUIRE(res.exit_code == 0);
  auto j = as_json(res.out);
  CHECK(j["alpha_mms"] == false);
  CHECK(j["own_values"] == nlohmann::json::array({"1/2", "0"}));
  CHECK(j.find("gamma_po") == j.end());
}

TEST_CASE("oracle po answers for an explicit allocation") {
  std::string alloc_path = work_dir() + "/fair.json";
  spit(alloc_path, "{\"bundles\": [[\"c1\", \"g1\"], [\"c2\", \"g2\", \"g3\"]]}\n");
  auto res = run_cli("oracle po " + partition_path() + " " + alloc_path + " --gamma 1/10");
  REQUIRE(res.exit_code == 0);
  CHECK(as_json(res.out)["gamma_po"] == true);
}

TEST_CASE("gen nonexistence emits the published instance deterministically") {
  auto a = run_cli("gen nonexistence");
  auto b = run_cli("gen nonexistence");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto inst = manna::parse_instance(a.out);
  CHECK(inst.n == 3);
  CHECK(inst.m == 15);
  auto j = as_json(a.out);
  CHECK(j["values"][0][0] == "1017003");
  CHECK(j["values"][2][14] == "-16219999/4");
}

TEST_CASE("gen random honors the seed and validates bounds") {
  auto a = run_cli("gen random --n 2 --m 4 --seed 7");
  auto b = run_cli("gen random --n 2 --m 4 --seed 7");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  manna::parse_instance(a.out);

  auto c = run_cli("gen random --n 2 --m 4 --seed 8");
  CHECK(c.out != a.out);

  CHECK(run_cli("gen random --n 0 --m 4 --seed 7").exit_code == 1);
}

TEST_CASE("budget env var caps every enumeration") {
  auto res = run_cli("oracle mms " + partition_path(), "MANNA_BUDGET=10");
  CHECK(res.exit_code == 1);
  CHECK(as_json(res.err)["error"]["code"] == "budget-exceeded");

  auto garbled = run_cli("oracle mms " + partition_path(), "MANNA_BUDGET=ten");
  CHECK(garbled.exit_code == 1);
  CHECK(as_json(garbled.err)["error"]["code"] == "bad-parameter");
}

TEST_CASE("bad invocations exit one with a structured report") {
  auto none = run_cli("");
  CHECK(none.exit_code == 1);
  CHECK(as_json(none.err).contains("error"));

  auto unknown = run_cli("frobnicate");
  CHECK(unknown.exit_code == 1);

  auto help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("solve") != std::string::npos);
}

TEST_CASE("solve exits two on the nonexistence instance", "[slow]") {
  std::string inst_path = work_dir() + "/nonexistence.json";
  REQUIRE(run_cli("gen nonexistence --out " + inst_path).exit_code == 0);
  auto res = run_cli("solve " + inst_path + " --alpha 0.5");
  CHECK(res.exit_code == 2);
  auto j = as_json(res.out);
  CHECK(j["no_alpha_mms"] == true);
  CHECK(j["message"] == "no alpha-MMS allocation exists");
}
