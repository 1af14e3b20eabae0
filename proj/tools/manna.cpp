#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manna/generators.hpp"
#include "manna/json_io.hpp"
#include "manna/mixed.hpp"
#include "manna/oracle.hpp"
#include "manna/search.hpp"

namespace {

using manna::Allocation;
using manna::Errc;
using manna::Instance;
using manna::Rat;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) manna::fail(Errc::bad_parameter, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long long env_budget() {
  const char* raw = std::getenv("MANNA_BUDGET");
  if (!raw) return 20'000'000;
  std::string text(raw);
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size() || v <= 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    manna::fail(Errc::bad_parameter, "MANNA_BUDGET must be a positive integer, got '" + text + "'");
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) manna::fail(Errc::bad_parameter, "cannot write '" + out_path + "'");
  out << text;
}

void emit(const nlohmann::json& j, const std::string& out_path = "") {
  emit_text(j.dump(2) + "\n", out_path);
}

nlohmann::json bundles_json(const Instance& inst, const Allocation& alloc) {
  nlohmann::json bundles = nlohmann::json::array();
  for (const auto& bundle : alloc.bundles) {
    std::vector<std::string> labels;
    for (int j : bundle) labels.push_back(inst.item_labels[j]);
    std::sort(labels.begin(), labels.end());
    bundles.push_back(labels);
  }
  return bundles;
}

nlohmann::json rationals_json(const std::vector<Rat>& values) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rat& v : values) arr.push_back(manna::format_rational(v));
  return arr;
}

void check_tau_or_fail(const Instance& inst, const Rat& tau) {
  auto ok = manna::check_tau_condition(inst, tau);
  std::string bad;
  for (int i = 0; i < inst.n; ++i) {
    if (!ok[i]) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty()) manna::fail(Errc::tau_violation, "agents violating the tau condition: " + bad);
}

std::vector<Rat> oracle_mms_vector(const Instance& inst, long long budget, int threads) {
  std::vector<Rat> mms;
  for (int i = 0; i < inst.n; ++i) {
    mms.push_back(manna::oracle::exact_mms(inst.values[i], inst.n, budget, threads).value);
  }
  return mms;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-MMS and gamma-PO allocation of mixed manna"};
  app.require_subcommand(1);
  int rc = 0;

  struct {
    std::string path, alpha = "1/2", epsilon = "1/10", gamma = "1/10", tau, out;
    long long big_budget = 0;
    int threads = 1;
  } so;
  auto* solve = app.add_subcommand("solve", "find an alpha-MMS, gamma-PO allocation");
  solve->add_option("instance", so.path, "instance JSON file")->required();
  solve->add_option("--alpha", so.alpha, "target alpha in (0,1]");
  solve->add_option("--epsilon", so.epsilon, "accuracy parameter in (0,1)");
  solve->add_option("--gamma", so.gamma, "Pareto slack, positive");
  solve->add_option("--tau", so.tau, "reject the instance unless every agent meets this tau");
  solve->add_option("--big-budget", so.big_budget, "cap on enumerated big-item assignments");
  solve->add_option("--threads", so.threads, "worker threads");
  solve->add_option("--out", so.out, "write the result here instead of stdout");
  solve->callback([&] {
    Instance inst = manna::parse_instance(read_file(so.path));
    if (!so.tau.empty()) check_tau_or_fail(inst, manna::parse_rational(so.tau));
    manna::SolverParams params;
    params.alpha = manna::parse_rational(so.alpha);
    params.epsilon = manna::parse_rational(so.epsilon);
    params.gamma = manna::parse_rational(so.gamma);
    params.big_budget = so.big_budget > 0 ? so.big_budget : env_budget();
    auto outcome = manna::mixed::solve_alpha_mms_po(inst, params, so.threads);
    nlohmann::json j;
    if (!outcome.allocation) {
      j["no_alpha_mms"] = true;
      j["message"] = "no alpha-MMS allocation exists";
      emit(j, so.out);
      rc = 2;
      return;
    }
    j["alpha"] = manna::format_rational(params.alpha);
    j["bundles"] = bundles_json(inst, *outcome.allocation);
    emit(j, so.out);
  });

  struct {
    std::string path, epsilon = "1/10", tau;
    int agent = -1;
    int threads = 1;
  } mm;
  auto* mms = app.add_subcommand("mms", "approximate per-agent maximin shares");
  mms->add_option("instance", mm.path, "instance JSON file")->required();
  mms->add_option("--epsilon", mm.epsilon, "PTAS accuracy in (0,1)");
  mms->add_option("--agent", mm.agent, "restrict to one agent index");
  mms->add_option("--tau", mm.tau, "reject the instance unless every agent meets this tau");
  mms->add_option("--threads", mm.threads, "worker threads");
  mms->callback([&] {
    Instance inst = manna::parse_instance(read_file(mm.path));
    if (!mm.tau.empty()) check_tau_or_fail(inst, manna::parse_rational(mm.tau));
    Rat eps = manna::parse_rational(mm.epsilon);
    long long budget = env_budget();
    std::vector<int> agents;
    if (mm.agent >= 0) {
      manna::require(mm.agent < inst.n, Errc::index_out_of_range,
                     "agent " + std::to_string(mm.agent) + " is out of range");
      agents.push_back(mm.agent);
    } else {
      for (int i = 0; i < inst.n; ++i) agents.push_back(i);
    }
    std::vector<Rat> shares;
    for (int i : agents) {
      shares.push_back(
          manna::identical::approx_mms(inst.values[i], inst.n, eps, budget, mm.threads).value);
    }
    nlohmann::json j;
    j["mu_tilde"] = rationals_json(shares);
    emit(j);
  });

  struct {
    std::string path, epsilon = "1/10", gamma = "1/10", delta = "1/1024";
    long long big_budget = 0;
    int threads = 1;
  } op;
  auto* opt = app.add_subcommand("opt", "search for the best attainable alpha");
  opt->add_option("instance", op.path, "instance JSON file")->required();
  opt->add_option("--epsilon", op.epsilon, "accuracy parameter in (0,1)");
  opt->add_option("--gamma", op.gamma, "Pareto slack, positive");
  opt->add_option("--delta", op.delta, "bisection precision, positive");
  opt->add_option("--big-budget", op.big_budget, "cap on enumerated big-item assignments");
  opt->add_option("--threads", op.threads, "worker threads");
  opt->callback([&] {
    Instance inst = manna::parse_instance(read_file(op.path));
    manna::SolverParams params;
    params.epsilon = manna::parse_rational(op.epsilon);
    params.gamma = manna::parse_rational(op.gamma);
    params.delta = manna::parse_rational(op.delta);
    params.big_budget = op.big_budget > 0 ? op.big_budget : env_budget();
    auto res = manna::search::opt_alpha_mms_po(inst, params, op.threads);
    nlohmann::json j;
    j["alpha"] = manna::format_rational(res.alpha);
    j["bundles"] = bundles_json(inst, res.allocation);
    j["probes"] = res.probes;
    emit(j);
    if (res.alpha == 0) rc = 2;
  });

  struct {
    std::string inst_path, alloc_path, alpha, gamma;
    bool use_oracle = false;
    int threads = 1;
  } ve;
  auto* verify = app.add_subcommand("verify", "check an allocation against the oracle");
  verify->add_option("instance", ve.inst_path, "instance JSON file")->required();
  verify->add_option("allocation", ve.alloc_path, "allocation JSON file")->required();
  verify->add_option("--alpha", ve.alpha, "alpha to verify, in (0,1]")->required();
  verify->add_option("--gamma", ve.gamma, "also check gamma-PO at this gamma");
  verify->add_flag("--use-oracle", ve.use_oracle, "run the gamma-PO sweep at the default gamma");
  verify->add_option("--threads", ve.threads, "worker threads");
  verify->callback([&] {
    Instance inst = manna::parse_instance(read_file(ve.inst_path));
    Allocation alloc = manna::parse_allocation(read_file(ve.alloc_path), inst);
    Rat alpha = manna::parse_rational(ve.alpha);
    long long budget = env_budget();
    auto mms = oracle_mms_vector(inst, budget, ve.threads);
    std::vector<Rat> own;
    for (int i = 0; i < inst.n; ++i) own.push_back(manna::bundle_value(inst, i, alloc.bundles[i]));
    nlohmann::json j;
    j["alpha"] = manna::format_rational(alpha);
    j["alpha_mms"] = manna::satisfies_alpha_mms(inst, alloc, mms, alpha);
    j["mms"] = rationals_json(mms);
    j["own_values"] = rationals_json(own);
    if (ve.use_oracle || !ve.gamma.empty()) {
      Rat gamma = ve.gamma.empty() ? Rat(1, 10) : manna::parse_rational(ve.gamma);
      auto dom = manna::oracle::find_gamma_dominator(inst, alloc, gamma, budget);
      j["gamma_po"] = !dom.has_value();
      j["dominator"] = dom ? bundles_json(inst, *dom) : nlohmann::json(nullptr);
    }
    emit(j);
  });

  auto* orc = app.add_subcommand("oracle", "exhaustive reference computations");
  orc->require_subcommand(1);

  struct {
    std::string path;
    int threads = 1;
  } om;
  auto* orc_mms = orc->add_subcommand("mms", "exact maximin share per agent");
  orc_mms->add_option("instance", om.path, "instance JSON file")->required();
  orc_mms->add_option("--threads", om.threads, "worker threads");
  orc_mms->callback([&] {
    Instance inst = manna::parse_instance(read_file(om.path));
    nlohmann::json j;
    j["mms"] = rationals_json(oracle_mms_vector(inst, env_budget(), om.threads));
    emit(j);
  });

  struct {
    std::string path;
    int threads = 1;
  } oa;
  auto* orc_astar = orc->add_subcommand("alpha-star", "largest alpha any allocation attains");
  orc_astar->add_option("instance", oa.path, "instance JSON file")->required();
  orc_astar->add_option("--threads", oa.threads, "worker threads");
  orc_astar->callback([&] {
    Instance inst = manna::parse_instance(read_file(oa.path));
    long long budget = env_budget();
    auto mms = oracle_mms_vector(inst, budget, oa.threads);
    nlohmann::json j;
    j["alpha_star"] =
        manna::format_rational(manna::oracle::exact_alpha_star(inst, mms, budget, oa.threads));
    j["mms"] = rationals_json(mms);
    emit(j);
  });

  struct {
    std::string inst_path, alloc_path, gamma = "1/10";
    int threads = 1;
  } opo;
  auto* orc_po = orc->add_subcommand("po", "gamma-Pareto-optimality sweep");
  orc_po->add_option("instance", opo.inst_path, "instance JSON file")->required();
  orc_po->add_option("allocation", opo.alloc_path, "allocation JSON file")->required();
  orc_po->add_option("--gamma", opo.gamma, "Pareto slack, non-negative");
  orc_po->add_option("--threads", opo.threads, "worker threads");
  orc_po->callback([&] {
    Instance inst = manna::parse_instance(read_file(opo.inst_path));
    Allocation alloc = manna::parse_allocation(read_file(opo.alloc_path), inst);
    nlohmann::json j;
    j["gamma_po"] = manna::oracle::is_gamma_po(inst, alloc, manna::parse_rational(opo.gamma),
                                               env_budget(), opo.threads);
    emit(j);
  });

  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->require_subcommand(1);

  struct {
    std::string out;
  } gn;
  auto* gen_non = gen->add_subcommand("nonexistence", "the 3-agent no-positive-alpha instance");
  gen_non->add_option("--out", gn.out, "write the instance here instead of stdout");
  gen_non->callback(
      [&] { emit_text(manna::serialize_instance(manna::generators::gen_nonexistence()), gn.out); });

  struct {
    std::vector<long long> weights;
    std::string variant = "two_agent", tau = "1/4", out;
    int n = 2;
  } gp;
  auto* gen_part = gen->add_subcommand("partition", "PARTITION-reduction instance");
  gen_part->add_option("--weights", gp.weights, "PARTITION weights, non-negative")->required();
  gen_part->add_option("--variant", gp.variant, "two_agent or tau")
      ->check(CLI::IsMember({"two_agent", "tau"}));
  gen_part->add_option("--n", gp.n, "agent count for the tau variant");
  gen_part->add_option("--tau", gp.tau, "tau for the tau variant");
  gen_part->add_option("--out", gp.out, "write the instance here instead of stdout");
  gen_part->callback([&] {
    auto variant = gp.variant == "tau" ? manna::generators::PartitionVariant::tau
                                       : manna::generators::PartitionVariant::two_agent;
    emit_text(manna::serialize_instance(manna::generators::gen_partition_reduction(
                  gp.weights, variant, gp.n, manna::parse_rational(gp.tau))),
              gp.out);
  });

  struct {
    int n = 0, m = 0;
    long long lo = -9, hi = 9;
    std::string tau = "1/4", out;
    std::uint64_t seed = 0;
  } gr;
  auto* gen_rand = gen->add_subcommand("random", "tau-respecting random instance");
  gen_rand->add_option("--n", gr.n, "agent count")->required();
  gen_rand->add_option("--m", gr.m, "item count")->required();
  gen_rand->add_option("--lo", gr.lo, "smallest value");
  gen_rand->add_option("--hi", gr.hi, "largest value");
  gen_rand->add_option("--tau", gr.tau, "tau condition to enforce");
  gen_rand->add_option("--seed", gr.seed, "RNG seed");
  gen_rand->add_option("--out", gr.out, "write the instance here instead of stdout");
  gen_rand->callback([&] {
    emit_text(manna::serialize_instance(manna::generators::gen_random(
                  gr.n, gr.m, gr.lo, gr.hi, manna::parse_rational(gr.tau), gr.seed)),
              gr.out);
  });

  try {
    app.parse(argc, argv);
    return rc;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json err;
    err["error"]["code"] = "bad-parameter";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    std::cout << "error: " << e.what() << "\n";
    return 1;
  } catch (const manna::Error& e) {
    nlohmann::json err;
    err["error"]["code"] = manna::errc_name(e.code());
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    std::cout << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"]["code"] = "defect";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
}
