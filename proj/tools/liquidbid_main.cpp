// Copyright 2026 The Liquidbid Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liquidbid/bestresponse.hpp"
#include "liquidbid/bounds.hpp"
#include "liquidbid/jsonio.hpp"
#include "liquidbid/mechanisms.hpp"
#include "liquidbid/model.hpp"
#include "liquidbid/optimum.hpp"
#include "liquidbid/paperlab.hpp"

namespace {

using namespace liquidbid;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + out_path);
  out << text;
}

JsonValue json_of_matrix(const Matrix& m) {
  JsonValue rows = JsonValue::array();
  for (const auto& row : m) {
    JsonValue r = JsonValue::array();
    for (double v : row) r.push(JsonValue::number(v));
    rows.push(std::move(r));
  }
  return rows;
}

JsonValue json_of_instance(const Instance& instance) {
  JsonValue out = JsonValue::object();
  JsonValue budgets = JsonValue::array();
  for (int i = 0; i < instance.num_bidders(); ++i) {
    const Budget& b = instance.budget(i);
    budgets.push(b.is_infinite() ? JsonValue::string("inf") : JsonValue::number(b.value()));
  }
  out.set("budgets", std::move(budgets));
  out.set("values", json_of_matrix(instance.values()));
  return out;
}

JsonValue json_of_profile(const BidProfile& profile) {
  JsonValue out = JsonValue::object();
  if (profile.mode() == BidMode::kUniform) {
    out.set("mode", JsonValue::string("uniform"));
    JsonValue ms = JsonValue::array();
    for (double m : profile.multipliers()) ms.push(JsonValue::number(m));
    out.set("multipliers", std::move(ms));
  } else {
    out.set("mode", JsonValue::string("per_query"));
    out.set("bids", json_of_matrix(profile.bids()));
  }
  return out;
}

JsonValue json_of_report(const EquilibriumReport& report) {
  JsonValue out = JsonValue::object();
  out.set("feasible", JsonValue::boolean(report.feasible));
  out.set("best_deviation_gain", JsonValue::number(report.best_deviation_gain));
  out.set("epsilon", JsonValue::number(report.epsilon));
  out.set("is_equilibrium", JsonValue::boolean(report.is_equilibrium()));
  out.set("best_deviator", JsonValue::integer(report.best_deviator));
  JsonValue bidders = JsonValue::array();
  for (const BidderState& s : report.per_bidder) {
    JsonValue b = JsonValue::object();
    b.set("value", JsonValue::number(s.value));
    b.set("spend", JsonValue::number(s.spend));
    b.set("budget", JsonValue::number(s.budget));
    b.set("feasible", JsonValue::boolean(s.feasible));
    b.set("binding", JsonValue::string(s.binding));
    bidders.push(std::move(b));
  }
  out.set("per_bidder", std::move(bidders));
  return out;
}

JsonValue json_of_checks(const std::vector<NamedCheck>& checks) {
  JsonValue list = JsonValue::array();
  for (const NamedCheck& c : checks) {
    JsonValue item = JsonValue::object();
    item.set("name", JsonValue::string(c.name));
    item.set("pass", JsonValue::boolean(c.pass));
    item.set("margin", JsonValue::number(c.margin));
    item.set("evaluated", JsonValue::integer(c.evaluated));
    list.push(std::move(item));
  }
  return list;
}

struct MechanismFlags {
  std::string name = "fpa";
  double alpha = 1.4;
  std::string tie = "lowest";

  void attach(CLI::App* cmd) {
    cmd->add_option("--mechanism", name, "fpa, rfpa or qpfpa")
        ->check(CLI::IsMember({"fpa", "rfpa", "qpfpa"}));
    cmd->add_option("--alpha", alpha, "mechanism parameter for rfpa/qpfpa");
    cmd->add_option("--tie", tie, "FPA tie-break: lowest or highest")
        ->check(CLI::IsMember({"lowest", "highest"}));
  }

  MechanismSpec build() const {
    if (name == "rfpa") return MechanismSpec::rfpa(alpha);
    if (name == "qpfpa") return MechanismSpec::qpfpa(alpha);
    return MechanismSpec::fpa(tie == "highest" ? TieBreak::highest_index()
                                               : TieBreak::lowest_index());
  }
};

std::vector<DeviationFamily> families_from_names(const std::vector<std::string>& names,
                                                 const MechanismSpec& mechanism,
                                                 BidMode mode) {
  if (names.empty()) return default_families(mechanism, mode);
  std::vector<DeviationFamily> out;
  for (const std::string& name : names) {
    if (name == "subset") {
      out.push_back(DeviationFamily::fpa_subset());
    } else if (name == "uniform") {
      out.push_back(DeviationFamily::uniform_scan());
    } else if (name == "grid") {
      out.push_back(DeviationFamily::grid_per_query());
    } else if (name == "scale") {
      out.push_back(DeviationFamily::scale_all());
    } else {
      throw ValidationError("unknown deviation family: " + name);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liquidbid: budget- and ROS-constrained auction analysis"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "write results to a file instead of stdout");

  // opt
  auto* opt_cmd = app.add_subcommand("opt", "optimal liquid welfare of an instance");
  std::string opt_instance, opt_mode = "fractional";
  opt_cmd->add_option("--instance", opt_instance, "instance JSON file")->required();
  opt_cmd->add_option("--mode", opt_mode, "fractional or integral")
      ->check(CLI::IsMember({"fractional", "integral"}));

  // eq verify / dynamics / diagnose
  auto* eq_cmd = app.add_subcommand("eq", "equilibrium tools");
  eq_cmd->require_subcommand(1);

  auto* verify_cmd = eq_cmd->add_subcommand("verify", "check a bid profile for equilibrium");
  std::string verify_instance, verify_bids;
  double verify_eps = 0;
  std::vector<std::string> verify_families;
  MechanismFlags verify_mech;
  verify_cmd->add_option("--instance", verify_instance)->required();
  verify_cmd->add_option("--bids", verify_bids, "bid profile JSON file")->required();
  verify_cmd->add_option("--epsilon", verify_eps, "gain tolerance (default: scale-relative)");
  verify_cmd->add_option("--family", verify_families, "subset, uniform, grid, scale");
  verify_mech.attach(verify_cmd);

  auto* dyn_cmd = eq_cmd->add_subcommand("dynamics", "round-robin best-response dynamics");
  std::string dyn_instance, dyn_bids;
  int dyn_rounds = 100;
  double dyn_eps = 0;
  bool dyn_uniform = false;
  std::vector<std::string> dyn_families;
  MechanismFlags dyn_mech;
  dyn_cmd->add_option("--instance", dyn_instance)->required();
  dyn_cmd->add_option("--bids", dyn_bids, "initial profile (default: zero bids)");
  dyn_cmd->add_option("--max-rounds", dyn_rounds);
  dyn_cmd->add_option("--epsilon", dyn_eps);
  dyn_cmd->add_flag("--uniform", dyn_uniform, "restrict bidders to uniform multipliers");
  dyn_cmd->add_option("--family", dyn_families, "subset, uniform, grid, scale");
  dyn_mech.attach(dyn_cmd);

  auto* diag_cmd = eq_cmd->add_subcommand("diagnose", "equilibrium inequality diagnostics (FPA)");
  std::string diag_instance, diag_bids, diag_benchmark = "both", diag_tie = "lowest";
  diag_cmd->add_option("--instance", diag_instance)->required();
  diag_cmd->add_option("--bids", diag_bids)->required();
  diag_cmd->add_option("--tie", diag_tie)->check(CLI::IsMember({"lowest", "highest"}));
  diag_cmd->add_option("--benchmark", diag_benchmark, "fractional, integral, both or none")
      ->check(CLI::IsMember({"fractional", "integral", "both", "none"}));

  // poa
  auto* poa_cmd = app.add_subcommand("poa", "welfare ratios of an equilibrium profile");
  std::string poa_instance, poa_bids;
  MechanismFlags poa_mech;
  poa_cmd->add_option("--instance", poa_instance)->required();
  poa_cmd->add_option("--bids", poa_bids)->required();
  poa_mech.attach(poa_cmd);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form certificates");
  bounds_cmd->require_subcommand(1);

  auto* cert_cmd = bounds_cmd->add_subcommand("certify-rfpa", "rFPA welfare certificate");
  double cert_alpha = 1.4, cert_eta = 0.44, cert_gamma = 0.56;
  int cert_grid = 10000;
  bool cert_uniform = false;
  cert_cmd->add_option("--alpha", cert_alpha)->required();
  cert_cmd->add_option("--eta", cert_eta)->required();
  cert_cmd->add_option("--gamma", cert_gamma)->required();
  cert_cmd->add_option("--grid", cert_grid);
  cert_cmd->add_flag("--uniform", cert_uniform, "use the uniform-bidding spend share");

  auto* qp_cmd = bounds_cmd->add_subcommand("qp", "quasi-proportional welfare bound");
  double qp_eta = 0.5, qp_alpha = 1e6;
  int qp_n = 2;
  qp_cmd->add_option("--eta", qp_eta)->required();
  qp_cmd->add_option("--alpha", qp_alpha)->required();
  qp_cmd->add_option("--n", qp_n)->required();

  // replicate
  auto* rep_cmd = app.add_subcommand("replicate", "run the full replication table");
  std::uint64_t rep_seed = 7;
  int rep_threads = 1;
  std::string rep_format = "json";
  bool rep_timing = false;
  rep_cmd->add_option("--seed", rep_seed);
  rep_cmd->add_option("--threads", rep_threads);
  rep_cmd->add_option("--format", rep_format)->check(CLI::IsMember({"json", "csv"}));
  rep_cmd->add_flag("--timing", rep_timing, "include wall-clock columns (nondeterministic)");

  // search
  auto* search_cmd = app.add_subcommand("search", "randomized worst-case ratio search");
  int search_n = 2, search_q = 2, search_samples = 10000, search_threads = 1;
  std::uint64_t search_seed = 7;
  bool search_uniform = false;
  MechanismFlags search_mech;
  search_cmd->add_option("--n", search_n)->required();
  search_cmd->add_option("--q", search_q)->required();
  search_cmd->add_option("--samples", search_samples);
  search_cmd->add_option("--seed", search_seed);
  search_cmd->add_option("--threads", search_threads);
  search_cmd->add_flag("--uniform", search_uniform, "restrict bidders to uniform multipliers");
  search_mech.attach(search_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*opt_cmd) {
      const Instance instance = load_instance(read_file(opt_instance));
      const OptResult result =
          opt_mode == "integral" ? opt_integral(instance) : opt_fractional(instance);
      JsonValue out = JsonValue::object();
      out.set("mode", JsonValue::string(opt_mode));
      out.set("value", JsonValue::number(result.value));
      out.set("exact", JsonValue::boolean(result.exact));
      out.set("allocation", json_of_matrix(result.allocation.probabilities()));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*verify_cmd) {
      const Instance instance = load_instance(read_file(verify_instance));
      const BidProfile bids = load_bid_profile(read_file(verify_bids), instance);
      const MechanismSpec mechanism = verify_mech.build();
      const auto families = families_from_names(verify_families, mechanism, bids.mode());
      const EquilibriumReport report =
          verify_equilibrium(instance, mechanism, bids, families, verify_eps);
      emit(json_of_report(report).dump(12, 2) + "\n", out_path);
    } else if (*dyn_cmd) {
      const Instance instance = load_instance(read_file(dyn_instance));
      const MechanismSpec mechanism = dyn_mech.build();
      BidProfile init = dyn_bids.empty()
                            ? (dyn_uniform ? BidProfile::uniform(
                                                 instance, std::vector<double>(
                                                               instance.num_bidders(), 0.0))
                                           : BidProfile::per_query(Matrix(
                                                 instance.num_bidders(),
                                                 std::vector<double>(instance.num_queries(), 0.0))))
                            : load_bid_profile(read_file(dyn_bids), instance);
      const auto families = families_from_names(dyn_families, mechanism, init.mode());
      const DynamicsResult result =
          best_response_dynamics(instance, mechanism, families, init, dyn_rounds, dyn_eps);
      const EquilibriumReport report =
          verify_equilibrium(instance, mechanism, result.bids, families, dyn_eps);
      JsonValue out = JsonValue::object();
      out.set("converged", JsonValue::boolean(result.converged));
      out.set("rounds", JsonValue::integer(result.rounds));
      out.set("bids", json_of_profile(result.bids));
      out.set("report", json_of_report(report));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*diag_cmd) {
      const Instance instance = load_instance(read_file(diag_instance));
      const BidProfile bids = load_bid_profile(read_file(diag_bids), instance);
      const TieBreak tie =
          diag_tie == "highest" ? TieBreak::highest_index() : TieBreak::lowest_index();
      std::optional<OptResult> fractional, integral;
      DiagnosticsOptions options;
      if (diag_benchmark == "fractional" || diag_benchmark == "both") {
        fractional = opt_fractional(instance);
        options.fractional_benchmark = &fractional->allocation;
      }
      if (diag_benchmark == "integral" || diag_benchmark == "both") {
        integral = opt_integral(instance);
        options.integral_benchmark = &integral->allocation;
      }
      const auto checks = equilibrium_diagnostics(instance, tie, bids, options);
      bool all_pass = true;
      for (const NamedCheck& c : checks) all_pass = all_pass && c.pass;
      JsonValue out = JsonValue::object();
      out.set("all_pass", JsonValue::boolean(all_pass));
      out.set("checks", json_of_checks(checks));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*poa_cmd) {
      const Instance instance = load_instance(read_file(poa_instance));
      const BidProfile bids = load_bid_profile(read_file(poa_bids), instance);
      const PoaReport report = poa_ratio(instance, poa_mech.build(), bids);
      JsonValue out = JsonValue::object();
      out.set("poa", JsonValue::number(report.poa));
      out.set("ipoa", JsonValue::number(report.ipoa));
      out.set("lw", JsonValue::number(report.lw));
      out.set("opt", JsonValue::number(report.opt));
      out.set("iopt", JsonValue::number(report.iopt));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*cert_cmd) {
      const CertificateResult cert =
          certify_rfpa(cert_alpha, cert_eta, cert_gamma, cert_grid, cert_uniform);
      JsonValue out = JsonValue::object();
      out.set("alpha", JsonValue::number(cert.alpha));
      out.set("eta", JsonValue::number(cert.eta));
      out.set("gamma", JsonValue::number(cert.gamma));
      out.set("uniform", JsonValue::boolean(cert.uniform));
      out.set("grid", JsonValue::integer(cert.grid_size));
      out.set("refined", JsonValue::boolean(cert.refined));
      out.set("value", JsonValue::number(cert.value));
      out.set("beta_term", JsonValue::number(cert.beta_term));
      out.set("argmin_beta", JsonValue::number(cert.argmin_beta));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*qp_cmd) {
      JsonValue out = JsonValue::object();
      out.set("eta", JsonValue::number(qp_eta));
      out.set("alpha", JsonValue::number(qp_alpha));
      out.set("n", JsonValue::integer(qp_n));
      out.set("poa_bound", JsonValue::number(qp_poa_bound(qp_eta, qp_alpha, qp_n)));
      out.set("limit", JsonValue::number(1.0 / qp_eta + 1.0));
      out.set("unit_value_spend_floor",
              JsonValue::number(qp_spend_lower_bound(1.0, qp_eta, qp_alpha, qp_n)));
      emit(out.dump(12, 2) + "\n", out_path);
    } else if (*rep_cmd) {
      ReplicateOptions options;
      options.seed = rep_seed;
      options.threads = rep_threads;
      const auto rows = replicate_all(options);
      emit(rep_format == "csv" ? replication_table_csv(rows, rep_timing)
                               : replication_table_json(rows, rep_timing),
           out_path);
    } else if (*search_cmd) {
      const SearchOutcome result =
          worst_case_search(search_mech.build(), search_uniform, search_n, search_q,
                            search_samples, search_seed, search_threads);
      JsonValue out = JsonValue::object();
      out.set("mechanism", JsonValue::string(search_mech.name));
      out.set("uniform", JsonValue::boolean(search_uniform));
      out.set("samples", JsonValue::integer(result.samples));
      out.set("converged", JsonValue::integer(result.converged));
      out.set("verified", JsonValue::integer(result.verified));
      out.set("best_poa", JsonValue::number(result.best_poa));
      out.set("best_ipoa", JsonValue::number(result.best_ipoa));
      out.set("best_poa_sample", JsonValue::integer(result.best_poa_sample));
      out.set("best_ipoa_sample", JsonValue::integer(result.best_ipoa_sample));
      if (result.poa_witness) {
        out.set("poa_witness", json_of_instance(*result.poa_witness));
        out.set("poa_witness_bids", json_of_profile(*result.poa_witness_bids));
      }
      if (result.ipoa_witness) {
        out.set("ipoa_witness", json_of_instance(*result.ipoa_witness));
        out.set("ipoa_witness_bids", json_of_profile(*result.ipoa_witness_bids));
      }
      emit(out.dump(12, 2) + "\n", out_path);
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << " (iterations: " << e.iterations() << ")\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SizeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
