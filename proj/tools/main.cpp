#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reptalk/emit.hpp"
#include "reptalk/parallel.hpp"
#include "reptalk/serialize.hpp"

namespace {

using nlohmann::json;
using namespace reptalk;

// Exit-code contract: 0 ok, 1 config error, 2 assumption failure,
// 3 no informative equilibrium, 4 verification failure.
enum ExitCode {
  kOk = 0,
  kConfigError = 1,
  kAssumptionFailure = 2,
  kNoEquilibrium = 3,
  kVerificationFailure = 4,
};

struct RunConfig {
  std::optional<double> mu;
  std::optional<double> p;
  std::string high;
  std::string low;
  std::optional<double> grid_lo, grid_hi, grid_step;
  std::uint64_t seed = 20250101;
  std::uint64_t draws = 1000000;
  std::string output;
  std::string format = "csv";  // sweep only; solve/regions/verify emit JSON
  std::string figure;
  std::string sweep = "mu";
  int threads = 0;
  std::optional<double> beta;
  std::string candidate;
  std::vector<double> p_list;
  double region_step = 0.002;
  int grid_points = 512;
};

double require(const std::optional<double>& v, const char* key) {
  if (!v) throw config_error(std::string("config missing required key '") + key + "'");
  return *v;
}

double require_mu(const RunConfig& cfg) {
  const double mu = require(cfg.mu, "mu");
  if (!(mu >= 0.5 && mu < 1.0))
    throw config_error("key 'mu' must lie in [1/2, 1)");
  return mu;
}

double require_p(const RunConfig& cfg) {
  const double p = require(cfg.p, "p");
  if (!(p > 0.0 && p < 1.0)) throw config_error("key 'p' must lie in (0, 1)");
  return p;
}

ExperimentModel parse_experiment(const std::string& desc, const char* key) {
  const auto colon = desc.find(':');
  if (colon == std::string::npos)
    throw config_error(std::string("key '") + key +
                       "': experiment descriptor must be mle:<x>, hyper:<k> or "
                       "table:<path>, got '" + desc + "'");
  const std::string family = desc.substr(0, colon);
  const std::string arg = desc.substr(colon + 1);
  try {
    if (family == "mle") return ExperimentModel::multiplicative_linear(std::stod(arg));
    if (family == "hyper") return ExperimentModel::hyperexponential(std::stoi(arg));
    if (family == "table") return ExperimentModel::tabulated_from_csv_file(arg);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("key '") + key + "': bad descriptor '" +
                       desc + "': " + e.what());
  }
  throw config_error(std::string("key '") + key + "': unknown family '" +
                     family + "'");
}

void load_config_json(const std::string& path, RunConfig& cfg) {
  json doc;
  try {
    if (path == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw config_error("cannot open config '" + path + "'");
      doc = json::parse(in);
    }
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  auto grab = [&](const char* key, auto& slot) {
    if (doc.contains(key)) slot = doc.at(key);
  };
  try {
    if (doc.contains("mu")) cfg.mu = doc.at("mu").get<double>();
    if (doc.contains("p")) cfg.p = doc.at("p").get<double>();
    grab("high", cfg.high);
    grab("low", cfg.low);
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      cfg.grid_lo = g.at("lo").get<double>();
      cfg.grid_hi = g.at("hi").get<double>();
      cfg.grid_step = g.at("step").get<double>();
    }
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("draws")) cfg.draws = doc.at("draws").get<std::uint64_t>();
    grab("output", cfg.output);
    grab("format", cfg.format);
    grab("figure", cfg.figure);
    grab("sweep", cfg.sweep);
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
    if (doc.contains("beta")) cfg.beta = doc.at("beta").get<double>();
    grab("candidate", cfg.candidate);
    if (doc.contains("p_list"))
      cfg.p_list = doc.at("p_list").get<std::vector<double>>();
    if (doc.contains("grid_step")) cfg.region_step = doc.at("grid_step").get<double>();
  } catch (const json::exception& e) {
    throw config_error(std::string("config key error: ") + e.what());
  }
}

ExperimentPair build_pair(const RunConfig& cfg) {
  if (cfg.high.empty()) throw config_error("config missing required key 'high'");
  if (cfg.low.empty()) throw config_error("config missing required key 'low'");
  return {parse_experiment(cfg.high, "high"), parse_experiment(cfg.low, "low")};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw config_error("cannot open output '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Gate shared by every subcommand that builds a structure.
int gate_assumptions(std::ostream& os, const ExperimentPair& pair, double mu) {
  const AssumptionReport rep = validate_assumptions(pair, mu);
  if (!rep.overall) {
    write_assumption_report_json(os, rep);
    return kAssumptionFailure;
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg) {
  Output out(cfg.output);
  const ExperimentPair pair = build_pair(cfg);
  require_p(cfg);  // the run config contract needs p even though (a)-(c) do not
  const AssumptionReport rep = validate_assumptions(pair, require_mu(cfg));
  write_assumption_report_json(out.os(), rep);
  return rep.overall ? kOk : kAssumptionFailure;
}

int cmd_solve(const RunConfig& cfg) {
  Output out(cfg.output);
  const ExperimentPair pair = build_pair(cfg);
  const double mu = require_mu(cfg);
  const double p = require_p(cfg);
  if (int rc = gate_assumptions(out.os(), pair, mu)) return rc;
  const EquilibriumSolution sol = solve_cutoff({mu, p, pair});
  write_solution_json(out.os(), sol);
  return sol.exists ? kOk : kNoEquilibrium;
}

std::vector<double> grid_values(const RunConfig& cfg) {
  const double lo = require(cfg.grid_lo, "grid.lo");
  const double hi = require(cfg.grid_hi, "grid.hi");
  const double step = require(cfg.grid_step, "grid.step");
  if (!(step > 0.0)) throw config_error("grid.step must be positive");
  std::vector<double> values;
  for (double v = lo; v <= hi + 1e-12; v += step) values.push_back(v);
  return values;
}

const char* kSweepHeaderP =
    "p,beta,matching_total,matching_h,matching_l,reservation,receiver_payoff,"
    "influential,error";

void write_rows_json(std::ostream& os, const char* axis_name,
                     const std::vector<double>& axis,
                     const PayoffProfile& prof) {
  JsonWriter w(os);
  w.begin_object();
  w.key("rows").begin_array();
  for (std::size_t i = 0; i < prof.rows.size(); ++i) {
    const PayoffRow& r = prof.rows[i];
    w.begin_object();
    w.kv(axis_name, axis[i]);
    w.kv("beta", r.beta);
    w.kv("matching_total", r.matching_total);
    w.kv("matching_h", r.matching_h);
    w.kv("matching_l", r.matching_l);
    w.kv("reservation", r.reservation);
    w.kv("receiver_payoff", r.receiver_payoff);
    if (r.ok)
      w.kv("influential", r.influential);
    else
      w.kv_null("influential");
    w.kv("error", r.error);
    w.end_object();
  }
  w.end_array();
  if (prof.has_dip)
    w.kv("dip_location", prof.dip_location);
  else
    w.kv_null("dip_location");
  w.end_object();
  os << '\n';
}

int cmd_sweep(const RunConfig& cfg) {
  Output out(cfg.output);
  const ExperimentPair pair = build_pair(cfg);

  if (cfg.figure == "fig1") {
    // fig1 dataset: the four belief-CDF curves H(beta|t,s) on a 400-point grid.
    const double mu = require_mu(cfg);
    if (int rc = gate_assumptions(out.os(), pair, mu)) return rc;
    out.os() << "beta,H_h0,H_h1,H_l0,H_l1\n";
    for (int i = 0; i < 400; ++i) {
      const double beta = static_cast<double>(i) / 399.0;
      csv_row(out.os(),
              {fmt_real(beta),
               fmt_real(belief_cdf(mu, pair, beta, SenderType::high, 0)),
               fmt_real(belief_cdf(mu, pair, beta, SenderType::high, 1)),
               fmt_real(belief_cdf(mu, pair, beta, SenderType::low, 0)),
               fmt_real(belief_cdf(mu, pair, beta, SenderType::low, 1))});
    }
    return kOk;
  }

  const std::vector<double> axis = grid_values(cfg);
  const bool over_p = cfg.sweep == "p";
  if (!over_p && !axis.empty()) {
    if (int rc = gate_assumptions(out.os(), pair, axis.front())) return rc;
  } else if (over_p || cfg.mu) {
    if (int rc = gate_assumptions(out.os(), pair, require_mu(cfg))) return rc;
  }

  PayoffProfile prof;
  if (over_p) {
    const double mu = require_mu(cfg);
    prof.rows.resize(axis.size());
    parallel_for(axis.size(), cfg.threads, [&](std::size_t i) {
      PayoffRow& row = prof.rows[i];
      row.mu = mu;
      row.reservation = mu;
      if (!(axis[i] > 0.0 && axis[i] < 1.0)) {
        row.error = "p outside (0, 1)";
        return;
      }
      try {
        const EquilibriumSolution sol = solve_cutoff({mu, axis[i], pair});
        if (!sol.exists) {
          row.error = "no informative equilibrium";
          return;
        }
        row.beta = sol.beta;
        row.matching_total = sol.matching_total;
        row.matching_h = sol.matching_h;
        row.matching_l = sol.matching_l;
        row.receiver_payoff = sol.receiver_payoff;
        row.influential = sol.influential;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    });
  } else {
    const double p = require_p(cfg);
    prof = payoff_profile(p, pair, axis, cfg.threads);
  }

  if (cfg.figure == "fig2") {
    out.os() << "mu,matching_total,reservation\n";
    for (const PayoffRow& r : prof.rows)
      csv_row(out.os(), {fmt_real(r.mu), fmt_real(r.matching_total),
                         fmt_real(r.reservation)});
    return kOk;
  }
  if (cfg.format == "json") {
    write_rows_json(out.os(), over_p ? "p" : "mu", axis, prof);
  } else if (over_p) {
    out.os() << kSweepHeaderP << '\n';
    for (std::size_t i = 0; i < prof.rows.size(); ++i) {
      const PayoffRow& r = prof.rows[i];
      csv_row(out.os(),
              {fmt_real(axis[i]), fmt_real(r.beta), fmt_real(r.matching_total),
               fmt_real(r.matching_h), fmt_real(r.matching_l),
               fmt_real(r.reservation), fmt_real(r.receiver_payoff),
               r.ok ? (r.influential ? "1" : "0") : "", r.error});
    }
  } else {
    write_profile_csv(out.os(), prof);
  }
  return kOk;
}

int cmd_regions(const RunConfig& cfg) {
  Output out(cfg.output);
  const ExperimentPair pair = build_pair(cfg);
  const double p = require_p(cfg);
  if (int rc = gate_assumptions(out.os(), pair, cfg.mu.value_or(0.5))) return rc;

  try {
    const RegionReport rep =
        influential_intervals(p, pair, cfg.region_step, cfg.threads);
    JsonWriter w(out.os());
    w.begin_object();
    w.key("regions");
    write_region_report_json(w, rep);
    if (!cfg.p_list.empty()) {
      const NestingReport nest =
          region_nesting(cfg.p_list, pair, cfg.region_step, 0.05, cfg.threads);
      w.key("nesting").begin_object();
      w.kv("nested", nest.nested);
      w.kv("strict_witness", nest.has_strict_witness);
      w.kv("witness_mu", nest.witness_mu);
      w.key("violations").begin_array();
      for (const NestingViolation& v : nest.violations)
        w.begin_object()
            .kv("p_small", v.p_small)
            .kv("p_large", v.p_large)
            .kv("mu", v.mu)
            .end_object();
      w.end_array();
      w.end_object();
    }
    w.end_object();
    out.os() << '\n';
  } catch (const no_equilibrium_error& e) {
    std::cerr << e.what() << '\n';
    return kNoEquilibrium;
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  Output out(cfg.output);
  const ExperimentPair pair = build_pair(cfg);
  const double mu = require_mu(cfg);
  const double p = require_p(cfg);
  if (int rc = gate_assumptions(out.os(), pair, mu)) return rc;
  const InformationStructure xi{mu, p, pair};

  double beta;
  if (cfg.beta) {
    beta = *cfg.beta;
  } else if (!cfg.candidate.empty()) {
    std::ifstream in(cfg.candidate);
    if (!in) throw config_error("cannot open candidate '" + cfg.candidate + "'");
    try {
      beta = json::parse(in).at("beta").get<double>();
    } catch (const json::exception& e) {
      throw config_error(std::string("candidate parse error: ") + e.what());
    }
  } else {
    const EquilibriumSolution sol = solve_cutoff(xi);
    if (!sol.exists) return kNoEquilibrium;
    beta = sol.beta;
  }

  OracleReport rep = verify_equilibrium(xi, beta, cfg.grid_points);
  const OracleReport mc = simulate(xi, beta, cfg.draws, cfg.seed, cfg.threads);
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s) rep.reputations_mc[m][s] = mc.reputations_mc[m][s];
  rep.matching_mc = mc.matching_mc;

  bool agrees = false;
  try {
    const Reputations analytic = reputations(xi, beta);
    const double matching =
        type_mean(p, matching_payoff(xi, beta, SenderType::high),
                  matching_payoff(xi, beta, SenderType::low));
    compare_to_analytic(rep, analytic, matching);
    agrees = mc_agrees(rep, analytic, matching);
  } catch (const degenerate_cutoff_error& e) {
    rep.diagnostic = e.what();
  }

  write_oracle_report_json(out.os(), beta, rep, agrees, cfg.seed, cfg.draws);
  return (rep.incentive_sign_ok && rep.receiver_best_reply_ok && agrees)
             ? kOk
             : kVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informative-equilibrium solver for reputational cheap talk"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string grid_spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file, or - for stdin");
    sub->add_option("--mu", "prior state belief, in [1/2,1)");
    sub->add_option("--p", "initial reputation, in (0,1)");
    sub->add_option("--high", "high type: mle:<x>|hyper:<k>|table:<path>");
    sub->add_option("--low", "low type: mle:<x>|hyper:<k>|table:<path>");
    sub->add_option("--grid", grid_spec, "lo:hi:step");
    sub->add_option("--figure", "fig1|fig2");
    sub->add_option("--seed", "simulation seed");
    sub->add_option("--draws", "simulation draw count");
    sub->add_option("--threads", "worker pool size (0 = machine parallelism)");
    sub->add_option("--output", "output path (default stdout)");
    sub->add_option("--format", "json|csv (sweep output)");
    sub->add_option("--sweep", "sweep axis: mu|p");
    sub->add_option("--beta", "candidate cutoff override (verify)");
    sub->add_option("--candidate", "solution JSON whose beta to verify");
    sub->add_option("--grid-step", "regions scan step");
    sub->add_option("--p-list", "comma-separated reputations for nesting");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the maintained assumptions");
  CLI::App* solve = app.add_subcommand("solve", "solve the informative equilibrium");
  CLI::App* sweep = app.add_subcommand("sweep", "tabulate the equilibrium along a grid");
  CLI::App* regions = app.add_subcommand("regions", "influential-prior regions");
  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo + best-reply oracle");
  for (CLI::App* sub : {validate, solve, sweep, regions, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    // config file first, then flags override individual keys
    if (sub->count("--config")) load_config_json(config_path, cfg);
    auto override_real = [&](const char* flag, std::optional<double>& slot) {
      if (sub->count(flag)) slot = sub->get_option(flag)->as<double>();
    };
    override_real("--mu", cfg.mu);
    override_real("--p", cfg.p);
    override_real("--beta", cfg.beta);
    if (sub->count("--high")) cfg.high = sub->get_option("--high")->as<std::string>();
    if (sub->count("--low")) cfg.low = sub->get_option("--low")->as<std::string>();
    if (sub->count("--grid")) {
      std::istringstream gs(grid_spec);
      std::string part;
      double vals[3];
      for (int i = 0; i < 3; ++i) {
        if (!std::getline(gs, part, ':'))
          throw config_error("--grid must be lo:hi:step");
        vals[i] = std::stod(part);
      }
      cfg.grid_lo = vals[0];
      cfg.grid_hi = vals[1];
      cfg.grid_step = vals[2];
    }
    if (sub->count("--figure")) cfg.figure = sub->get_option("--figure")->as<std::string>();
    if (sub->count("--seed")) cfg.seed = sub->get_option("--seed")->as<std::uint64_t>();
    if (sub->count("--draws")) cfg.draws = sub->get_option("--draws")->as<std::uint64_t>();
    if (sub->count("--threads")) cfg.threads = sub->get_option("--threads")->as<int>();
    if (sub->count("--output")) cfg.output = sub->get_option("--output")->as<std::string>();
    if (sub->count("--format")) cfg.format = sub->get_option("--format")->as<std::string>();
    if (sub->count("--sweep")) cfg.sweep = sub->get_option("--sweep")->as<std::string>();
    if (sub->count("--candidate"))
      cfg.candidate = sub->get_option("--candidate")->as<std::string>();
    if (sub->count("--grid-step"))
      cfg.region_step = sub->get_option("--grid-step")->as<double>();
    if (sub->count("--p-list")) {
      cfg.p_list.clear();
      std::istringstream ps(sub->get_option("--p-list")->as<std::string>());
      std::string part;
      while (std::getline(ps, part, ',')) cfg.p_list.push_back(std::stod(part));
    }

    if (sub == validate) return cmd_validate(cfg);
    if (sub == solve) return cmd_solve(cfg);
    if (sub == sweep) return cmd_sweep(cfg);
    if (sub == regions) return cmd_regions(cfg);
    return cmd_verify(cfg);
  } catch (const config_error& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const no_equilibrium_error& e) {
    std::cerr << e.what() << '\n';
    return kNoEquilibrium;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
}
