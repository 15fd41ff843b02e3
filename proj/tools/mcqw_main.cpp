// Command-line front end: exact walk distributions, limit-law queries,
// verification suites, and phase-diagram sweeps. Exit codes: 0 success,
// 1 verification failure, 2 usage error, 3 budget exceeded.
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcqw/convergence.hpp"
#include "mcqw/io.hpp"
#include "mcqw/limit_laws.hpp"
#include "mcqw/state_oracle.hpp"
#include "mcqw/walk_engine.hpp"

namespace {

using mcqw::ordered_json;

constexpr const char* kVersion = "1.0.0";

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  mcqw::write_text_atomic(out_path, text);
}

ordered_json base_meta(const std::string& subcommand) {
  ordered_json meta;
  meta["tool"] = "mcqw";
  meta["version"] = kVersion;
  meta["subcommand"] = subcommand;
  return meta;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct ParsedInit {
  mcqw::InitialSpec spec;
  int n_pure = -1;  // realized pure-coin count for mix:beta=..., else -1
};

// init grammar: caseA | caseB | ket1 | mix:beta=X | file=PATH.
// M == 0 with file= derives M from the line count.
ParsedInit parse_init(const std::string& s, int& M) {
  ParsedInit out;
  if (s == "caseA") {
    out.spec = mcqw::InitialSpec::case_a(M);
  } else if (s == "caseB") {
    out.spec = mcqw::InitialSpec::case_b(M);
  } else if (s == "ket1") {
    out.spec = mcqw::InitialSpec::ket1(M);
  } else if (s.rfind("mix:beta=", 0) == 0) {
    double beta = 0.0;
    try {
      size_t used = 0;
      beta = std::stod(s.substr(9), &used);
      if (used != s.size() - 9) throw std::invalid_argument("");
    } catch (...) {
      throw std::invalid_argument("init: cannot parse '" + s + "'");
    }
    if (!(beta >= 0.0 && beta <= 1.0))
      throw std::invalid_argument("init: mix beta must lie in [0, 1]");
    int n_pure = int(std::lround(std::pow(double(M), beta)));
    n_pure = std::min(std::max(n_pure, 0), M);
    out.spec = mcqw::InitialSpec::mixture(M, n_pure);
    out.n_pure = n_pure;
  } else if (s.rfind("file=", 0) == 0) {
    const std::string path = s.substr(5);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("init: cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string first;
      if (!(row >> first)) continue;  // blank line
      mcqw::CoinInit coin;
      if (first == "mixed") {
        coin.mixed = true;
      } else {
        double re0 = 0, im0 = 0, re1 = 0, im1 = 0;
        try {
          re0 = std::stod(first);
        } catch (...) {
          throw std::invalid_argument("init file: bad token '" + first + "'");
        }
        if (!(row >> im0 >> re1 >> im1))
          throw std::invalid_argument(
              "init file: each coin line needs 'mixed' or four reals");
        coin.mixed = false;
        coin.amp << mcqw::cplx(re0, im0), mcqw::cplx(re1, im1);
      }
      std::string extra;
      if (row >> extra)
        throw std::invalid_argument("init file: trailing token '" + extra + "'");
      out.spec.coins.push_back(coin);
    }
    if (out.spec.coins.empty())
      throw std::invalid_argument("init file: no coins in '" + path + "'");
    if (M == 0) M = int(out.spec.coins.size());
  } else {
    throw std::invalid_argument(
        "init: expected caseA, caseB, ket1, mix:beta=X or file=PATH, got '" + s +
        "'");
  }
  out.spec.validate(M);
  return out;
}

int cmd_dist(int M, long t, const std::string& init_str, const std::string& fmt,
             const std::string& out, double budget) {
  ParsedInit init = parse_init(init_str, M);
  const mcqw::PositionDistribution dist =
      mcqw::distribution(mcqw::WalkSpec{M, t}, init.spec, budget);

  // Only lattice sites of the reachable parity class carry mass.
  std::vector<long> xs;
  std::vector<double> ms;
  for (long x = -t; x <= t; ++x) {
    if ((x + t) % 2 != 0) continue;
    xs.push_back(x);
    ms.push_back(dist.mass_at(x));
  }
  if (init.n_pure >= 0 && fmt == "csv")
    std::fprintf(stderr, "init %s: n_pure=%d n_mixed=%d\n", init_str.c_str(),
                 init.n_pure, M - init.n_pure);

  if (fmt == "csv") {
    std::vector<std::vector<double>> rows;
    rows.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
      rows.push_back({double(xs[i]), ms[i]});
    emit(out, mcqw::csv_table("x,probability", rows));
  } else {
    ordered_json j;
    j["meta"] = base_meta("dist");
    j["meta"]["M"] = M;
    j["meta"]["t"] = t;
    j["meta"]["init"] = init_str;
    if (init.n_pure >= 0) {
      j["meta"]["n_pure"] = init.n_pure;
      j["meta"]["n_mixed"] = M - init.n_pure;
    }
    j["meta"]["budget"] = budget;
    ordered_json data;
    data["t"] = dist.t;
    data["M"] = M;
    data["x"] = xs;
    data["mass"] = ms;
    j["data"] = std::move(data);
    emit(out, dump(j));
  }
  return 0;
}

int cmd_law(const std::string& name, std::optional<double> density_x,
            std::optional<double> cdf_x, std::optional<int> moment_n,
            std::optional<long> sample_n, const std::string& grid,
            std::string fmt, const std::string& out, std::uint64_t seed) {
  const mcqw::LawPtr law = mcqw::make_law(name);
  const int n_queries = int(density_x.has_value()) + int(cdf_x.has_value()) +
                        int(moment_n.has_value()) + int(sample_n.has_value());
  if (n_queries != 1)
    throw std::invalid_argument(
        "law: exactly one of --density, --cdf, --moment, --sample is required");

  ordered_json meta = base_meta("law");
  meta["law"] = law->name();

  if (!grid.empty()) {
    if (!density_x && !cdf_x)
      throw std::invalid_argument("law: --grid applies to --density/--cdf only");
    double lo = 0, hi = 0;
    long n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream g(grid);
    if (!(g >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 ||
        !(hi > lo) || (g >> c1))
      throw std::invalid_argument("law: --grid expects lo:hi:n with n >= 2");
    std::vector<std::vector<double>> rows;
    rows.reserve(size_t(n));
    for (long i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * double(i) / double(n - 1);
      rows.push_back({x, density_x ? law->density(x) : law->cdf(x)});
    }
    if (fmt == "json") {
      ordered_json j;
      meta["query"] = density_x ? "density" : "cdf";
      meta["grid"] = grid;
      j["meta"] = std::move(meta);
      ordered_json xs = ordered_json::array(), vs = ordered_json::array();
      for (const auto& r : rows) {
        xs.push_back(r[0]);
        vs.push_back(r[1]);
      }
      j["data"]["x"] = std::move(xs);
      j["data"]["value"] = std::move(vs);
      emit(out, dump(j));
    } else {
      emit(out, mcqw::csv_table("x,value", rows));
    }
    return 0;
  }

  if (sample_n) {
    if (*sample_n < 1) throw std::invalid_argument("law: --sample needs n >= 1");
    const std::vector<double> draws = law->sample(*sample_n, seed);
    if (fmt == "json") {
      ordered_json j;
      meta["query"] = "sample";
      meta["n"] = *sample_n;
      meta["seed"] = seed;
      j["meta"] = std::move(meta);
      j["data"]["value"] = draws;
      emit(out, dump(j));
    } else {
      std::vector<std::vector<double>> rows;
      rows.reserve(draws.size());
      for (size_t i = 0; i < draws.size(); ++i)
        rows.push_back({double(i), draws[i]});
      emit(out, mcqw::csv_table("x,value", rows));
    }
    return 0;
  }

  // Scalar query; JSON unless CSV was forced.
  double x = 0.0, value = 0.0;
  std::string query;
  if (density_x) {
    query = "density";
    x = *density_x;
    value = law->density(x);
  } else if (cdf_x) {
    query = "cdf";
    x = *cdf_x;
    value = law->cdf(x);
  } else {
    query = "moment";
    x = double(*moment_n);
    value = law->moment(*moment_n);
  }
  if (fmt == "csv") {
    emit(out, mcqw::csv_table("x,value", {{x, value}}));
  } else {
    ordered_json j;
    meta["query"] = query;
    j["meta"] = std::move(meta);
    j["data"]["x"] = x;
    j["data"]["value"] = value;
    emit(out, dump(j));
  }
  return 0;
}

int cmd_verify(const std::string& suite, const std::vector<double>& betas,
               long t_max, double budget, const std::string& out) {
  const ordered_json rep = mcqw::run_suite(suite, betas, t_max, budget);
  ordered_json j;
  j["meta"] = base_meta("verify");
  j["meta"]["suite"] = suite;
  j["meta"]["budget"] = budget;
  if (!betas.empty()) j["meta"]["betas"] = betas;
  if (t_max > 0) j["meta"]["t_max"] = t_max;
  j["data"] = rep;
  emit(out, dump(j));
  if (rep.contains("budget_exceeded") && rep["budget_exceeded"].get<bool>())
    return 3;
  return rep["pass"].get<bool>() ? 0 : 1;
}

int cmd_sweep(const std::string& assumption, const std::vector<double>& betas,
              long t_max, double budget, const std::string& fmt,
              const std::string& out) {
  if (assumption.size() != 1 ||
      (assumption[0] != 'a' && assumption[0] != 'b' && assumption[0] != 'c'))
    throw std::invalid_argument("sweep: --assumption must be a, b or c");
  if (betas.empty())
    throw std::invalid_argument("sweep: --betas must list at least one value");
  const ordered_json rep =
      mcqw::phase_sweep(assumption[0], betas, t_max, budget);

  if (fmt == "csv") {
    std::vector<std::vector<double>> rows;
    for (const auto& sweep : rep["sweeps"]) {
      for (const auto& row : sweep["rows"]) {
        rows.push_back({sweep["beta"].get<double>(),
                        sweep["theta"].get<double>(),
                        double(row["M"].get<long>()),
                        double(row["t"].get<long>()),
                        double(row["d"].get<long>()),
                        double(row["q"].get<long>()),
                        row.contains("n_pure") ? double(row["n_pure"].get<long>())
                                               : -1.0,
                        row["realized_beta"].is_null()
                            ? std::nan("")
                            : row["realized_beta"].get<double>(),
                        row["ks"].get<double>(), row["std"].get<double>(),
                        row["scaled_m2"].get<double>(),
                        row["scaled_m4"].get<double>(),
                        row["scaled_std_above"].get<double>()});
      }
    }
    emit(out, mcqw::csv_table(
                  "beta,theta,M,t,d,q,n_pure,realized_beta,ks,std,scaled_m2,"
                  "scaled_m4,scaled_std_above",
                  rows));
  } else {
    ordered_json j;
    j["meta"] = base_meta("sweep");
    j["meta"]["assumption"] = assumption;
    j["meta"]["betas"] = betas;
    j["meta"]["t_max"] = t_max;
    j["meta"]["budget"] = budget;
    j["data"] = rep;
    emit(out, dump(j));
  }
  return rep["budget_exceeded"].get<bool>() ? 3 : 0;
}

int cmd_oracle_check(int M, long t, const std::string& init_str, long samples,
                     std::uint64_t seed, double budget, const std::string& out) {
  ParsedInit init = parse_init(init_str, M);
  const mcqw::WalkSpec spec{M, t};
  const mcqw::PositionDistribution fast = mcqw::distribution(spec, init.spec, budget);
  const mcqw::PositionDistribution slow =
      mcqw::oracle_distribution(spec, init.spec, budget);
  const double tv = mcqw::total_variation(fast, slow);
  bool pass = tv < 1e-10;

  ordered_json j;
  j["meta"] = base_meta("oracle-check");
  j["meta"]["M"] = M;
  j["meta"]["t"] = t;
  j["meta"]["init"] = init_str;
  ordered_json data;
  data["tv_engine_vs_oracle"] = tv;
  data["limit"] = 1e-10;
  if (samples > 0) {
    if (init_str != "caseB")
      throw std::invalid_argument(
          "oracle-check: --samples applies to --init caseB only");
    const mcqw::PositionDistribution mc =
        mcqw::sample_case_b(M, t, samples, seed, budget);
    const double stv = mcqw::total_variation(mc, fast);
    data["tv_sampled_vs_engine"] = stv;
    data["samples"] = samples;
    data["seed"] = seed;
    data["sample_limit"] = 0.05;
    pass = pass && stv < 0.05;
  }
  data["pass"] = pass;
  j["data"] = std::move(data);
  emit(out, dump(j));
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mcqw: exact distributions and limit-law verification for cyclic "
      "multi-coin quantum walks on the integer lattice"};
  app.require_subcommand(1);

  // dist
  auto* dist = app.add_subcommand("dist", "exact position distribution of X_t");
  int d_M = 0;
  long d_t = 0;
  std::string d_init = "caseA", d_fmt = "csv", d_out;
  double d_budget = 6e9;
  dist->add_option("--M", d_M, "number of coins (derived from file= init when omitted)");
  dist->add_option("--t", d_t, "number of steps")->required();
  dist->add_option("--init", d_init,
                   "caseA | caseB | ket1 | mix:beta=X | file=PATH");
  dist->add_option("--format", d_fmt, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  dist->add_option("--out", d_out, "output path (stdout when omitted)");
  dist->add_option("--budget", d_budget, "max factor evaluations");

  // law
  auto* law = app.add_subcommand("law", "query a limit law from the catalog");
  std::string l_name, l_grid, l_fmt = "json", l_out;
  std::optional<double> l_density, l_cdf;
  std::optional<int> l_moment;
  std::optional<long> l_sample;
  std::uint64_t l_seed = 12345;
  law->add_option("name", l_name, "law name, e.g. konno, arcsine:beta=1")
      ->required();
  law->add_option("--density", l_density, "evaluate the density at x");
  law->add_option("--cdf", l_cdf, "evaluate the cdf at x");
  law->add_option("--moment", l_moment, "n-th moment, n in [0, 8]");
  law->add_option("--sample", l_sample, "draw n samples");
  law->add_option("--grid", l_grid, "lo:hi:n table for --density/--cdf");
  law->add_option("--format", l_fmt, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  law->add_option("--out", l_out, "output path (stdout when omitted)");
  law->add_option("--seed", l_seed, "sampler seed");

  // verify
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  std::string v_suite, v_out;
  std::vector<double> v_betas;
  long v_tmax = 0;
  double v_budget = 6e9;
  verify
      ->add_option("suite", v_suite,
                   "oracle | lemmas | moments | corollary | theorem:a|b|c | "
                   "double-limit")
      ->required();
  verify->add_option("--betas", v_betas, "comma-separated betas for theorem suites")
      ->delimiter(',');
  verify->add_option("--beta", v_betas, "single beta (may repeat)");
  verify->add_option("--tmax", v_tmax, "cap ladder times (0 = uncapped)");
  verify->add_option("--budget", v_budget, "max factor evaluations per run");
  verify->add_option("--out", v_out, "output path (stdout when omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "phase-diagram sweep at critical theta");
  std::string s_as, s_fmt = "json", s_out;
  std::vector<double> s_betas;
  long s_tmax = 0;
  double s_budget = 6e9;
  sweep->add_option("--assumption", s_as, "a | b | c")->required();
  sweep->add_option("--betas", s_betas, "comma-separated betas")
      ->delimiter(',')
      ->required();
  sweep->add_option("--tmax", s_tmax, "cap ladder times (0 = uncapped)");
  sweep->add_option("--budget", s_budget, "max factor evaluations per run");
  sweep->add_option("--format", s_fmt, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", s_out, "output path (stdout when omitted)");

  // oracle-check
  auto* oc = app.add_subcommand("oracle-check",
                                "engine vs dense-state oracle on one instance");
  int o_M = 1;
  long o_t = 1, o_samples = 0;
  std::string o_init = "caseA", o_out;
  std::uint64_t o_seed = 12345;
  double o_budget = 2e9;
  oc->add_option("--M", o_M, "number of coins")->required();
  oc->add_option("--t", o_t, "number of steps")->required();
  oc->add_option("--init", o_init, "caseA | caseB | ket1 | mix:beta=X | file=PATH");
  oc->add_option("--samples", o_samples,
                 "also Monte-Carlo sample caseB with this many draws");
  oc->add_option("--seed", o_seed, "sampler seed");
  oc->add_option("--budget", o_budget, "oracle work budget");
  oc->add_option("--out", o_out, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dist) return cmd_dist(d_M, d_t, d_init, d_fmt, d_out, d_budget);
    if (*law)
      return cmd_law(l_name, l_density, l_cdf, l_moment, l_sample, l_grid,
                     l_fmt, l_out, l_seed);
    if (*verify) return cmd_verify(v_suite, v_betas, v_tmax, v_budget, v_out);
    if (*sweep) return cmd_sweep(s_as, s_betas, s_tmax, s_budget, s_fmt, s_out);
    if (*oc)
      return cmd_oracle_check(o_M, o_t, o_init, o_samples, o_seed, o_budget,
                              o_out);
  } catch (const mcqw::BudgetError& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
