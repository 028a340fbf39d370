// Command-line front door: every experiment runs behind a subcommand that
// writes one CSV plus a JSON manifest and exits 0 (all assertions passed),
// 2 (an assertion failed) or 1 (usage/config error).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gexpect/bounds.hpp"
#include "gexpect/certification.hpp"
#include "gexpect/errors.hpp"
#include "gexpect/experiments.hpp"
#include "gexpect/expansion.hpp"
#include "gexpect/gheat.hpp"
#include "gexpect/heterogeneous.hpp"
#include "gexpect/moment_profile.hpp"
#include "gexpect/parallel.hpp"
#include "gexpect/paths.hpp"
#include "gexpect/propositions.hpp"
#include "gexpect/rate_function.hpp"
#include "gexpect/report.hpp"
#include "gexpect/rng.hpp"
#include "gexpect/schedules.hpp"
#include "gexpect/sublinear.hpp"

namespace {

using gexpect::ConfigError;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct Output {
  std::string out_dir = "out";
  std::string csv_path;  // explicit override
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Optional JSON config: {"version": 1, ...subcommand keys...}. Flags given
// on the command line win; unknown keys are rejected.
class ConfigLayer {
 public:
  void load(const std::string& path, const std::set<std::string>& allowed) {
    if (path.empty()) return;
    try {
      json_ = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    if (!json_.contains("version"))
      throw ConfigError("config needs a 'version' field");
    if (json_["version"].get<int>() != 1)
      throw ConfigError("unsupported config version");
    for (const auto& [key, value] : json_.items()) {
      (void)value;
      if (key != "version" && allowed.find(key) == allowed.end())
        throw ConfigError("unknown config key: " + key);
    }
  }

  template <class T>
  void apply(const CLI::Option* opt, const std::string& key, T& target) const {
    if (opt != nullptr && opt->count() > 0) return;  // flag wins
    if (json_.contains(key)) target = json_[key].get<T>();
  }

 private:
  nlohmann::json json_ = nlohmann::json::object();
};

gexpect::MeasureFamily load_family(const std::string& spec) {
  if (spec == "rvf") return gexpect::MeasureFamily::rademacher_volatility();
  if (spec == "rademacher") return gexpect::MeasureFamily::rademacher();
  if (spec.rfind("rademacher:", 0) == 0)
    return gexpect::MeasureFamily::rademacher(std::stod(spec.substr(11)));
  return gexpect::MeasureFamily::from_json(read_file(spec));
}

std::vector<gexpect::MeasureFamily> load_array(const std::string& spec, int n_max) {
  // alt:<s1>,<s2> alternates two scaled volatility families
  if (spec.rfind("alt:", 0) == 0) {
    const std::string args = spec.substr(4);
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw ConfigError("alt spec needs two scales, e.g. alt:1,1.5");
    const double s1 = std::stod(args.substr(0, comma));
    const double s2 = std::stod(args.substr(comma + 1));
    std::vector<gexpect::MeasureFamily> out;
    for (int i = 0; i < n_max; ++i) {
      const double s = (i % 2 == 0) ? s1 : s2;
      out.push_back(gexpect::MeasureFamily::from_atom_lists(
          {{{-s, 0.5}, {s, 0.5}}, {{-2.0 * s, 0.5}, {2.0 * s, 0.5}}}));
    }
    return out;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad array JSON: ") + e.what());
  }
  if (!j.contains("families") || !j["families"].is_array() || j["families"].empty())
    throw ConfigError("array JSON needs a nonempty 'families' list");
  std::vector<gexpect::MeasureFamily> out;
  for (const auto& fam : j["families"])
    out.push_back(gexpect::MeasureFamily::from_json(fam.dump()));
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

int finish(const std::string& command, const gexpect::CsvBuilder& csv,
           gexpect::RunManifest manifest, const Output& out,
           const std::chrono::steady_clock::time_point& started) {
  manifest.command = command;
  manifest.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  const std::string path =
      gexpect::emit_report(csv.str(), manifest, out.out_dir, out.csv_path);
  std::cout << "wrote " << path << "\n";
  for (const auto& [name, ok] : manifest.assertions)
    std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << name << "\n";
  return manifest.all_passed() ? kExitOk : kExitAssertion;
}

gexpect::RealFunction named_payoff(const std::string& name) {
  if (name == "x") return [](double x) { return x; };
  if (name == "x2") return [](double x) { return x * x; };
  if (name == "negx2") return [](double x) { return -x * x; };
  if (name == "abs") return [](double x) { return std::fabs(x); };
  if (name == "x4") return [](double x) { return x * x * x * x; };
  if (name == "tanh") return [](double x) { return std::tanh(x); };
  if (name == "const") return [](double) { return 1.0; };
  if (name.rfind("ramp:", 0) == 0) {
    const std::string args = name.substr(5);
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("ramp:<lo>,<hi>");
    const gexpect::TestFunction f = gexpect::TestFunction::ramp_indicator(
        std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
    return [f](double x) { return f(x); };
  }
  throw ConfigError("unknown payoff name: " + name);
}

std::vector<gexpect::RealFunction> random_test_functions(std::uint64_t seed,
                                                         int count) {
  std::vector<gexpect::RealFunction> fns;
  gexpect::RandomStream rs(seed, 17);
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      std::vector<double> xs, ys;
      double x = -3.0 - rs.next_uniform();
      for (int k = 0; k < 6; ++k) {
        xs.push_back(x);
        ys.push_back(2.0 * rs.next_normal());
        x += 0.4 + 1.2 * rs.next_uniform();
      }
      const gexpect::TestFunction f =
          gexpect::TestFunction::piecewise_linear(xs, ys);
      fns.push_back([f](double v) { return f(v); });
    } else {
      std::vector<double> coeffs;
      for (int k = 0; k < 4; ++k) coeffs.push_back(rs.next_normal());
      const gexpect::TestFunction f =
          gexpect::TestFunction::polynomial_capped(coeffs, 4.0);
      fns.push_back([f](double v) { return f(v); });
    }
  }
  return fns;
}

gexpect::VolatilityPolicy parse_policy(const std::string& spec,
                                       gexpect::PolicyRange range) {
  if (spec.rfind("const:", 0) == 0)
    return gexpect::VolatilityPolicy::constant(std::stod(spec.substr(6)), range);
  if (spec.rfind("alt:", 0) == 0) {
    const std::string args = spec.substr(4);
    const auto c1 = args.find(',');
    const auto c2 = args.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ConfigError("alt:<a>,<b>,<block_len>");
    return gexpect::VolatilityPolicy::alternating(
        std::stod(args.substr(0, c1)), std::stod(args.substr(c1 + 1, c2 - c1 - 1)),
        std::stoi(args.substr(c2 + 1)), range);
  }
  if (spec.rfind("fb:", 0) == 0) {
    const std::string args = spec.substr(3);
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("fb:<threshold>,<above|below>");
    const std::string side = args.substr(comma + 1);
    if (side != "above" && side != "below")
      throw ConfigError("feedback side must be 'above' or 'below'");
    return gexpect::VolatilityPolicy::threshold_feedback(
        std::stod(args.substr(0, comma)), side == "above", range);
  }
  throw ConfigError("unknown policy spec: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("GEXPECT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) gexpect::set_worker_count(static_cast<unsigned>(n));
  }

  CLI::App app{"numerical laboratory for sub-linear expectations"};
  app.require_subcommand(0, 1);

  Output out;
  app.add_option("--out-dir", out.out_dir, "directory for generated reports");
  app.add_option("--out", out.csv_path, "explicit CSV output path");
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (version 1)");

  const auto started = std::chrono::steady_clock::now();
  int exit_code = kExitOk;
  auto run = [&](const std::string& name, auto body) {
    app.get_subcommand(name)->callback([&exit_code, body]() { exit_code = body(); });
  };

  // ---- axioms -------------------------------------------------------------
  auto* axioms = app.add_subcommand("axioms", "verify the defining properties");
  std::string ax_family = "rvf";
  int ax_fns = 20;
  std::uint64_t ax_seed = 1;
  auto* ax_fam_opt = axioms->add_option("--family", ax_family);
  auto* ax_fns_opt = axioms->add_option("--fns", ax_fns);
  auto* ax_seed_opt = axioms->add_option("--seed", ax_seed);
  run("axioms", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "fns", "seed"});
    cfg.apply(ax_fam_opt, "family", ax_family);
    cfg.apply(ax_fns_opt, "fns", ax_fns);
    cfg.apply(ax_seed_opt, "seed", ax_seed);
    const gexpect::MeasureFamily fam = load_family(ax_family);
    const auto rep = gexpect::verify_axioms(fam, random_test_functions(ax_seed, ax_fns));
    gexpect::CsvBuilder csv({"check", "violation"});
    csv.add_row({"monotonicity", gexpect::format_real17(rep.monotonicity)});
    csv.add_row({"constant_preserving", gexpect::format_real17(rep.constant_preserving)});
    csv.add_row({"sub_additivity", gexpect::format_real17(rep.sub_additivity)});
    csv.add_row({"positive_homogeneity", gexpect::format_real17(rep.positive_homogeneity)});
    csv.add_row({"capacity_duality", gexpect::format_real17(rep.capacity_duality)});
    csv.add_row({"max", gexpect::format_real17(rep.max_violation)});
    gexpect::RunManifest manifest;
    manifest.seed_root = ax_seed;
    manifest.config_echo_json = ordered_json{{"family", ax_family},
                                             {"fns", ax_fns},
                                             {"seed", ax_seed}}.dump();
    manifest.assertions = {{"max_violation<=1e-10", rep.pass}};
    return finish("axioms", csv, manifest, out, started);
  });

  // ---- capacity -----------------------------------------------------------
  auto* cap_cmd = app.add_subcommand("capacity", "upper/lower capacity of an event");
  std::string cap_family = "rvf", cap_event = "ge";
  double cap_threshold = 0.0;
  auto* cap_fam_opt = cap_cmd->add_option("--family", cap_family);
  auto* cap_ev_opt = cap_cmd->add_option("--event", cap_event)
                         ->check(CLI::IsMember({"ge", "abs_ge"}));
  auto* cap_th_opt = cap_cmd->add_option("--threshold", cap_threshold);
  run("capacity", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "event", "threshold"});
    cfg.apply(cap_fam_opt, "family", cap_family);
    cfg.apply(cap_ev_opt, "event", cap_event);
    cfg.apply(cap_th_opt, "threshold", cap_threshold);
    const gexpect::MeasureFamily fam = load_family(cap_family);
    const double t = cap_threshold;
    const gexpect::EventPredicate ev =
        cap_event == "ge"
            ? gexpect::EventPredicate([t](double x) { return x >= t; })
            : gexpect::EventPredicate([t](double x) { return std::fabs(x) >= t; });
    const gexpect::CapacityPair pair = gexpect::capacity(fam, ev);
    gexpect::CsvBuilder csv({"event", "threshold", "upper", "lower"});
    csv.add_row({cap_event, gexpect::format_real17(cap_threshold),
                 gexpect::format_real17(pair.upper), gexpect::format_real17(pair.lower)});
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"family", cap_family},
                                             {"event", cap_event},
                                             {"threshold", cap_threshold}}.dump();
    manifest.assertions = {{"lower<=upper", pair.lower <= pair.upper + 1e-12}};
    return finish("capacity", csv, manifest, out, started);
  });

  // ---- choquet ------------------------------------------------------------
  auto* cho_cmd = app.add_subcommand("choquet", "Choquet integral of a payoff");
  std::string cho_family = "rvf", cho_fn = "x2", cho_which = "upper";
  auto* cho_fam_opt = cho_cmd->add_option("--family", cho_family);
  auto* cho_fn_opt = cho_cmd->add_option("--fn", cho_fn);
  auto* cho_which_opt = cho_cmd->add_option("--which", cho_which)
                            ->check(CLI::IsMember({"upper", "lower"}));
  run("choquet", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "fn", "which"});
    cfg.apply(cho_fam_opt, "family", cho_family);
    cfg.apply(cho_fn_opt, "fn", cho_fn);
    cfg.apply(cho_which_opt, "which", cho_which);
    const gexpect::MeasureFamily fam = load_family(cho_family);
    const auto f = named_payoff(cho_fn);
    const auto which =
        cho_which == "upper" ? gexpect::Envelope::Upper : gexpect::Envelope::Lower;
    const double value = gexpect::choquet_integral(fam, f, which);
    const double abs_c = gexpect::choquet_integral(
        fam, [&f](double x) { return std::fabs(f(x)); }, gexpect::Envelope::Upper);
    const double abs_e =
        gexpect::upper_expectation(fam, [&f](double x) { return std::fabs(f(x)); });
    gexpect::CsvBuilder csv({"fn", "which", "value"});
    csv.add_row({cho_fn, cho_which, gexpect::format_real17(value)});
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"family", cho_family},
                                             {"fn", cho_fn},
                                             {"which", cho_which}}.dump();
    manifest.assertions = {{"E[|f|]<=C_V(|f|)", abs_e <= abs_c + 1e-12}};
    return finish("choquet", csv, manifest, out, started);
  });

  // ---- zn -----------------------------------------------------------------
  auto* zn_cmd = app.add_subcommand("zn", "truncation-point roots");
  std::string zn_family = "rvf", zn_ns = "16,64,256";
  double zn_gamma = 0.3;
  auto* zn_fam_opt = zn_cmd->add_option("--family", zn_family);
  auto* zn_n_opt = zn_cmd->add_option("--n", zn_ns);
  auto* zn_g_opt = zn_cmd->add_option("--gamma", zn_gamma);
  run("zn", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "n", "gamma"});
    cfg.apply(zn_fam_opt, "family", zn_family);
    cfg.apply(zn_n_opt, "n", zn_ns);
    cfg.apply(zn_g_opt, "gamma", zn_gamma);
    const gexpect::MomentProfile prof{load_family(zn_family)};
    gexpect::CsvBuilder csv({"n", "x_n", "z_n", "at_boundary", "residual_rel"});
    bool all_ok = true;
    for (const int n : parse_int_list(zn_ns)) {
      const double x = std::pow(static_cast<double>(n), zn_gamma);
      const auto tp = prof.solve_zn(n, x);
      double residual_rel = 0.0;
      if (!tp.at_boundary) {
        const double nl = n * prof.truncated_moment(tp.z_n, gexpect::Envelope::Upper);
        residual_rel = std::fabs(nl - x * x * tp.z_n * tp.z_n) / nl;
        if (residual_rel > 1e-9) all_ok = false;
      }
      csv.add_row({std::to_string(n), gexpect::format_real17(x),
                   gexpect::format_real17(tp.z_n), tp.at_boundary ? "1" : "0",
                   gexpect::format_real17(residual_rel)});
    }
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"family", zn_family},
                                             {"n", zn_ns},
                                             {"gamma", zn_gamma}}.dump();
    manifest.assertions = {{"residual<=1e-9", all_ok}};
    return finish("zn", csv, manifest, out, started);
  });

  // ---- conditions ---------------------------------------------------------
  auto* cond_cmd = app.add_subcommand("conditions", "moment-condition diagnostics");
  std::string cond_family = "rvf", cond_grid = "0.5,1,1.5,2,3,4,6";
  auto* cond_fam_opt = cond_cmd->add_option("--family", cond_family);
  auto* cond_grid_opt = cond_cmd->add_option("--grid", cond_grid);
  run("conditions", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "grid"});
    cfg.apply(cond_fam_opt, "family", cond_family);
    cfg.apply(cond_grid_opt, "grid", cond_grid);
    const gexpect::MomentProfile prof{load_family(cond_family)};
    std::vector<double> grid;
    std::stringstream ss(cond_grid);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    const auto rep = prof.condition_diagnostics(grid);
    gexpect::CsvBuilder csv({"x", "l_upper", "l_conj", "ratio_I", "ratio_II", "tail_III"});
    for (const auto& row : rep.rows)
      csv.add_real_row({row.x, row.l_upper, row.l_conj, row.ratio_i, row.ratio_ii,
                        row.tail_iii});
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"family", cond_family},
                                             {"grid", cond_grid}}.dump();
    manifest.assertions = {{"r_squared_finite", std::isfinite(rep.r_squared)}};
    return finish("conditions", csv, manifest, out, started);
  });

  // ---- bernstein-sweep ----------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("bernstein-sweep", "certify the closed-form bounds");
  int sweep_configs = 200;
  int sweep_max_n = 8;
  std::uint64_t sweep_seed = 0xC0FFEE;
  auto* sw_cfg_opt = sweep_cmd->add_option("--configs", sweep_configs);
  auto* sw_n_opt = sweep_cmd->add_option("--max-n", sweep_max_n);
  auto* sw_seed_opt = sweep_cmd->add_option("--seed", sweep_seed);
  run("bernstein-sweep", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"configs", "max_n", "seed"});
    cfg.apply(sw_cfg_opt, "configs", sweep_configs);
    cfg.apply(sw_n_opt, "max_n", sweep_max_n);
    cfg.apply(sw_seed_opt, "seed", sweep_seed);
    gexpect::SweepConfig sc;
    sc.config_count = sweep_configs;
    sc.max_n = sweep_max_n;
    sc.seed = sweep_seed;
    const auto res = gexpect::run_certification_sweep(sc);
    gexpect::CsvBuilder csv(
        {"bound_id", "family_hash", "n", "x", "bound", "capacity", "slack", "status"});
    for (const auto& r : res.rows)
      csv.add_row({gexpect::bound_id_name(r.id), std::to_string(r.family_hash),
                   std::to_string(r.n), gexpect::format_real17(r.x),
                   gexpect::format_real17(r.bound), gexpect::format_real17(r.capacity),
                   gexpect::format_real17(r.slack), r.ok ? "ok" : "violated"});
    gexpect::RunManifest manifest;
    manifest.seed_root = sweep_seed;
    manifest.config_echo_json = ordered_json{{"configs", sweep_configs},
                                             {"max_n", sweep_max_n},
                                             {"seed", sweep_seed}}.dump();
    manifest.assertions = {{"zero_violations", res.violations == 0}};
    return finish("bernstein-sweep", csv, manifest, out, started);
  });

  // ---- gheat --------------------------------------------------------------
  auto* gh_cmd = app.add_subcommand("gheat", "finite-difference grid dump");
  std::string gh_phi = "x2";
  double gh_t = 1.0, gh_lo = 1.0, gh_hi = 2.0;
  int gh_level = 2;
  auto* gh_phi_opt = gh_cmd->add_option("--phi", gh_phi);
  auto* gh_t_opt = gh_cmd->add_option("--t", gh_t);
  auto* gh_lo_opt = gh_cmd->add_option("--sigma-lo", gh_lo);
  auto* gh_hi_opt = gh_cmd->add_option("--sigma-hi", gh_hi);
  auto* gh_lvl_opt = gh_cmd->add_option("--level", gh_level);
  run("gheat", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"phi", "t", "sigma_lo", "sigma_hi", "level"});
    cfg.apply(gh_phi_opt, "phi", gh_phi);
    cfg.apply(gh_t_opt, "t", gh_t);
    cfg.apply(gh_lo_opt, "sigma_lo", gh_lo);
    cfg.apply(gh_hi_opt, "sigma_hi", gh_hi);
    cfg.apply(gh_lvl_opt, "level", gh_level);
    gexpect::GridConfig gc;
    gc.refinement_level = gh_level;
    const auto sol = gexpect::solve_g_heat(named_payoff(gh_phi), gh_t,
                                           {gh_lo, gh_hi}, gc);
    gexpect::CsvBuilder csv({"x", "u"});
    for (std::size_t i = 0; i < sol.x.size(); ++i)
      csv.add_real_row({sol.x[i], sol.u[i]});
    gexpect::RunManifest manifest;
    manifest.config_echo_json =
        ordered_json{{"phi", gh_phi},       {"t", gh_t},
                     {"sigma_lo", gh_lo},   {"sigma_hi", gh_hi},
                     {"level", gh_level},   {"cap_radius", sol.cap_radius}}.dump();
    manifest.assertions = {{"cfl", gh_hi * gh_hi * sol.dt / (sol.dx * sol.dx) <= 0.5}};
    return finish("gheat", csv, manifest, out, started);
  });

  // ---- gnormal ------------------------------------------------------------
  auto* gn_cmd = app.add_subcommand("gnormal", "zero-mean band-variance expectations");
  double gn_lo = 1.0, gn_hi = 2.0;
  int gn_level = 2;
  auto* gn_lo_opt = gn_cmd->add_option("--sigma-lo", gn_lo);
  auto* gn_hi_opt = gn_cmd->add_option("--sigma-hi", gn_hi);
  auto* gn_lvl_opt = gn_cmd->add_option("--level", gn_level);
  run("gnormal", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"sigma_lo", "sigma_hi", "level"});
    cfg.apply(gn_lo_opt, "sigma_lo", gn_lo);
    cfg.apply(gn_hi_opt, "sigma_hi", gn_hi);
    cfg.apply(gn_lvl_opt, "level", gn_level);
    gexpect::GridConfig gc;
    gc.refinement_level = gn_level;
    const gexpect::GParams p{gn_lo, gn_hi};
    gexpect::CsvBuilder csv({"phi", "value", "reference", "abs_error", "tolerance"});
    bool all_ok = true;
    const auto check = [&](const std::string& name, double value, double ref,
                           double tol) {
      const double err = std::fabs(value - ref);
      if (err > tol) all_ok = false;
      csv.add_row({name, gexpect::format_real17(value), gexpect::format_real17(ref),
                   gexpect::format_real17(err), gexpect::format_real17(tol)});
    };
    check("x", gexpect::gnormal_expectation(named_payoff("x"), p, gc), 0.0, 1e-4);
    check("x2", gexpect::gnormal_expectation(named_payoff("x2"), p, gc),
          gn_hi * gn_hi, 4e-3);
    check("negx2", gexpect::gnormal_expectation(named_payoff("negx2"), p, gc),
          -gn_lo * gn_lo, 4e-3);
    check("const", gexpect::gnormal_expectation(named_payoff("const"), p, gc), 1.0,
          1e-12);
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"sigma_lo", gn_lo},
                                             {"sigma_hi", gn_hi},
                                             {"level", gn_level}}.dump();
    manifest.assertions = {{"moment_tolerances", all_ok}};
    return finish("gnormal", csv, manifest, out, started);
  });

  // ---- simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "controlled path dump");
  std::string sim_policy = "const:1";
  double sim_T = 10.0, sim_dt = 0.25, sim_lo = 1.0, sim_hi = 2.0;
  std::uint64_t sim_seed = 1;
  auto* sim_pol_opt = sim_cmd->add_option("--policy", sim_policy);
  auto* sim_T_opt = sim_cmd->add_option("--T", sim_T);
  auto* sim_dt_opt = sim_cmd->add_option("--dt", sim_dt);
  auto* sim_lo_opt = sim_cmd->add_option("--sigma-lo", sim_lo);
  auto* sim_hi_opt = sim_cmd->add_option("--sigma-hi", sim_hi);
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed);
  run("simulate", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"policy", "T", "dt", "sigma_lo", "sigma_hi", "seed"});
    cfg.apply(sim_pol_opt, "policy", sim_policy);
    cfg.apply(sim_T_opt, "T", sim_T);
    cfg.apply(sim_dt_opt, "dt", sim_dt);
    cfg.apply(sim_lo_opt, "sigma_lo", sim_lo);
    cfg.apply(sim_hi_opt, "sigma_hi", sim_hi);
    cfg.apply(sim_seed_opt, "seed", sim_seed);
    const auto policy = parse_policy(sim_policy, {sim_lo, sim_hi});
    const auto path = gexpect::simulate_path(policy, sim_T, sim_dt, sim_seed);
    gexpect::CsvBuilder csv({"t", "W", "qv"});
    for (std::size_t i = 0; i < path.w.size(); ++i)
      csv.add_real_row({(static_cast<double>(i) + 1.0) * path.dt, path.w[i],
                        path.qv[i]});
    bool qv_ok = true;
    for (std::size_t i = 0; i < path.qv.size(); ++i) {
      const double t = (static_cast<double>(i) + 1.0) * path.dt;
      if (path.qv[i] < sim_lo * sim_lo * t - 1e-9 ||
          path.qv[i] > sim_hi * sim_hi * t + 1e-9)
        qv_ok = false;
    }
    gexpect::RunManifest manifest;
    manifest.seed_root = sim_seed;
    manifest.config_echo_json =
        ordered_json{{"policy", sim_policy}, {"T", sim_T},         {"dt", sim_dt},
                     {"sigma_lo", sim_lo},   {"sigma_hi", sim_hi}, {"seed", sim_seed}}
            .dump();
    manifest.assertions = {{"qv_band_pathwise", qv_ok}};
    return finish("simulate", csv, manifest, out, started);
  });

  // ---- policy-search ------------------------------------------------------
  auto* ps_cmd = app.add_subcommand("policy-search", "grid lower bound on the sup");
  std::string ps_stat = "w2";
  double ps_T = 4.0, ps_dt = 0.25, ps_lo = 1.0, ps_hi = 2.0;
  int ps_paths = 4000;
  std::uint64_t ps_seed = 1;
  auto* ps_stat_opt = ps_cmd->add_option("--statistic", ps_stat)
                          ->check(CLI::IsMember({"w2", "negw2", "w"}));
  auto* ps_T_opt = ps_cmd->add_option("--T", ps_T);
  auto* ps_dt_opt = ps_cmd->add_option("--dt", ps_dt);
  auto* ps_paths_opt = ps_cmd->add_option("--paths", ps_paths);
  auto* ps_lo_opt = ps_cmd->add_option("--sigma-lo", ps_lo);
  auto* ps_hi_opt = ps_cmd->add_option("--sigma-hi", ps_hi);
  auto* ps_seed_opt = ps_cmd->add_option("--seed", ps_seed);
  run("policy-search", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path,
             {"statistic", "T", "dt", "paths", "sigma_lo", "sigma_hi", "seed"});
    cfg.apply(ps_stat_opt, "statistic", ps_stat);
    cfg.apply(ps_T_opt, "T", ps_T);
    cfg.apply(ps_dt_opt, "dt", ps_dt);
    cfg.apply(ps_paths_opt, "paths", ps_paths);
    cfg.apply(ps_lo_opt, "sigma_lo", ps_lo);
    cfg.apply(ps_hi_opt, "sigma_hi", ps_hi);
    cfg.apply(ps_seed_opt, "seed", ps_seed);
    gexpect::PathStatistic stat;
    if (ps_stat == "w2")
      stat = [](const gexpect::ControlledPath& p) { return p.w_final() * p.w_final(); };
    else if (ps_stat == "negw2")
      stat = [](const gexpect::ControlledPath& p) { return -p.w_final() * p.w_final(); };
    else
      stat = [](const gexpect::ControlledPath& p) { return p.w_final(); };
    const auto grid = gexpect::default_policy_grid({ps_lo, ps_hi});
    const auto res = gexpect::worst_case_policy_search(stat, grid, ps_paths, ps_T,
                                                       ps_dt, ps_seed);
    gexpect::CsvBuilder csv({"policy", "estimate", "stderr", "is_best", "bound_side"});
    for (std::size_t i = 0; i < res.per_policy.size(); ++i)
      csv.add_row({res.per_policy[i].label,
                   gexpect::format_real17(res.per_policy[i].estimate),
                   gexpect::format_real17(res.per_policy[i].stderr_),
                   i == res.best_index ? "1" : "0", "lower"});
    gexpect::RunManifest manifest;
    manifest.seed_root = ps_seed;
    manifest.config_echo_json =
        ordered_json{{"statistic", ps_stat}, {"T", ps_T},         {"dt", ps_dt},
                     {"paths", ps_paths},    {"sigma_lo", ps_lo}, {"sigma_hi", ps_hi},
                     {"seed", ps_seed}}.dump();
    bool max_consistent = true;
    for (const auto& e : res.per_policy)
      if (e.estimate > res.estimate) max_consistent = false;
    manifest.assertions = {{"best_is_max", max_consistent}};
    return finish("policy-search", csv, manifest, out, started);
  });

  // ---- md-rate ------------------------------------------------------------
  auto* md_cmd = app.add_subcommand("md-rate", "self-normalized rate curve");
  std::string md_family = "rvf", md_ns = "8,16,24";
  double md_gamma = 0.3;
  int md_paths = 100000;
  std::uint64_t md_seed = 1, md_budget = gexpect::kDefaultStateBudget;
  auto* md_fam_opt = md_cmd->add_option("--family", md_family);
  auto* md_g_opt = md_cmd->add_option("--gamma", md_gamma);
  auto* md_n_opt = md_cmd->add_option("--n", md_ns);
  auto* md_p_opt = md_cmd->add_option("--paths", md_paths);
  auto* md_seed_opt = md_cmd->add_option("--seed", md_seed);
  auto* md_b_opt = md_cmd->add_option("--budget", md_budget);
  run("md-rate", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "gamma", "n", "paths", "seed", "budget"});
    cfg.apply(md_fam_opt, "family", md_family);
    cfg.apply(md_g_opt, "gamma", md_gamma);
    cfg.apply(md_n_opt, "n", md_ns);
    cfg.apply(md_p_opt, "paths", md_paths);
    cfg.apply(md_seed_opt, "seed", md_seed);
    cfg.apply(md_b_opt, "budget", md_budget);
    gexpect::RateCurveOptions opt;
    opt.gamma = md_gamma;
    opt.n_list = parse_int_list(md_ns);
    opt.mc_paths = md_paths;
    opt.seed = md_seed;
    opt.state_budget = md_budget;
    const auto curve = gexpect::md_rate_curve(load_family(md_family), opt);
    gexpect::CsvBuilder csv({"n", "x_n", "log_capacity", "normalized_rate", "method",
                             "mc_stderr", "delta_nx", "q_n"});
    for (const auto& r : curve.rows)
      csv.add_row({std::to_string(r.n), gexpect::format_real17(r.x_n),
                   gexpect::format_real17(r.log_capacity),
                   gexpect::format_real17(r.normalized_rate), r.method,
                   gexpect::format_real17(r.mc_stderr),
                   gexpect::format_real17(r.delta_nx),
                   gexpect::format_real17(r.q_n)});
    bool sandwich = true;
    for (const int n : opt.n_list) {
      double exact = 0.0, lower_p = 0.0, upper_log = 0.0, se = 0.0;
      bool have_exact = false;
      for (const auto& r : curve.rows) {
        if (r.n != n) continue;
        if (r.method == "exact-dp") {
          exact = r.log_capacity;
          have_exact = true;
        } else if (r.method == "mc-policy-lower") {
          lower_p = std::exp(r.log_capacity);
          se = r.mc_stderr;
        } else {
          upper_log = r.log_capacity;
        }
      }
      if (have_exact) {
        if (lower_p - 3.0 * se > std::exp(exact) + 1e-12) sandwich = false;
        if (exact > upper_log + 1e-9) sandwich = false;
      }
    }
    gexpect::RunManifest manifest;
    manifest.seed_root = md_seed;
    manifest.config_echo_json =
        ordered_json{{"family", md_family}, {"gamma", md_gamma}, {"n", md_ns},
                     {"paths", md_paths},   {"seed", md_seed},
                     {"budget", md_budget}}.dump();
    manifest.assertions = {{"lower<=exact<=upper", sandwich}};
    return finish("md-rate", csv, manifest, out, started);
  });

  // ---- lil-trace ----------------------------------------------------------
  auto* lil_cmd = app.add_subcommand("lil-trace", "iterated-logarithm trace stats");
  double lil_sigma = 1.0;
  std::string lil_family;  // when set, sample a classical law instead
  int lil_law = 0;
  std::int64_t lil_nmax = 1000000;
  int lil_seeds = 20;
  std::int64_t lil_window = 300;
  std::uint64_t lil_seed = 7;
  auto* lil_s_opt = lil_cmd->add_option("--sigma", lil_sigma);
  auto* lil_f_opt = lil_cmd->add_option("--family", lil_family);
  auto* lil_l_opt = lil_cmd->add_option("--law", lil_law);
  auto* lil_n_opt = lil_cmd->add_option("--n-max", lil_nmax);
  auto* lil_k_opt = lil_cmd->add_option("--seeds", lil_seeds);
  auto* lil_w_opt = lil_cmd->add_option("--window", lil_window);
  auto* lil_seed_opt = lil_cmd->add_option("--seed", lil_seed);
  run("lil-trace", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"sigma", "family", "law", "n_max", "seeds", "window", "seed"});
    cfg.apply(lil_s_opt, "sigma", lil_sigma);
    cfg.apply(lil_f_opt, "family", lil_family);
    cfg.apply(lil_l_opt, "law", lil_law);
    cfg.apply(lil_n_opt, "n_max", lil_nmax);
    cfg.apply(lil_k_opt, "seeds", lil_seeds);
    cfg.apply(lil_w_opt, "window", lil_window);
    cfg.apply(lil_seed_opt, "seed", lil_seed);
    gexpect::LilOptions opt;
    opt.n_max = lil_nmax;
    opt.seeds = lil_seeds;
    opt.seed_root = lil_seed;
    opt.stable_min_n = lil_window;
    const auto sched = gexpect::BlockSchedule::nk(lil_nmax);
    if (sched.indices.size() >= 3) opt.schedule = sched;
    const gexpect::IncrementSource source =
        lil_family.empty()
            ? gexpect::IncrementSource::gaussian(lil_sigma)
            : gexpect::IncrementSource::discrete(
                  load_family(lil_family), static_cast<std::size_t>(lil_law));
    const auto rep = gexpect::lil_trace(source, opt);
    std::vector<std::string> header = {"seed", "max_ratio_stable", "max_ratio_full",
                                       "min_ratio_stable", "final_ratio", "ratio_at_3"};
    for (const double g : rep.cluster_grid)
      header.push_back("dist_" + gexpect::format_real17(g));
    for (const auto idx : rep.schedule_indices)
      header.push_back("block_max_" + std::to_string(idx));
    gexpect::CsvBuilder csv(header);
    bool finite = true;
    for (const auto& t : rep.seeds) {
      std::vector<std::string> row = {
          std::to_string(t.seed_index), gexpect::format_real17(t.max_ratio_stable),
          gexpect::format_real17(t.max_ratio_full),
          gexpect::format_real17(t.min_ratio_stable),
          gexpect::format_real17(t.final_ratio), gexpect::format_real17(t.ratio_at_3)};
      for (const double d : t.grid_min_dist) row.push_back(gexpect::format_real17(d));
      for (const double b : t.schedule_block_max)
        row.push_back(gexpect::format_real17(b));
      csv.add_row(row);
      if (!std::isfinite(t.max_ratio_stable) || !std::isfinite(t.ratio_at_3))
        finite = false;
    }
    gexpect::RunManifest manifest;
    manifest.seed_root = lil_seed;
    manifest.config_echo_json =
        ordered_json{{"sigma", lil_sigma}, {"family", lil_family}, {"law", lil_law},
                     {"n_max", lil_nmax},  {"seeds", lil_seeds},
                     {"window", lil_window}, {"seed", lil_seed}}.dump();
    manifest.assertions = {{"ratios_finite", finite}};
    return finish("lil-trace", csv, manifest, out, started);
  });

  // ---- non-iid ------------------------------------------------------------
  auto* ni_cmd = app.add_subcommand("non-iid", "heterogeneous rate pipeline");
  std::string ni_array = "alt:1,1.5", ni_ns = "6,9,12";
  double ni_gamma = 0.3;
  int ni_paths = 20000;
  std::uint64_t ni_seed = 1;
  auto* ni_a_opt = ni_cmd->add_option("--array", ni_array);
  auto* ni_g_opt = ni_cmd->add_option("--gamma", ni_gamma);
  auto* ni_n_opt = ni_cmd->add_option("--n", ni_ns);
  auto* ni_p_opt = ni_cmd->add_option("--paths", ni_paths);
  auto* ni_seed_opt = ni_cmd->add_option("--seed", ni_seed);
  run("non-iid", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"array", "gamma", "n", "paths", "seed"});
    cfg.apply(ni_a_opt, "array", ni_array);
    cfg.apply(ni_g_opt, "gamma", ni_gamma);
    cfg.apply(ni_n_opt, "n", ni_ns);
    cfg.apply(ni_p_opt, "paths", ni_paths);
    cfg.apply(ni_seed_opt, "seed", ni_seed);
    gexpect::RateCurveOptions opt;
    opt.gamma = ni_gamma;
    opt.n_list = parse_int_list(ni_ns);
    opt.mc_paths = ni_paths;
    opt.seed = ni_seed;
    const int n_max = *std::max_element(opt.n_list.begin(), opt.n_list.end());
    const auto res = gexpect::non_iid_experiment(load_array(ni_array, n_max), opt);
    gexpect::CsvBuilder csv({"n", "x_n", "log_capacity", "normalized_rate", "method",
                             "mc_stderr", "delta_nx", "q_n"});
    for (const auto& r : res.curve.rows)
      csv.add_row({std::to_string(r.n), gexpect::format_real17(r.x_n),
                   gexpect::format_real17(r.log_capacity),
                   gexpect::format_real17(r.normalized_rate), r.method,
                   gexpect::format_real17(r.mc_stderr),
                   gexpect::format_real17(r.delta_nx),
                   gexpect::format_real17(r.q_n)});
    gexpect::RunManifest manifest;
    manifest.seed_root = ni_seed;
    manifest.config_echo_json =
        ordered_json{{"array", ni_array}, {"gamma", ni_gamma}, {"n", ni_ns},
                     {"paths", ni_paths}, {"seed", ni_seed}}.dump();
    manifest.assertions = {
        {"hypothesis_max_second", res.diagnostics.max_second_ok},
        {"hypothesis_q_bounded", res.diagnostics.q_ok},
    };
    return finish("non-iid", csv, manifest, out, started);
  });

  // ---- eta-bound ----------------------------------------------------------
  auto* eta_cmd = app.add_subcommand("eta-bound", "quadratic-corrected lower event");
  std::string eta_family = "rvf";
  int eta_n = 16;
  double eta_xn = 0.0, eta_beta = 0.5, eta_gamma = 0.3;
  auto* eta_fam_opt = eta_cmd->add_option("--family", eta_family);
  auto* eta_n_opt = eta_cmd->add_option("--n", eta_n);
  auto* eta_x_opt = eta_cmd->add_option("--xn", eta_xn);
  auto* eta_b_opt = eta_cmd->add_option("--beta", eta_beta);
  auto* eta_g_opt = eta_cmd->add_option("--gamma", eta_gamma);
  run("eta-bound", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "n", "xn", "beta", "gamma"});
    cfg.apply(eta_fam_opt, "family", eta_family);
    cfg.apply(eta_n_opt, "n", eta_n);
    cfg.apply(eta_x_opt, "xn", eta_xn);
    cfg.apply(eta_b_opt, "beta", eta_beta);
    cfg.apply(eta_g_opt, "gamma", eta_gamma);
    const double x =
        eta_xn > 0.0 ? eta_xn : std::pow(static_cast<double>(eta_n), eta_gamma);
    const auto eb =
        gexpect::eta_lower_bound(load_family(eta_family), eta_n, x, eta_beta);
    gexpect::CsvBuilder csv({"n", "x_n", "beta", "log_capacity", "normalized_rate",
                             "target_rate", "z_n"});
    csv.add_real_row({static_cast<double>(eb.n), eb.x_n, eb.beta, eb.log_capacity,
                      eb.normalized_rate, eb.target_rate, eb.z_n});
    gexpect::RunManifest manifest;
    manifest.config_echo_json =
        ordered_json{{"family", eta_family}, {"n", eta_n},      {"xn", x},
                     {"beta", eta_beta},     {"gamma", eta_gamma}}.dump();
    manifest.assertions = {{"capacity_finite", std::isfinite(eb.log_capacity)}};
    return finish("eta-bound", csv, manifest, out, started);
  });

  // ---- conjecture-explore ---------------------------------------------------
  auto* conj_cmd = app.add_subcommand(
      "conjecture-explore", "lower-capacity rate exploration (no pass/fail)");
  std::string conj_family = "rvf", conj_ns = "8,16,24";
  double conj_gamma = 0.3;
  auto* conj_fam_opt = conj_cmd->add_option("--family", conj_family);
  auto* conj_g_opt = conj_cmd->add_option("--gamma", conj_gamma);
  auto* conj_n_opt = conj_cmd->add_option("--n", conj_ns);
  run("conjecture-explore", [&]() {
    ConfigLayer cfg;
    cfg.load(config_path, {"family", "gamma", "n"});
    cfg.apply(conj_fam_opt, "family", conj_family);
    cfg.apply(conj_g_opt, "gamma", conj_gamma);
    cfg.apply(conj_n_opt, "n", conj_ns);
    const auto rows = gexpect::conjecture_lower_capacity_rates(
        load_family(conj_family), conj_gamma, parse_int_list(conj_ns));
    gexpect::CsvBuilder csv(
        {"n", "x_n", "log_lower_capacity", "normalized_rate", "label"});
    for (const auto& r : rows)
      csv.add_row({std::to_string(r.n), gexpect::format_real17(r.x_n),
                   gexpect::format_real17(r.log_lower_capacity),
                   gexpect::format_real17(r.normalized_rate),
                   "conjecture - no pass/fail"});
    gexpect::RunManifest manifest;
    manifest.config_echo_json = ordered_json{{"family", conj_family},
                                             {"gamma", conj_gamma},
                                             {"n", conj_ns}}.dump();
    // exploratory output only: nothing is asserted
    return finish("conjecture-explore", csv, manifest, out, started);
  });

  // global options (--out, --out-dir, --config) may follow the subcommand
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  if (argc <= 1) {
    std::cerr << app.help() << "\n";
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const gexpect::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gexpect::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gexpect::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return exit_code;
}
