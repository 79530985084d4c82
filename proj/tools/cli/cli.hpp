#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dshock/dshock.hpp"
#include "scenario.hpp"

namespace dshock::cli {

enum ExitCode { kOk = 0, kValidation = 1, kSolver = 2 };

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* kColumnHelp = R"(Output columns (all dimensionless, 17 significant digits):
  sweep        epsilon      scaling parameter eps
               u_star       intermediate velocity u*_eps between the two shocks
               rho_star     intermediate density rho*_eps between the two shocks
               s1, s2       1-shock and 2-shock speeds
               l_estimate   2 eps (f(rho*_eps) - f(rho_l)); tends to the concentration l
               weight_estimate
                            (s2 - s1) rho*_eps, inter-shock mass per unit time; tends
                            to the delta weight slope (u_l - u_r)(rho_l + rho_r)/2
  solve        x,u,rho      exact solution sampled at t = t_end
  entropy      epsilon,coeff1,coeff2,admissible
                            entropy production -s[eta] + [q] at the 1- and 2-shock
  weak-residual
               bump,x0,t0,rx,rt,residual_u,residual_u_literal,residual_rho,tolerance
                            weak-form residuals of the eps -> 0 limit per test bump
  fv-compare   n_cells,l1_u,l1_rho,l1,order,steps,clips
                            L1 distance between finite-volume and exact cell averages
  fv snapshot  x,u,rho      cell centers and cell averages at t_end
  limit (JSON) c_slope      slope of the delta line x = c t
               u_left, u_right, rho_left, rho_right
                            limit states on either side
               weight_slope d(t) / t, delta weight growth rate
               l            concentration value (u_l - u_r)^2 / 4
               u_on_line    velocity carried on the delta line
               case         Riemann case tag
Exit codes: 0 success, 1 invalid input or failed validation, 2 solver error.)";

namespace detail {

inline void print_fan(std::ostream& out, const WaveFan& fan) {
  out << "case," << to_string(fan.tag) << "\n";
  out << "epsilon," << num(fan.epsilon) << "\n";
  if (fan.intermediate) {
    out << "u_star," << num(fan.intermediate->u_star) << "\n";
    out << "rho_star," << num(fan.intermediate->rho_star) << "\n";
    out << "log_rho_star," << num(fan.intermediate->log_rho_star) << "\n";
  }
  if (fan.vacuum) {
    out << "u_star1," << num(fan.vacuum->u_star1) << "\n";
    out << "u_star2," << num(fan.vacuum->u_star2) << "\n";
  }
  out << "segment,kind,family,xi_lo,xi_hi,u_left,rho_left,u_right,rho_right\n";
  int k = 0;
  for (const auto& seg : fan.segments) {
    out << k++ << ",";
    if (const auto* c = std::get_if<ConstantSegment>(&seg)) {
      out << "constant,," << num(c->xi_lo) << "," << num(c->xi_hi) << "," << num(c->state.u())
          << "," << num(c->state.rho()) << "," << num(c->state.u()) << ","
          << num(c->state.rho()) << "\n";
    } else if (const auto* s = std::get_if<ShockSegment>(&seg)) {
      out << "shock," << s->family << "," << num(s->speed) << "," << num(s->speed) << ","
          << num(s->left.u()) << "," << num(s->left.rho()) << "," << num(s->right.u()) << ","
          << num(s->right.rho()) << "\n";
    } else if (const auto* r = std::get_if<RarefactionSegment>(&seg)) {
      out << "rarefaction," << r->family << "," << num(r->xi_lo) << "," << num(r->xi_hi)
          << ",,,,\n";
    } else {
      const auto& v = std::get<VacuumSegment>(seg);
      out << "vacuum,," << num(v.xi_lo) << "," << num(v.xi_hi) << ",,0,,0\n";
    }
  }
}

inline nlohmann::ordered_json limit_json(const LimitObject& lim, CaseTag tag) {
  nlohmann::ordered_json j;
  if (const auto* d = std::get_if<DeltaShockLimit>(&lim)) {
    j["c_slope"] = d->c_slope;
    j["u_left"] = d->u_left;
    j["u_right"] = d->u_right;
    j["rho_left"] = d->rho_left;
    j["rho_right"] = d->rho_right;
    j["weight_slope"] = d->weight_slope;
    j["l"] = d->l;
    j["u_on_line"] = d->u_on_line;
  } else if (const auto* c = std::get_if<ContactLimit>(&lim)) {
    j["c_slope"] = c->line_slope;
    j["u_left"] = c->u;
    j["u_right"] = c->u;
    j["rho_left"] = c->rho_left;
    j["rho_right"] = c->rho_right;
    j["weight_slope"] = 0.0;
    j["l"] = 0.0;
    j["u_on_line"] = c->u;
  } else {
    const auto& v = std::get<VacuumLimit>(lim);
    j["u_left"] = v.u_left;
    j["u_right"] = v.u_right;
    j["rho_left"] = v.rho_left;
    j["rho_right"] = v.rho_right;
    j["weight_slope"] = 0.0;
    j["l"] = 0.0;
    j["vacuum"] = {v.u_left, v.u_right};
  }
  j["case"] = to_string(tag);
  return j;
}

inline MeasureSolution perturbed(MeasureSolution sol, const std::string& what, double factor) {
  if (what == "none" || !sol.singular) return sol;
  auto& sp = *sol.singular;
  if (what == "speed") {
    sp.c_slope *= factor;
    sol.pieces[0].xi_hi = sp.c_slope;
    sol.pieces[1].xi_lo = sp.c_slope;
  } else if (what == "weight") {
    sp.weight_slope *= factor;
  } else if (what == "line") {
    sp.u_on_line *= factor;
  }
  return sol;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands. Each writes its report to `out` and returns an exit code.

inline int cmd_validate_flux(const Scenario& sc, std::ostream& out) {
  const FluxModel m = sc.model();
  const HypothesisReport h = validate_hypotheses(m, sc.rho_max, sc.samples * 4);
  std::vector<State> grid;
  for (double rho : log_grid(sc.rho_max * 1e-3, sc.rho_max, sc.samples)) {
    grid.emplace_back(sc.data.left.u(), rho);
  }
  const NonlinearityReport gnl = check_genuine_nonlinearity(m, grid);
  out << "check,result,detail\n";
  out << "f_prime_positive_increasing," << (h.pass ? "pass" : "fail") << ",";
  if (!h.pass) out << h.reason << " at rho=" << num(h.rho_at_violation);
  out << "\n";
  out << "genuine_nonlinearity," << (gnl.all_ok ? "pass" : "fail") << "," << gnl.failures
      << " of " << gnl.entries.size() << " states flagged\n";
  return h.pass && gnl.all_ok ? kOk : kValidation;
}

inline int cmd_solve(const Scenario& sc, std::ostream& out) {
  const FluxModel m = sc.model();
  const WaveFan fan = solve(m, sc.data);
  detail::print_fan(out, fan);
  out << "x,u,rho\n";
  for (std::size_t i = 0; i < sc.samples; ++i) {
    const double x = sc.x_min + (sc.x_max - sc.x_min) * static_cast<double>(i) /
                                    static_cast<double>(sc.samples - 1);
    const State s = sample(fan, m, x, sc.t_end);
    out << num(x) << "," << num(s.u()) << "," << num(s.rho()) << "\n";
  }
  return kOk;
}

inline int cmd_sweep(const Scenario& sc, std::ostream& out, std::ostream& err) {
  const SweepResult r = sweep(sc.model(), sc.data, sc.eps_list);
  out << "epsilon,u_star,rho_star,s1,s2,l_estimate,weight_estimate\n";
  for (const auto& x : r.records) {
    out << num(x.epsilon) << "," << num(x.u_star) << "," << num(x.rho_star) << "," << num(x.s1)
        << "," << num(x.s2) << "," << num(x.l_estimate) << "," << num(x.weight_estimate) << "\n";
  }
  for (const auto& n : r.notices) {
    err << "notice: eps=" << num(n.epsilon) << " skipped: " << n.message << "\n";
  }
  return kOk;
}

inline int cmd_limit(const Scenario& sc, std::ostream& out, std::ostream& err) {
  const CaseTag tag = classify(sc.data);
  nlohmann::ordered_json j = detail::limit_json(closed_form_limit(sc.data), tag);
  if (tag == CaseTag::two_shock) {
    const SweepResult r = sweep(sc.model(), sc.data, sc.eps_list);
    for (const auto& n : r.notices) {
      err << "notice: eps=" << num(n.epsilon) << " skipped: " << n.message << "\n";
    }
    if (r.records.size() >= 3) {
      const ExtrapolationReport ex = extrapolate_limit(r.records, sc.data);
      nlohmann::ordered_json e;
      e["c_slope"] = ex.limit.c_slope;
      e["weight_slope"] = ex.limit.weight_slope;
      e["l"] = ex.limit.l;
      e["u_on_line"] = ex.limit.u_on_line;
      e["converged"] = ex.converged;
      nlohmann::ordered_json fits = nlohmann::ordered_json::array();
      for (const auto& f : ex.fits) {
        fits.push_back({{"quantity", f.name},
                        {"last_value", f.last_value},
                        {"extrapolated", f.extrapolated},
                        {"order", std::isfinite(f.order) ? nlohmann::ordered_json(f.order)
                                                         : nlohmann::ordered_json(nullptr)},
                        {"converged", f.converged}});
      }
      e["fits"] = fits;
      j["extrapolation"] = e;
    } else {
      err << "notice: fewer than 3 sweep records, no extrapolation\n";
    }
  }
  out << j.dump(2) << "\n";
  return kOk;
}

inline int cmd_entropy(const Scenario& sc, std::ostream& out, std::ostream& err) {
  const FluxModel base = sc.model();
  const EntropyPair pair = brio_entropy_pair(base);
  std::vector<State> grid;
  for (double u : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    for (double rho : {0.1, 1.0, 5.0}) grid.emplace_back(u, rho);
  }
  const PairCheckReport pc = verify_pair(pair, grid);
  out << "pair_identity_symbolic," << (pc.symbolic_zero ? "zero" : "nonzero") << "\n";
  out << "pair_fd_max_residual," << num(pc.max_fd_residual) << "\n";
  if (classify(sc.data) != CaseTag::two_shock) {
    err << "note: delta coefficients need two-shock data (u_l > u_r)\n";
    return pc.symbolic_zero ? kOk : kValidation;
  }
  out << "coefficient_limit," << num(delta_coefficient_limit(sc.data)) << "\n";
  out << "epsilon,coeff1,coeff2,admissible\n";
  const SweepResult r = sweep(base, sc.data, sc.eps_list);
  for (const auto& x : r.records) {
    const FluxModel m = base.with_epsilon(x.epsilon);
    const auto c = delta_coefficients(m, sc.data, {x.u_star, x.rho_star, x.epsilon});
    out << num(x.epsilon) << "," << num(c.coeff1) << "," << num(c.coeff2) << ","
        << (admissibility_verdict(c) ? "true" : "false") << "\n";
  }
  for (const auto& n : r.notices) {
    err << "notice: eps=" << num(n.epsilon) << " skipped: " << n.message << "\n";
  }
  return kOk;
}

inline int cmd_weak_residual(const Scenario& sc, std::ostream& out) {
  const LimitObject lim = closed_form_limit(sc.data);
  const MeasureSolution sol =
      detail::perturbed(to_measure_solution(lim), sc.perturb, sc.perturb_factor);
  const double line = sol.singular ? sol.singular->c_slope : 0.5 * (sc.data.left.u() + sc.data.right.u());
  const auto battery = standard_battery(line, sc.seed, sc.bumps);
  const WeakFormReport rep = check_weak_form(sol, sc.data, battery);
  out << "bump,x0,t0,rx,rt,residual_u,residual_u_literal,residual_rho,tolerance\n";
  int k = 0;
  for (const auto& e : rep.entries) {
    out << k++ << "," << num(e.bump.x0()) << "," << num(e.bump.t0()) << "," << num(e.bump.rx())
        << "," << num(e.bump.rt()) << "," << num(e.residual_u) << ","
        << num(e.residual_u_literal) << "," << num(e.residual_rho) << "," << num(e.tolerance)
        << "\n";
  }
  out << "max_ratio_u," << num(rep.max_ratio_u) << "\n";
  out << "max_ratio_rho," << num(rep.max_ratio_rho) << "\n";
  out << "max_ratio_u_literal," << num(rep.max_ratio_literal) << "\n";
  out << "weak_form," << (rep.pass ? "pass" : "fail") << "\n";
  return rep.pass ? kOk : kValidation;
}

inline int cmd_fv_compare(const Scenario& sc, std::ostream& out, std::ostream& err) {
  const FluxModel m = sc.model();
  const CompareReport rep = run_compare(m, sc.data, sc.grid(), sc.t_end, sc.levels);
  out << "case," << to_string(rep.tag) << "\n";
  out << "n_cells,l1_u,l1_rho,l1,order,steps,clips\n";
  for (std::size_t k = 0; k < rep.entries.size(); ++k) {
    const auto& e = rep.entries[k];
    out << e.n_cells << "," << num(e.l1_u) << "," << num(e.l1_rho) << "," << num(e.l1) << ","
        << (k == 0 ? std::string() : num(rep.orders[k - 1])) << "," << e.steps << "," << e.clips
        << "\n";
  }
  if (sc.snapshot) {
    const Grid1D g = sc.grid();
    const FieldSnapshot s = run(m, sc.data, g, sc.t_end);
    std::ofstream f(*sc.snapshot);
    if (!f) throw invalid_input("cannot write snapshot file '" + *sc.snapshot + "'");
    write_snapshot_csv(f, s, g);
    err << "snapshot written to " << *sc.snapshot << "\n";
  }
  return kOk;
}

inline int cmd_all(const Scenario& sc, std::ostream& out, std::ostream& err) {
  int worst = kOk;
  auto section = [&](const char* name, auto&& fn) {
    out << "## " << name << "\n";
    try {
      worst = std::max(worst, fn());
    } catch (const invalid_input& e) {
      err << name << ": " << e.what() << "\n";
      worst = std::max(worst, int(kValidation));
    } catch (const solver_error& e) {
      err << name << ": " << e.what() << "\n";
      worst = std::max(worst, int(kSolver));
    }
  };
  section("validate-flux", [&] { return cmd_validate_flux(sc, out); });
  section("solve", [&] { return cmd_solve(sc, out); });
  if (classify(sc.data) == CaseTag::two_shock) {
    section("sweep", [&] { return cmd_sweep(sc, out, err); });
  }
  section("limit", [&] { return cmd_limit(sc, out, err); });
  if (sc.flux_kind == FluxKind::brio) {
    section("entropy", [&] { return cmd_entropy(sc, out, err); });
  }
  section("weak-residual", [&] { return cmd_weak_residual(sc, out); });
  section("fv-compare", [&] { return cmd_fv_compare(sc, out, err); });
  return worst;
}

// ---------------------------------------------------------------------------

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Riemann solver and eps -> 0 limit analyzer for the scaled system\n"
               "  u_t + (u^2/2 + eps f(rho))_x = 0,  rho_t + (u rho + eps g(rho))_x = 0."};
  app.name("dshock");
  app.footer(kColumnHelp);
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  auto flag = [&](const std::string& key, const std::string& help) {
    std::string name = "--" + key;
    for (auto& ch : name) {
      if (ch == '_') ch = '-';
    }
    app.add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  app.add_option("--config", config_path, "flat key = value configuration file (flags win)");
  flag("flux", "brio | quadratic-g | table");
  flag("flux_table", "CSV of rho,f,df samples starting at rho = 0 (flux = table)");
  flag("g", "linear | quadratic (flux = table)");
  flag("ul", "left velocity u_l");
  flag("rhol", "left density rho_l");
  flag("ur", "right velocity u_r");
  flag("rhor", "right density rho_r");
  flag("eps", "scaling parameter eps > 0");
  flag("eps_list", "comma-separated strictly decreasing eps values");
  flag("x_min", "domain left end");
  flag("x_max", "domain right end");
  flag("cells", "finite-volume cells (>= 16)");
  flag("cfl", "Courant number in (0, 1)");
  flag("t_end", "time of the sampled / simulated solution");
  flag("levels", "comma-separated cell counts for fv-compare");
  flag("t", "time for mass checks");
  flag("seed", "test-bump battery seed");
  flag("bumps", "number of test bumps");
  flag("samples", "sample count for solve and validate-flux");
  flag("rho_max", "upper density for validate-flux");
  flag("snapshot", "write the finite-volume snapshot CSV (x,u,rho) here");
  flag("perturb", "weak-residual mutant: none | speed | weight | line");
  flag("perturb_factor", "multiplier used by --perturb");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"validate-flux", "check f' > 0 increasing and genuine nonlinearity"},
      {"solve", "exact wave fan at eps and samples at t_end"},
      {"sweep", "two-shock records over eps_list (CSV)"},
      {"limit", "eps -> 0 limit object (JSON) with extrapolation"},
      {"entropy", "entropy pair identity and delta coefficients"},
      {"weak-residual", "weak-form residuals of the limit on a bump battery"},
      {"fv-compare", "finite-volume refinement table against the exact solution"},
      {"all", "every report in sequence"}};
  std::string chosen;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->callback([&chosen, name = std::string(s.name)] { chosen = name; });
  }

  std::vector<std::string> storage{"dshock"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    Settings settings = config_path.empty() ? Settings{} : load_config(config_path);
    for (const auto& [k, v] : flags) {
      std::string name = "--" + k;
      for (auto& ch : name) {
        if (ch == '_') ch = '-';
      }
      settings[k] = {v, name};
    }
    const Scenario sc = build_scenario(settings);
    if (chosen == "validate-flux") return cmd_validate_flux(sc, out);
    if (chosen == "solve") return cmd_solve(sc, out);
    if (chosen == "sweep") return cmd_sweep(sc, out, err);
    if (chosen == "limit") return cmd_limit(sc, out, err);
    if (chosen == "entropy") return cmd_entropy(sc, out, err);
    if (chosen == "weak-residual") return cmd_weak_residual(sc, out);
    if (chosen == "fv-compare") return cmd_fv_compare(sc, out, err);
    return cmd_all(sc, out, err);
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const solver_error& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  }
}

}  // namespace dshock::cli
