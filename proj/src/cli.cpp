#include "cryst/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "cryst/errors.hpp"
#include "cryst/json_io.hpp"

namespace cryst {

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;
};

struct Outcome {
  Json report;
  bool pass = true;
  std::vector<std::pair<double, double>> series;
};

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
  auto* opt = sub->add_option("--config,-c", c.config, "JSON config file");
  if (config_required) opt->required();
  sub->add_option("--out,-o", c.out, "report path (default: stdout)");
  sub->add_option("--csv", c.csv, "CSV series path (columns r,value)");
  sub->add_option("--seed", c.seed, "random seed");
}

Json load(const Common& c) { return read_json_file(c.config); }

double get_num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<double> get_list(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Point> get_points(const Json& j, const char* key, int dim) {
  std::vector<Point> out;
  if (!j.contains(key)) return out;
  for (const Json& v : j.at(key)) out.push_back(point_from_json(v, dim));
  return out;
}

bool is_spec(const Json& j) { return j.is_object() && j.contains("terms"); }

LatticeCombSpec spec_in(const Json& j) { return spec_from_json(is_spec(j) ? j : j.at("spec")); }

// The measure named by a config: "measure", "spec" (realized), or the config
// itself. "transform": true selects the spectrum of a spec.
AtomicMeasure measure_in(const Json& j) {
  if (j.contains("measure")) return measure_from_json(j.at("measure"));
  if (j.contains("spec") || is_spec(j)) {
    const LatticeCombSpec s = spec_in(j);
    const bool transform = j.contains("transform") && j.at("transform").get<bool>();
    return transform ? fourier_of_spec(s) : realize_measure(s);
  }
  if (j.contains("atoms")) return measure_from_json(j);
  throw ConfigError("config names no measure: expected 'measure', 'spec' or atoms");
}

std::vector<Point> random_points(int dim, double radius, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point> out;
  while (out.size() < n) {
    Point p(dim);
    for (int c = 0; c < dim; ++c) p[c] = u(rng);
    if (p.norm() < radius) out.push_back(p);
  }
  return out;
}

Outcome cmd_poisson(const Common& c) {
  const Json j = load(c);
  const LatticeCombSpec spec = spec_in(j);
  std::vector<TestFunction> phis;
  if (j.contains("functions")) {
    for (const Json& f : j.at("functions")) phis.push_back(test_function_from_json(f, spec.dim));
  } else {
    phis = default_poisson_functions(spec.dim);
  }
  const std::string id = j.contains("id") ? j.at("id").get<std::string>() : c.config;
  const PoissonReport r = poisson_check(spec, phis, id, get_num(j, "threshold", 1e-8));
  return {to_json(r), r.pass, {}};
}

Outcome cmd_growth(const Common& c) {
  const Json j = load(c);
  AtomicMeasure mu = measure_in(j);
  if (j.contains("mass_power")) mu = power_mass_measure(mu, get_num(j, "mass_power", 1.0));
  std::vector<double> radii = get_list(j, "radii", {});
  if (radii.empty()) {
    const double top = std::min(100.0, 0.9 * mu.window());
    for (double r = std::min(10.0, top / 4.0); r <= top * (1 + 1e-12); r *= 1.25) radii.push_back(r);
  }
  const GrowthReport g = growth_exponent(mu, radii);
  Outcome o{to_json(g), true, {}};
  for (std::size_t i = 0; i < g.radii.size(); ++i) o.series.push_back({g.radii[i], g.variations[i]});
  if (j.contains("expect_polynomial")) o.pass = g.polynomial == j.at("expect_polynomial").get<bool>();
  if (j.contains("expect_exponent")) {
    const double tol = get_num(j, "tolerance", 0.05);
    o.pass = o.pass && g.polynomial &&
             std::abs(g.fitted_exponent - get_num(j, "expect_exponent", 0.0)) <= tol;
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_translation_bound(const Common& c) {
  const Json j = load(c);
  AtomicMeasure mu = measure_in(j);
  if (j.contains("mass_power")) mu = power_mass_measure(mu, get_num(j, "mass_power", 1.0));
  TranslationBoundOptions opts;
  opts.grid_pitch = get_num(j, "grid_pitch", 0.0);
  opts.core_radius = get_num(j, "core_radius", 0.0);
  const TranslationBoundReport r = translation_bound_estimate(mu, get_num(j, "radius", 1.0), opts);
  Outcome o{to_json(r), true, {}};
  if (j.contains("bound")) o.pass = r.sup_estimate <= get_num(j, "bound", 0.0) * (1.0 + 1e-12);
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_bohr(const Common& c) {
  const Json j = load(c);
  if (j.contains("spec")) {
    const LatticeCombSpec spec = spec_in(j);
    const AtomicMeasure mu = realize_measure(spec);
    const AtomicMeasure mu_hat = fourier_of_spec(spec);
    const TestFunction phi = j.contains("function")
                                 ? test_function_from_json(j.at("function"), spec.dim)
                                 : TestFunction::plateau(spec.dim, 1.0, 2.0);
    CoefficientOptions opts;
    opts.R = get_num(j, "R", 10.0);
    opts.center = j.contains("center") ? point_from_json(j.at("center"), spec.dim) : Point(spec.dim);
    opts.tolerance = get_num(j, "tolerance", opts.tolerance);
    std::vector<Point> probes = get_points(j, "probes", spec.dim);
    if (probes.empty()) {
      for (const Atom& a : mu_hat.atoms()) {
        if (a.x.norm() < 2.0) probes.push_back(a.x);
      }
    }
    const CoefficientReport r = convolution_fourier_coefficients(mu, mu_hat, phi, probes, opts);
    return {to_json(r), r.ok, {}};
  }
  const TrigPolynomial d = trig_from_json(j.contains("trig") ? j.at("trig") : j);
  const Point omega = point_from_json(j.at("omega"), d.dim());
  const Point center = j.contains("center") ? point_from_json(j.at("center"), d.dim()) : Point(d.dim());
  const BohrEstimate b = bohr_coefficient(d, omega, get_num(j, "R", 100.0), center);
  Outcome o{to_json(b), true, {}};
  if (j.contains("expected")) {
    const Complex e = complex_from_json(j.at("expected"));
    o.pass = std::abs(b.value - e) <= b.error_bound + get_num(j, "tolerance", 1e-12);
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_parseval(const Common& c) {
  const Json j = load(c);
  const TrigPolynomial d = trig_from_json(j.contains("trig") ? j.at("trig") : j);
  const Point center = j.contains("center") ? point_from_json(j.at("center"), d.dim()) : Point(d.dim());
  const ParsevalReport r = parseval_check(d, get_list(j, "schedule", {1e2, 1e3, 1e4}), center);
  Outcome o{to_json(r), true, {}};
  for (const ParsevalRow& row : r.rows) {
    o.series.push_back({row.R, row.mean_square});
    o.pass = o.pass && std::abs(row.mean_square - r.limit) <= row.error_bound + 1e-12;
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_almost_periods(const Common& c) {
  const Json j = load(c);
  const TrigPolynomial d = trig_from_json(j.contains("trig") ? j.at("trig") : j);
  const AlmostPeriodReport r = almost_periods(d, get_num(j, "eps", 0.1), get_num(j, "scan_range", 100.0),
                                              get_num(j, "scan_pitch", 1e-3));
  Outcome o{to_json(r), r.periods.size() > 1, {}};
  o.report["pass"] = o.pass;
  return o;
}

SolveOptions solve_options(const Json& j, const Common& c) {
  SolveOptions so;
  so.seed = c.seed;
  so.starts = static_cast<int>(get_num(j, "starts", so.starts));
  so.budget = static_cast<std::size_t>(get_num(j, "budget", static_cast<double>(so.budget)));
  return so;
}

Outcome cmd_kronecker_solve(const Common& c) {
  const Json j = load(c);
  const KroneckerInstance inst = instance_from_json(j.contains("instance") ? j.at("instance") : j);
  const KroneckerSolution s = solve(inst, solve_options(j, c));
  Json r = to_json(s);
  r["instance"] = to_json(inst);
  if (!s.success && inst.exact_vectors) r["relations"] = to_json(relation_check(inst));
  return {r, s.success, {}};
}

Outcome cmd_kronecker_relations(const Common& c) {
  const Json j = load(c);
  const KroneckerInstance inst = instance_from_json(j.contains("instance") ? j.at("instance") : j);
  const RelationCheck r = relation_check(inst);
  return {to_json(r), r.solvable, {}};
}

Outcome cmd_kronecker_certify(const Common& c, std::optional<unsigned> n, unsigned q, bool show) {
  KroneckerInstance inst;
  if (!c.config.empty()) {
    const Json j = load(c);
    inst = instance_from_json(j.contains("instance") ? j.at("instance") : j);
    if (j.contains("q")) q = static_cast<unsigned>(get_num(j, "q", q));
  } else {
    if (!n || *n < 1 || *n > 16) throw ConfigError("--N must be in 1..16 without a config");
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<std::vector<std::string>> vecs;
    std::vector<std::string> targets;
    for (unsigned i = 0; i < *n; ++i) {
      vecs.push_back({"sqrt(" + std::to_string(primes[i]) + ")"});
      targets.push_back("0");
    }
    inst = KroneckerInstance::from_exact(1, vecs, targets, 1e-2);
  }
  const RelationCheck rc = relation_check(inst);
  const bool independent = rc.mode == "exact" && rc.relations.empty();
  const PowerExpansion e = power_expansion(inst, q);
  const CertificateResult cr = certificate_check(e, independent);
  Json r = to_json(cr);
  r["N"] = inst.size();
  r["q"] = q;
  r["independent"] = independent;
  r["relations"] = to_json(rc);
  r["multinomial_total"] = e.multinomial_total.get_str();
  r["entry_count"] = e.entries.size();
  r["merged_count"] = e.merged.size();
  if (show) r["expansion"] = to_json(e);
  return {r, cr.passes, {}};
}

Outcome cmd_theorem2(const Common& c) {
  const Json j = load(c);
  const LatticeCombSpec spec = spec_in(j);
  Theorem2Options opts;
  opts.r_in = get_num(j, "r_in", opts.r_in);
  opts.r_out = get_num(j, "r_out", opts.r_out);
  opts.n_centers = static_cast<std::size_t>(get_num(j, "n_centers", static_cast<double>(opts.n_centers)));
  opts.centers = get_points(j, "centers", spec.dim);
  opts.schedule = get_list(j, "schedule", opts.schedule);
  opts.growth_radii = get_list(j, "growth_radii", {});
  opts.seed = c.seed;
  const std::string id = j.contains("id") ? j.at("id").get<std::string>() : c.config;
  const Theorem2Report r = theorem2_harness(spec, opts, id);
  Outcome o{to_json(r), r.pass, {}};
  const AtomicMeasure mu_hat = fourier_of_spec(spec);
  for (double rad : r.radii) o.series.push_back({rad, variation_on_ball(mu_hat, Point(spec.dim), rad).value});
  return o;
}

Outcome cmd_theorem3(const Common& c) {
  const Json j = load(c);
  const LatticeCombSpec spec = spec_in(j);
  Theorem3Options opts;
  opts.region = get_num(j, "region", opts.region);
  opts.kronecker_eps = get_num(j, "eps", opts.kronecker_eps);
  opts.seed = c.seed;
  const std::string id = j.contains("id") ? j.at("id").get<std::string>() : c.config;
  const Theorem3Report r = theorem3_harness(spec, get_num(j, "eta", 0.4), opts, id);
  return {to_json(r), r.pass, {}};
}

Outcome cmd_prop2(const Common& c) {
  const Json j = load(c);
  const LatticeCombSpec spec = spec_in(j);
  const AtomicMeasure mu = realize_measure(spec);
  const AtomicMeasure mu_hat = fourier_of_spec(spec);
  std::vector<Point> centers = get_points(j, "centers", spec.dim);
  if (centers.empty()) {
    centers = random_points(spec.dim, 0.5 * spec.window,
                            static_cast<std::size_t>(get_num(j, "n_centers", 100)), c.seed);
  }
  const Prop2Certificate r =
      prop2_certificate(BumpAutocorrelation{get_num(j, "radius", 1.0)}, mu, mu_hat, centers);
  return {to_json(r), r.holds && r.margin > 0.0, {}};
}

Outcome cmd_prop3(const Common& c) {
  const Json j = load(c);
  const AtomicMeasure mu = measure_in(j);
  const TestFunction phi = j.contains("function") ? test_function_from_json(j.at("function"), mu.dim())
                                                  : TestFunction::gaussian(mu.dim(), 1.0);
  std::vector<Point> probes = get_points(j, "probes", mu.dim());
  if (probes.empty()) {
    probes = random_points(mu.dim(), 0.5 * mu.window(),
                           static_cast<std::size_t>(get_num(j, "n_probes", 100)), c.seed);
  }
  const Prop3Certificate r = prop3_certificate(mu, phi, probes);
  return {to_json(r), r.holds && r.margin > 0.0, {}};
}

void emit(const Common& c, const Outcome& o, std::ostream& out) {
  const std::string text = o.report.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
  }
  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw ConfigError("cannot write " + c.csv);
    f.precision(17);
    f << "r,value\n";
    for (const auto& [r, v] : o.series) f << r << "," << v << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"crystalline measure toolkit", "crystal"};
  app.require_subcommand(1);
  Common common;
  std::optional<unsigned> n;
  unsigned q = 1;
  bool show = false;

  struct Entry {
    CLI::App* sub;
    std::function<Outcome()> run;
  };
  std::vector<Entry> entries;
  auto add = [&](const std::string& name, const std::string& help, std::function<Outcome()> fn,
                 bool config_required = true) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, common, config_required);
    entries.push_back({s, std::move(fn)});
    return s;
  };
  add("poisson-check", "compare both sides of the Poisson formula", [&] { return cmd_poisson(common); });
  add("growth", "fit the growth exponent of |mu|(B(0, r))", [&] { return cmd_growth(common); });
  add("translation-bound", "estimate sup |mu|(B(x, r))", [&] { return cmd_translation_bound(common); });
  add("bohr", "Bohr coefficients of a trig polynomial or of mu * phi^", [&] { return cmd_bohr(common); });
  add("parseval", "mean square of a trig polynomial over growing balls", [&] { return cmd_parseval(common); });
  add("almost-periods", "scan for eps-almost periods", [&] { return cmd_almost_periods(common); });
  add("kronecker-solve", "solve a simultaneous approximation instance",
      [&] { return cmd_kronecker_solve(common); });
  add("kronecker-relations", "integer relations and solvability",
      [&] { return cmd_kronecker_relations(common); });
  CLI::App* cert = add("kronecker-certify", "exact power-expansion certificate",
                       [&] { return cmd_kronecker_certify(common, n, q, show); }, false);
  cert->add_option("--N", n, "number of frequencies (independent square roots of primes)");
  cert->add_option("--q", q, "power");
  cert->add_flag("--show-expansion", show, "include every expansion entry");
  add("theorem2", "squared-mass translation bound harness", [&] { return cmd_theorem2(common); });
  add("theorem3", "phase alignment against the convolution ceiling", [&] { return cmd_theorem3(common); });
  add("prop2", "ball mass bound from the spectrum", [&] { return cmd_prop2(common); });
  add("prop3", "sup |mu * phi| <= (d+1) C1 C2", [&] { return cmd_prop3(common); });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    for (const Entry& e : entries) {
      if (!e.sub->parsed()) continue;
      const Outcome o = e.run();
      emit(common, o, out);
      return o.pass ? kExitPass : kExitCheckFailed;
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const CheckRefused& e) {
    err << "refused: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace cryst
