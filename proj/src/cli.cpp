#include "weightlab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "weightlab/constants.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/parallel.hpp"
#include "weightlab/report.hpp"
#include "weightlab/twoweight.hpp"
#include "weightlab/verify.hpp"

namespace weightlab {

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(current);
      current.clear();
      continue;
    }
    current += c;
  }
  out.push_back(current);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

namespace {

struct Options {
  std::string kind;
  std::string weight;
  std::string weights;
  std::string u;
  std::string sigmas;
  std::optional<double> p;
  std::optional<double> s;
  std::vector<double> pvec;
  std::vector<double> svec;
  std::size_t grid = 1024;
  int dim = 1;
  std::string family = "dyadic";
  std::size_t min_side = 1;
  std::string domain = "-1,1";
  std::string format = "json";
  std::string output;
  int refine = 0;
  std::string algo = "fast";
  unsigned threads = 0;
  double rel_tol = QuadratureConfig{}.rel_tol;
  std::vector<std::size_t> ladder;
  double p1 = 2.0;
  std::vector<int> levels{10, 20};
  std::size_t random_probes = 0;
  std::uint64_t seed = 0;
  bool no_indicators = false;
};

std::pair<double, double> parse_domain(const std::string& text) {
  const auto parts = split_top_level(text);
  if (parts.size() != 2) throw PreconditionError("--domain expects lo,hi");
  try {
    std::size_t used = 0;
    const double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    const double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    if (!(lo < hi)) throw PreconditionError("--domain needs lo < hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw PreconditionError("--domain expects two numbers, got '" + text + "'");
  }
}

std::vector<WeightSpec> parse_specs(const std::string& text, const char* flag) {
  if (text.empty()) throw PreconditionError(std::string(flag) + " is required");
  std::vector<WeightSpec> out;
  for (const auto& s : split_top_level(text)) out.push_back(parse_weight_spec(s));
  return out;
}

WeightSpec single_spec(const Options& o) {
  if (!o.weight.empty()) return parse_weight_spec(o.weight);
  if (!o.weights.empty()) {
    auto specs = parse_specs(o.weights, "--weights");
    if (specs.size() == 1) return specs.front();
  }
  throw PreconditionError("--weight is required");
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw PreconditionError(std::string(flag) + " is required");
  return *v;
}

ExponentVector require_pvec(const Options& o) {
  if (o.pvec.empty()) throw PreconditionError("--pvec is required");
  return ExponentVector(o.pvec);
}

CubeFamily family_of(const Options& o) { return {parse_family(o.family), o.min_side}; }

QuadratureConfig quad_of(const Options& o) {
  QuadratureConfig q;
  q.rel_tol = o.rel_tol;
  q.validate();
  return q;
}

Ladder ladder_of(const Options& o, std::vector<std::size_t> fallback) {
  Ladder l;
  l.sizes = o.ladder.empty() ? std::move(fallback) : o.ladder;
  l.dim = o.dim;
  std::tie(l.lo, l.hi) = parse_domain(o.domain);
  l.validate();
  return l;
}

Grid grid_of(const Options& o, std::size_t n) {
  if (o.dim != 1 && o.dim != 2) throw PreconditionError("--dim must be 1 or 2");
  const auto [lo, hi] = parse_domain(o.domain);
  return o.dim == 1 ? Grid::interval(lo, hi, n) : Grid::square(lo, hi, n);
}

ConstantReport constant_at(const Options& o, const Grid& grid) {
  const CubeFamily family = family_of(o);
  const QuadratureConfig quad = quad_of(o);
  if (o.kind == "apvec") {
    const auto specs = parse_specs(o.weights, "--weights");
    const ExponentVector pvec = require_pvec(o);
    if (specs.size() != pvec.m()) throw ArityError("--weights and --pvec differ in length");
    std::vector<SampledWeight> w;
    std::vector<SampledWeight> duals;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      w.push_back(sample(specs[i], grid, quad));
      duals.push_back(dual_of(w.back(), pvec.p_i(i)));
    }
    return apvec_constant(w, duals, pvec, family);
  }
  const SampledWeight w = sample(single_spec(o), grid, quad);
  if (o.kind == "a1") return a1_constant(w, family);
  if (o.kind == "fw") return fw_constant(w, family, parse_algorithm(o.algo));
  if (o.kind == "ap") {
    const double p = require(o.p, "--p");
    return ap_constant(w, dual_of(w, p), p, family);
  }
  const double s = require(o.s, "--s");
  return rh_constant(w, power_of(w, s), s, family);
}

struct Outcome {
  Json json;
  bool passed = true;
};

Outcome run_constant(const Options& o) {
  if (o.refine < 0) throw PreconditionError("--refine must be >= 0");
  std::vector<SeriesPoint> series;
  ConstantReport report;
  for (int j = 0; j <= o.refine; ++j) {
    const std::size_t n = o.grid << j;
    report = constant_at(o, grid_of(o, n));
    series.push_back({n, report.value});
  }
  if (o.refine > 0) {
    report.refinement = series;
    report.flags.push_back("refinement-" + std::string(verdict_name(classify_series(series))));
  }
  return {to_json(report), true};
}

Outcome run_maximal(const Options& o) {
  const Grid grid = grid_of(o, o.grid);
  const QuadratureConfig quad = quad_of(o);
  std::vector<CellField> fields;
  for (const auto& spec : parse_specs(o.weights.empty() ? o.weight : o.weights, "--weights"))
    fields.push_back(sample(spec, grid, quad).field);
  const MaximalResult r = mult_maximal(fields, family_of(o), parse_algorithm(o.algo));
  Json j;
  j["grid"] = to_json(grid);
  j["family"] = family_name(r.family.kind);
  j["min_side"] = r.family.min_side_cells;
  j["algorithm"] = algorithm_name(r.algorithm);
  Json values = Json::array();
  for (std::size_t i = 0; i < grid.cell_count(); ++i) values.push_back(number(r.values[i]));
  j["values"] = values;
  return {j, true};
}

Outcome run_twoweight(const Options& o) {
  const CubeFamily family = family_of(o);
  const QuadratureConfig quad = quad_of(o);
  const auto sigma_specs = parse_specs(o.sigmas, "--sigmas");
  if (o.u.empty()) throw PreconditionError("--u is required");
  const WeightSpec u_spec = parse_weight_spec(o.u);
  const ExponentVector pvec = require_pvec(o);
  ProbeSet probes;
  probes.indicators = !o.no_indicators;
  probes.random_count = o.random_probes;
  probes.seed = o.seed;
  if (o.kind == "thm19") {
    const ReportDocument doc =
        theorem19_scenario(sigma_specs, u_spec, pvec, ladder_of(o, {256, 1024, 4096}), family, probes, quad);
    return {to_json(doc), doc.passed()};
  }
  const Grid grid = grid_of(o, o.grid);
  const SampledWeight u = sample(u_spec, grid, quad);
  std::vector<SampledWeight> sigmas;
  for (const auto& s : sigma_specs) sigmas.push_back(sample(s, grid, quad));
  if (o.kind == "sp") return {to_json(sp_constant(u, sigmas, pvec, family, parse_algorithm(o.algo))), true};
  const TwoWeightReport r = empirical_norm(u, sigmas, pvec, family, probes);
  return {to_json(r), r.ordering_holds};
}

Outcome run_verify(const Options& o) {
  VerifyOptions opt;
  opt.family = family_of(o);
  opt.quad = quad_of(o);
  const std::vector<std::size_t> fallback = Ladder{}.sizes;
  ReportDocument doc;
  if (o.kind == "lemma") {
    doc = lemma_jn_scenario(single_spec(o), require(o.p, "--p"), require(o.s, "--s"), ladder_of(o, fallback), opt);
  } else {
    const auto specs = parse_specs(o.weights, "--weights");
    if (o.kind == "multrh") {
      doc = verify_multrh(specs, o.svec, ladder_of(o, fallback), opt);
    } else if (o.kind == "complement") {
      if (specs.size() != 2 || o.svec.size() != 2) throw ArityError("complement needs two weights and two s values");
      doc = rh_complement_check(specs[0], specs[1], o.svec[0], o.svec[1], ladder_of(o, fallback), opt);
    } else if (o.kind == "product") {
      doc = product_bound_check(specs, require_pvec(o), grid_of(o, o.grid), opt);
    } else if (o.kind == "cormultrh") {
      doc = verify_cor_multrh(specs, require_pvec(o), ladder_of(o, fallback), opt);
    } else if (o.kind == "thm15") {
      doc = theorem15_check(specs, require_pvec(o), ladder_of(o, fallback), opt);
    } else {
      doc = theorem17_check(specs, require_pvec(o), ladder_of(o, fallback), opt);
    }
  }
  return {to_json(doc), doc.passed()};
}

Outcome run_counterexample(const Options& o) {
  VerifyOptions opt;
  opt.family = family_of(o);
  opt.quad = quad_of(o);
  Ladder ladder = counterexample_ladder();
  if (!o.ladder.empty()) ladder.sizes = o.ladder;
  const ReportDocument doc = counterexample_scenario(o.p1, ladder, o.levels, opt);
  return {to_json(doc), doc.passed()};
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "dyadic or all")->check(CLI::IsMember({"dyadic", "all"}));
  app->add_option("--min-side", o.min_side, "smallest cube side in cells")->check(CLI::PositiveNumber);
  app->add_option("--dim", o.dim, "1 or 2")->check(CLI::IsMember({1, 2}));
  app->add_option("--domain", o.domain, "lo,hi (default -1,1)");
  app->add_option("--out", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--output", o.output, "write the report here instead of stdout");
  app->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
  app->add_option("--threads", o.threads, "worker threads, 0 = hardware");
}

void add_grid(CLI::App* app, Options& o) {
  app->add_option("--grid", o.grid, "cells per side (power of two)");
}

void add_ladder(CLI::App* app, Options& o) {
  app->add_option("--ladder", o.ladder, "comma separated grid sizes")->delimiter(',');
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Muckenhoupt-type weight characteristics on discrete grids", "weightlab"};
  app.require_subcommand(1);
  Options o;

  auto* constant = app.add_subcommand("constant", "one characteristic of a weight");
  constant->add_option("kind", o.kind)->required()->check(CLI::IsMember({"a1", "ap", "rh", "fw", "apvec"}));
  constant->add_option("--weight", o.weight, "weight spec");
  constant->add_option("--weights", o.weights, "comma separated weight specs");
  constant->add_option("--p", o.p);
  constant->add_option("--pvec", o.pvec)->delimiter(',');
  constant->add_option("--s", o.s);
  constant->add_option("--refine", o.refine, "also evaluate at N*2^j for j <= k");
  constant->add_option("--algo", o.algo)->check(CLI::IsMember({"naive", "fast"}));
  add_grid(constant, o);
  add_common(constant, o);

  auto* maximal = app.add_subcommand("maximal", "multilinear maximal function, one value per cell");
  maximal->add_option("--weights", o.weights, "comma separated specs f_1,...,f_m");
  maximal->add_option("--weight", o.weight, "single spec");
  maximal->add_option("--algo", o.algo)->check(CLI::IsMember({"naive", "fast"}));
  add_grid(maximal, o);
  add_common(maximal, o);

  auto* twoweight = app.add_subcommand("twoweight", "two-weight testing constant and probe norms");
  twoweight->add_option("kind", o.kind)->required()->check(CLI::IsMember({"sp", "norm", "thm19"}));
  twoweight->add_option("--u", o.u, "target weight spec");
  twoweight->add_option("--sigmas", o.sigmas, "comma separated source weight specs");
  twoweight->add_option("--pvec", o.pvec)->delimiter(',');
  twoweight->add_option("--random-probes", o.random_probes);
  twoweight->add_option("--seed", o.seed);
  twoweight->add_flag("--no-indicators", o.no_indicators);
  twoweight->add_option("--algo", o.algo)->check(CLI::IsMember({"naive", "fast"}));
  add_grid(twoweight, o);
  add_ladder(twoweight, o);
  add_common(twoweight, o);

  auto* verify = app.add_subcommand("verify", "theorem-level scenarios along a grid ladder");
  verify
      ->add_option("kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"multrh", "cormultrh", "product", "thm15", "thm17", "complement", "lemma"}));
  verify->add_option("--weights", o.weights);
  verify->add_option("--weight", o.weight);
  verify->add_option("--pvec", o.pvec)->delimiter(',');
  verify->add_option("--svec", o.svec, "s_1,...,s_m for multrh and complement")->delimiter(',');
  verify->add_option("--p", o.p);
  verify->add_option("--s", o.s);
  add_grid(verify, o);
  add_ladder(verify, o);
  add_common(verify, o);

  auto* counter = app.add_subcommand("counterexample", "the A_p-vector weight whose components are not A_p");
  counter->add_option("--p1", o.p1, "p_1 = p_2 (default 2)");
  counter->add_option("--levels", o.levels, "centered scales k, default 10,20")->delimiter(',');
  add_ladder(counter, o);
  counter->add_option("--family", o.family)->check(CLI::IsMember({"dyadic", "all"}));
  counter->add_option("--min-side", o.min_side)->check(CLI::PositiveNumber);
  counter->add_option("--out", o.format)->check(CLI::IsMember({"json", "csv"}));
  counter->add_option("--output", o.output);
  counter->add_option("--rel-tol", o.rel_tol);
  counter->add_option("--threads", o.threads);

  std::vector<const char*> argv{"weightlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    set_worker_count(o.threads);
    Outcome result;
    if (constant->parsed()) {
      result = run_constant(o);
    } else if (maximal->parsed()) {
      result = run_maximal(o);
    } else if (twoweight->parsed()) {
      result = run_twoweight(o);
    } else if (verify->parsed()) {
      result = run_verify(o);
    } else {
      result = run_counterexample(o);
    }
    const std::string text = o.format == "csv" ? to_csv(result.json) : dump(result.json);
    if (o.output.empty()) {
      out << text;
    } else {
      std::ofstream file(o.output, std::ios::binary);
      if (!file) throw PreconditionError("cannot open " + o.output);
      file << text;
    }
    return result.passed ? 0 : 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace weightlab
