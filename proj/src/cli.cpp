#include "xcop/cli.hpp"

#include "xcop/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace xcop {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<Rational> rationals(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_rational(s));
  return out;
}

/// "pi", "m", "w", "fgm:θ" or a JSON file.
CopulaModel model_from_spec(const std::string& spec, std::size_t n) {
  if (spec == "pi") return CopulaModel::independence(n);
  if (spec == "m") return CopulaModel::comonotone(n);
  if (spec == "w") return CopulaModel::countermonotone();
  if (spec.rfind("fgm:", 0) == 0) return CopulaModel::fgm(parse_rational(spec.substr(4)));
  return model_from_json(load_json(spec));
}

SegmentMeasure load_segments(const std::string& path) {
  CopulaModel c = model_from_json(load_json(path));
  if (auto* s = std::get_if<SegmentMeasure>(&c.representation())) return *s;
  if (auto* g = std::get_if<GraphMeasure>(&c.representation())) return g->map.to_segment_measure();
  throw DomainError(path + " does not hold a segment measure");
}

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
};

void emit(const Globals& g, const Json& j) {
  if (g.out.empty() || g.out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(g.out, j);
  }
}

void emit_text(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) throw DomainError("cannot write " + g.out);
    f << text;
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Extreme copulas: constructions, extremality checks, approximation and Frechet bounds", "xcop"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags win)");
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Write the result here instead of stdout");

  std::function<void()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Construct a copula and print it as JSON");
  gen->require_subcommand(1);
  std::string t_str = "1/2", breaks, orient, m_perm_orient, map_path, measure_path, alpha;
  std::size_t n = 2, m = 1, axis = 1;
  std::vector<std::string> perm_specs;
  std::string a_str, b_str, delta_str;

  auto* gen_tent = gen->add_subcommand("tent", "Two-segment tent copula");
  gen_tent->add_option("--t", t_str, "Apex position in (0,1)")->capture_default_str();
  gen_tent->add_option("--n", n, "Dimension")->capture_default_str();
  gen_tent->callback([&] { action = [&] { emit(g, to_json(tent_copula(parse_rational(t_str), n))); }; });

  auto* gen_shuffle = gen->add_subcommand("shuffle", "Shuffle of M over axis-1 blocks");
  gen_shuffle->add_option("--breaks", breaks, "Comma-separated block boundaries from 0 to 1")->required();
  gen_shuffle->add_option("--orient", orient, "Comma-separated per-block orientations such as +-");
  gen_shuffle->add_option("--n", n, "Dimension")->capture_default_str();
  gen_shuffle->callback([&] {
    action = [&] {
      std::vector<Orientation> os;
      if (!orient.empty())
        for (const auto& s : split(orient, ',')) os.push_back(Orientation::parse(s));
      emit(g, to_json(shuffle_copula(n, rationals(breaks), os)));
    };
  });

  auto* gen_perm = gen->add_subcommand("perm", "Permutation copula of order m");
  gen_perm->add_option("--m", m, "Order")->required();
  gen_perm->add_option("--perm", perm_specs, "AXIS=s0,s1,... with 0-based values, one per axis 2..n")->required();
  gen_perm->add_option("--orient", m_perm_orient, "Comma-separated per-row orientations such as +-");
  gen_perm->callback([&] {
    action = [&] {
      PermutationCopulaSpec spec;
      spec.m = m;
      std::map<std::size_t, std::vector<std::size_t>> by_axis;
      for (const auto& p : perm_specs) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--perm", "expected AXIS=values");
        std::size_t ax = std::stoul(p.substr(0, eq));
        std::vector<std::size_t> sigma;
        for (const auto& v : split(p.substr(eq + 1), ',')) sigma.push_back(std::stoul(v));
        if (!by_axis.emplace(ax, std::move(sigma)).second) throw DomainError("axis given twice in --perm");
      }
      std::size_t expect = 2;
      for (auto& [ax, sigma] : by_axis) {
        if (ax != expect++) throw DomainError("--perm must list axes 2..n without gaps");
        spec.perms.push_back(std::move(sigma));
      }
      if (!m_perm_orient.empty())
        for (const auto& s : split(m_perm_orient, ',')) spec.orientations.push_back(Orientation::parse(s));
      emit(g, to_json(permutation_copula(spec)));
    };
  });

  auto* gen_four = gen->add_subcommand("fourline3d", "The three-dimensional four-segment example");
  gen_four->callback([&] { action = [&] { emit(g, to_json(four_line_3d())); }; });

  auto* gen_graph = gen->add_subcommand("graph", "Copula on the graph of a measure-preserving map");
  gen_graph->add_option("--map", map_path, "pl_map JSON file")->required();
  gen_graph->callback([&] { action = [&] { emit(g, to_json(graph_copula(pl_map_from_json(load_json(map_path))))); }; });

  auto* gen_shift = gen->add_subcommand("shift", "Cyclic shift of a segment measure");
  gen_shift->add_option("--measure", measure_path, "Segment measure JSON")->required();
  gen_shift->add_option("--alpha", alpha, "Comma-separated shift per axis")->required();
  gen_shift->callback([&] {
    action = [&] { emit(g, to_json(shift_transform(load_segments(measure_path), rationals(alpha)))); };
  });

  auto* gen_swap = gen->add_subcommand("swap", "Exchange two slabs of a segment measure");
  gen_swap->add_option("--measure", measure_path, "Segment measure JSON")->required();
  gen_swap->add_option("--axis", axis, "1-based axis")->required();
  gen_swap->add_option("--a", a_str, "Start of the first slab")->required();
  gen_swap->add_option("--b", b_str, "Start of the second slab")->required();
  gen_swap->add_option("--delta", delta_str, "Slab width")->required();
  gen_swap->callback([&] {
    action = [&] {
      if (axis < 1) throw DomainError("axes are numbered from 1");
      emit(g, to_json(swap_transform(load_segments(measure_path), axis - 1, parse_rational(a_str),
                                     parse_rational(b_str), parse_rational(delta_str))));
    };
  });

  // check
  auto* check = app.add_subcommand("check", "Checks on maps");
  check->require_subcommand(1);
  std::size_t r = 64;
  auto* check_mp = check->add_subcommand("mp", "Test whether a piecewise-linear map preserves Lebesgue measure");
  check_mp->add_option("--map", map_path, "pl_map JSON file")->required();
  check_mp->add_option("--r", r, "Number of test intervals")->capture_default_str();
  check_mp->callback([&] {
    action = [&] { emit(g, to_json(measure_preserving_check(pl_map_from_json(load_json(map_path)), r))); };
  });

  // validate
  double tol = 1e-12;
  auto* validate = app.add_subcommand("validate", "Check uniform marginals at resolution m");
  validate->add_option("--measure", measure_path, "Model JSON file")->required();
  validate->add_option("--m", m, "Resolution")->required();
  validate->add_option("--tol", tol, "Tolerance for float-backed models (rational ones are exact)")->capture_default_str();
  validate->callback([&] {
    action = [&] { emit(g, to_json(validate_copula_measure(model_from_json(load_json(measure_path)), m, tol))); };
  });

  // dist
  std::string model_a, model_b;
  auto* dist = app.add_subcommand("dist", "Lattice sup-distance between two copulas");
  dist->add_option("--a", model_a, "pi | m | w | fgm:THETA | file.json")->required();
  dist->add_option("--b", model_b, "pi | m | w | fgm:THETA | file.json")->required();
  dist->add_option("--r", r, "Lattice resolution")->capture_default_str();
  dist->add_option("--n", n, "Dimension for pi and m")->capture_default_str();
  dist->callback([&] {
    action = [&] { emit(g, to_json(dinf_distance(model_from_spec(model_a, n), model_from_spec(model_b, n), r))); };
  });

  // sample
  std::size_t count = 1000;
  auto* samp = app.add_subcommand("sample", "Draw points from a segment measure as CSV");
  samp->add_option("--measure", measure_path, "Segment measure JSON")->required();
  samp->add_option("--count", count, "Number of points")->capture_default_str();
  samp->callback([&] {
    action = [&] {
      std::ostringstream os;
      write_samples_csv(os, sample(load_segments(measure_path), count, g.seed));
      emit_text(g, os.str());
    };
  });

  // approx
  std::string copula_spec, measure_out;
  std::int64_t D = 0;
  auto* approx = app.add_subcommand("approx", "Approximate a copula by a permutation copula");
  approx->add_option("--copula", copula_spec, "pi | m | w | fgm:THETA | file.json")->required();
  approx->add_option("--m", m, "Grid order")->required();
  approx->add_option("--D", D, "Common denominator (default m^(n+2))");
  approx->add_option("--n", n, "Dimension for pi and m")->capture_default_str();
  approx->add_option("--measure-out", measure_out, "Write the approximant JSON here");
  approx->callback([&] {
    action = [&] {
      auto rep = approximate(model_from_spec(copula_spec, n), m, D > 0 ? std::optional<std::int64_t>(D) : std::nullopt);
      if (!measure_out.empty()) save_json(measure_out, to_json(rep.measure));
      Json j = to_json(rep);
      if (measure_out.empty()) j["measure"] = to_json(rep.measure);
      emit(g, j);
    };
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Extremality analysis");
  analyze->require_subcommand(1);
  std::string density_path, scale_str;
  auto* an_dec = analyze->add_subcommand("decompose", "Split a density copula into two distinct halves");
  an_dec->add_option("--density", density_path, "grid_density JSON")->required();
  an_dec->add_option("--scale", scale_str, "Square edge; default searches dyadic scales down to one cell");
  an_dec->callback([&] {
    action = [&] {
      GridDensity d = grid_density_from_json(load_json(density_path));
      std::vector<Rational> scales;
      if (!scale_str.empty()) {
        scales.push_back(parse_rational(scale_str));
      } else {
        const Rational floor_edge(1, static_cast<long>(d.spec().m));
        for (Rational e = 1; e >= floor_edge; e /= 2) scales.push_back(e);
        scales.push_back(floor_edge);
      }
      auto sq = find_dense_square(d, scales);
      if (!sq) {
        throw HypothesisViolation(zero_fraction(d, SquareRegion{RPoint(d.spec().n, Rational(0)), scales.front()}));
      }
      emit(g, to_json(lemma_decompose(d, *sq)));
    };
  });

  auto* an_ext = analyze->add_subcommand("extremality", "Singularity test on a mixed measure");
  an_ext->add_option("--measure", measure_path, "mixed_measure, grid_density or segment_measure JSON")->required();
  an_ext->callback([&] {
    action = [&] {
      CopulaModel c = model_from_json(load_json(measure_path));
      std::optional<MixedMeasure> mm;
      std::visit(
          [&](const auto& rep) {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, MixedMeasure>) {
              mm = rep;
            } else if constexpr (std::is_same_v<T, GridDensity>) {
              mm = MixedMeasure(1, rep, std::nullopt);
            } else if constexpr (std::is_same_v<T, SegmentMeasure>) {
              mm = MixedMeasure(0, std::nullopt, rep);
            } else if constexpr (std::is_same_v<T, GraphMeasure>) {
              mm = MixedMeasure(0, std::nullopt, rep.map.to_segment_measure());
            }
          },
          c.representation());
      if (!mm) throw DomainError("extremality analysis needs a density, segment or mixed measure");
      emit(g, to_json(singularity_diagnostic(*mm)));
    };
  });

  std::size_t cover_r = 8;
  auto* an_cover = analyze->add_subcommand("cover", "Covered-support certificate for a segment measure");
  an_cover->add_option("--measure", measure_path, "Segment measure JSON")->required();
  an_cover->add_option("--r", cover_r, "Interval resolution")->capture_default_str();
  an_cover->callback([&] { action = [&] { emit(g, to_json(functional_cover_check(load_segments(measure_path), cover_r))); }; });

  // optimize
  std::vector<std::string> marginal_specs;
  std::string g_expr, g_builtin, sense_str = "max", witness_out;
  std::size_t k = 16, Q = 32, restarts = 20;
  auto* opt = app.add_subcommand("optimize", "Best permutation copula of order k for E g(X)");
  opt->add_option("--marginals", marginal_specs, "uniform:a,b | exp:rate | normal:mu,sigma | table:file.csv")
      ->required()
      ->expected(2, 16);
  auto* g_opt = opt->add_option("--g", g_expr, "Objective expression over x1..xn");
  auto* gb_opt = opt->add_option("--g-builtin", g_builtin, "product | abs_diff | match_eps:EPS");
  g_opt->excludes(gb_opt);
  opt->add_option("--k", k, "Order of the permutation copula")->capture_default_str();
  opt->add_option("--sense", sense_str, "max or min")->check(CLI::IsMember({"max", "min"}))->capture_default_str();
  opt->add_option("--Q", Q, "Quadrature points per diagonal")->capture_default_str();
  opt->add_option("--restarts", restarts, "Local-search restarts (n >= 3)")->capture_default_str();
  opt->add_option("--witness", witness_out, "Write the witnessing permutation copula JSON here");
  opt->callback([&] {
    if (g_expr.empty() == g_builtin.empty()) throw CLI::ValidationError("--g", "give exactly one of --g or --g-builtin");
    action = [&] {
      std::vector<MarginalDistribution> ms;
      for (const auto& s : marginal_specs) ms.push_back(MarginalDistribution::parse(s));
      Objective obj = g_expr.empty() ? Objective::from_cli(g_builtin) : Objective::parse(g_expr);
      OptimizeOptions o{Q, restarts, g.seed};
      auto res = optimize_m_of_g(ms, obj, k, sense_str == "max" ? Sense::Max : Sense::Min, o);
      if (!witness_out.empty()) save_json(witness_out, to_json(permutation_copula(res.witness())));
      emit(g, to_json(res));
    };
  });

  // match-prob
  std::string fx, fy, schedule;
  std::size_t J = 3, kmax = 64;
  auto* mp = app.add_subcommand("match-prob", "Estimate sup P(X = Y) over couplings");
  mp->add_option("--fx", fx, "Marginal of X")->required();
  mp->add_option("--fy", fy, "Marginal of Y")->required();
  mp->add_option("--schedule", schedule, "Comma-separated eps:k steps");
  mp->add_option("--steps", J, "Default schedule length")->capture_default_str();
  mp->add_option("--kmax", kmax, "Default schedule cap on k")->capture_default_str();
  mp->add_option("--Q", Q, "Quadrature points per diagonal")->capture_default_str();
  mp->callback([&] {
    action = [&] {
      std::vector<ScheduleStep> steps;
      if (schedule.empty()) {
        steps = default_schedule(J, kmax);
      } else {
        for (const auto& s : split(schedule, ',')) {
          auto colon = s.find(':');
          if (colon == std::string::npos) throw DomainError("schedule steps look like eps:k");
          steps.push_back({to_double(parse_rational(s.substr(0, colon))), std::stoul(s.substr(colon + 1))});
        }
      }
      emit(g, to_json(match_probability(MarginalDistribution::parse(fx), MarginalDistribution::parse(fy), steps, Q)));
    };
  });

  // plot
  auto* plot = app.add_subcommand("plot", "Segment endpoints and weights as CSV");
  plot->add_option("--measure", measure_path, "Segment measure JSON")->required();
  plot->callback([&] {
    action = [&] {
      std::ostringstream os;
      write_plot_csv(os, load_segments(measure_path));
      emit_text(g, os.str());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: value out of range: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace xcop
