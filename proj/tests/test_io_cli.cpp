#include "generators.hpp"

#include "xcop/cli.hpp"
#include "xcop/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace xcop;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path dir = fs::current_path() / "io_cli_scratch";
  fs::create_directories(dir);
  return dir / name;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xcop");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

template <class T>
T round_trip(const T& x, T (*reader)(const Json&)) {
  const auto path = scratch("rt.json").string();
  save_json(path, to_json(x));
  return reader(load_json(path));
}

}  // namespace

TEST_CASE("rationals in JSON") {
  CHECK(rational_json(Rational(3, 7)) == "3/7");
  CHECK(rational_json(Rational(-2)) == "-2");
  bool was_float = true;
  CHECK(rational_from_json(Json("5/10"), &was_float) == Rational(1, 2));
  CHECK_FALSE(was_float);
  CHECK(rational_from_json(Json(0.25), &was_float) == Rational(1, 4));
  CHECK(was_float);
  CHECK(rational_from_json(Json(3)) == Rational(3));
  CHECK_THROWS_AS(rational_from_json(Json("1/0")), DomainError);
  CHECK_THROWS(rational_from_json(Json::array()));
}

TEST_CASE("property: JSON round trips are exact") {
  gen::Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = gen::between(rng, 2, 4), m = gen::between(rng, 1, 6);
    auto spec = gen::permutation_spec(rng, n, m);
    auto sm = permutation_copula(spec);
    CHECK(round_trip(sm, segment_measure_from_json) == sm);

    auto gm = gen::grid_measure(rng, n, m, 3);
    CHECK(round_trip(gm, grid_measure_from_json) == gm);

    auto gd = GridDensity::from_grid_measure(gm);
    CHECK(round_trip(gd, grid_density_from_json) == gd);

    auto br = gen::breaks(rng, static_cast<std::size_t>(gen::between(rng, 1, 4)));
    auto sh = shuffle_copula(2, br);
    CHECK(round_trip(sh, segment_measure_from_json) == sh);
  }

  CHECK(round_trip(tent_copula(Rational(1, 3)), segment_measure_from_json) == tent_copula(Rational(1, 3)));
  CHECK(round_trip(four_line_3d(), segment_measure_from_json) == four_line_3d());

  PiecewiseLinearMap doubling({0, Rational(1, 2), 1}, {{{2, 0}}, {{2, -1}}});
  CHECK(round_trip(doubling, pl_map_from_json) == doubling);

  MixedMeasure mm(Rational(1, 3), GridDensity::uniform(2), tent_copula(Rational(1, 2)));
  auto back = round_trip(mm, mixed_measure_from_json);
  CHECK(back.ac_weight() == Rational(1, 3));
  CHECK(*back.density() == *mm.density());
  CHECK(*back.singular() == *mm.singular());

  auto fgm = model_from_json(to_json(CopulaModel::fgm(Rational(1, 2))));
  std::vector<double> u{0.5, 0.5};
  CHECK(fgm.cdf(u) == doctest::Approx(0.25 * (1 + 0.5 * 0.25)));
  auto graph = model_from_json(to_json(graph_copula(doubling)));
  std::vector<double> q{0.75, 0.5};
  CHECK(graph.cdf(q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("flat map format") {
  Json flat = Json::parse(R"({"breakpoints": ["0", "1/2", "1"], "pieces": [
      {"coord": 2, "slope": "2", "intercept": "0"}, {"coord": 2, "slope": "2", "intercept": "-1"},
      {"coord": 3, "piece": 1, "slope": "-1", "intercept": "1"}, {"coord": 3, "piece": 0, "slope": "1", "intercept": "0"}]})");
  PiecewiseLinearMap expect({0, Rational(1, 2), 1}, {{{2, 0}, {1, 0}}, {{2, -1}, {-1, 1}}});
  auto f = pl_map_from_json(flat);
  CHECK(f == expect);
  CHECK(f.rational_backed());

  Json floats = Json::parse(R"({"breakpoints": [0, 0.5, 1], "pieces": [
      {"coord": 2, "slope": 2, "intercept": 0}, {"coord": 2, "slope": 2, "intercept": -1}]})");
  auto g = pl_map_from_json(floats);
  CHECK(g.dim() == 2);
  CHECK_FALSE(g.rational_backed());

  Json missing = Json::parse(R"({"breakpoints": [0, 0.5, 1], "pieces": [{"coord": 2, "slope": 1, "intercept": 0}]})");
  CHECK_THROWS_AS(pl_map_from_json(missing), DomainError);
  Json low = Json::parse(R"({"breakpoints": [0, 1], "pieces": [{"coord": 1, "slope": 1, "intercept": 0}]})");
  CHECK_THROWS_AS(pl_map_from_json(low), DomainError);
}

TEST_CASE("float-valued measures load but are not rational-backed") {
  Json j = to_json(tent_copula(Rational(1, 2)));
  j["segments"][0]["w"] = 0.5;
  auto sm = segment_measure_from_json(j);
  CHECK_FALSE(sm.rational_backed());
  CHECK(sm.total_weight() == 1);
}

TEST_CASE("format version") {
  Json j = to_json(tent_copula(Rational(1, 2)));
  CHECK_NOTHROW(check_version(j));
  j["version"] = "1.7";
  CHECK_NOTHROW(segment_measure_from_json(j));
  j["version"] = "2.0";
  CHECK_THROWS_AS(segment_measure_from_json(j), DomainError);
  // Hand-written files may omit the tag.
  j.erase("version");
  CHECK_NOTHROW(segment_measure_from_json(j));
  j["version"] = 1;
  CHECK_THROWS_AS(segment_measure_from_json(j), DomainError);
  CHECK_THROWS_AS(load_json(scratch("missing.json").string() + ".nope"), DomainError);
}

TEST_CASE("plot CSV") {
  std::ostringstream tent;
  write_plot_csv(tent, tent_copula(Rational(1, 2)));
  CHECK(lines(tent.str()) == 3);
  CHECK(tent.str().rfind("a1,a2,b1,b2,w\n", 0) == 0);

  std::ostringstream four;
  write_plot_csv(four, four_line_3d());
  CHECK(lines(four.str()) == 5);
  CHECK(four.str().rfind("a1,a2,a3,b1,b2,b3,w\n", 0) == 0);
  std::istringstream rows(four.str());
  std::string row;
  std::getline(rows, row);
  while (std::getline(rows, row)) CHECK(std::stod(row.substr(row.rfind(',') + 1)) == 0.25);

  auto rep = approximate(CopulaModel::independence(2), 8);
  const auto path = scratch("pi8.csv").string();
  write_plot_csv(path, rep.measure);
  CHECK(lines(slurp(path)) == 65);
  auto back = read_plot_csv(path);
  REQUIRE(back.size() == rep.measure.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(back.start(i)[k] == rep.measure.start(i)[k]);
      CHECK(back.end(i)[k] == rep.measure.end(i)[k]);
    }
    CHECK(back.weight(i) == rep.measure.weight(i));
  }

  std::ostringstream sink;
  SegmentMeasure line4(4, {{RPoint(4, Rational(0)), RPoint(4, Rational(1)), Rational(1)}});
  CHECK_THROWS_AS(write_plot_csv(sink, line4), DomainError);
}

TEST_CASE("cli examples") {
  const auto tent = scratch("tent.json").string();
  const auto report = scratch("report.json").string();
  REQUIRE(cli({"gen", "tent", "--t", "1/2", "--out", tent}) == 0);
  CHECK(segment_measure_from_json(load_json(tent)) == tent_copula(Rational(1, 2)));
  REQUIRE(cli({"validate", "--measure", tent, "--m", "100", "--out", report}) == 0);
  CHECK(load_json(report)["ok"] == true);

  REQUIRE(cli({"dist", "--a", "pi", "--b", "m", "--r", "64", "--out", report}) == 0);
  CHECK(load_json(report)["estimate"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));

  const auto perm = scratch("perm.json").string();
  REQUIRE(cli({"gen", "perm", "--m", "3", "--perm", "2=2,1,0", "--out", perm}) == 0);
  REQUIRE(cli({"validate", "--measure", perm, "--m", "3", "--out", report}) == 0);
  CHECK(load_json(report)["ok"] == true);
  CHECK(load_json(report)["exact"] == true);

  REQUIRE(cli({"approx", "--copula", "pi", "--m", "8", "--measure-out", perm, "--out", report}) == 0);
  auto lib = approximate(CopulaModel::independence(2), 8);
  CHECK(load_json(report)["lattice_dinf"].get<double>() == lib.lattice_dinf);
  CHECK(segment_measure_from_json(load_json(perm)) == lib.measure);

  const auto four = scratch("four.json").string();
  REQUIRE(cli({"gen", "fourline3d", "--out", four}) == 0);
  REQUIRE(cli({"analyze", "cover", "--measure", four, "--r", "8", "--out", report}) == 0);
  CHECK(load_json(report)["covered"] == false);
  REQUIRE(cli({"analyze", "cover", "--measure", tent, "--r", "8", "--out", report}) == 0);
  CHECK(load_json(report)["covered"] == true);

  REQUIRE(cli({"optimize", "--marginals", "uniform:0,1", "uniform:0,1", "--g-builtin", "product", "--k", "2", "--out",
               report}) == 0);
  auto opt = optimize_m_of_g({MarginalDistribution::uniform(0, 1), MarginalDistribution::uniform(0, 1)},
                             Objective::product(), 2, Sense::Max);
  CHECK(load_json(report)["value"].get<double>() == opt.value);

  REQUIRE(cli({"match-prob", "--fx", "uniform:0,1", "--fy", "uniform:0,1", "--schedule", "0.25:16", "--out", report}) ==
          0);
  CHECK(load_json(report)["estimate"].get<double>() == 1.0);

  const auto csv = scratch("tent.csv").string();
  REQUIRE(cli({"plot", "--measure", tent, "--out", csv}) == 0);
  CHECK(lines(slurp(csv)) == 3);

  const auto pts = scratch("pts.csv").string(), pts2 = scratch("pts2.csv").string();
  REQUIRE(cli({"sample", "--measure", tent, "--count", "50", "--seed", "9", "--out", pts}) == 0);
  REQUIRE(cli({"--seed", "9", "sample", "--measure", tent, "--count", "50", "--out", pts2}) == 0);
  CHECK(slurp(pts) == slurp(pts2));
}

TEST_CASE("cli exit codes") {
  const auto report = scratch("report.json").string();
  CHECK(cli({"frobnicate"}) == 2);
  CHECK(cli({"dist", "--a", "pi", "--bogus", "1"}) == 2);
  CHECK(cli({"dist", "--a", "pi"}) == 2);
  CHECK(cli({"optimize", "--marginals", "uniform:0,1", "uniform:0,1", "--g", "x1*", "--k", "2"}) == 2);
  CHECK(cli({"validate", "--measure", scratch("absent.json").string(), "--m", "4"}) == 1);
  CHECK(cli({"gen", "tent", "--t", "3/2", "--out", report}) == 1);
  CHECK(cli({"optimize", "--marginals", "uniform:1,0", "uniform:0,1", "--g-builtin", "product", "--k", "2"}) == 1);
  CHECK(cli({"--help"}) == 0);
}

TEST_CASE("cli config file") {
  const auto cfg = scratch("dist.toml");
  const auto report = scratch("cfg_report.json").string();
  {
    std::ofstream f(cfg);
    f << "[dist]\na = \"pi\"\nb = \"m\"\nr = 8\n";
  }
  REQUIRE(cli({"--config", cfg.string(), "dist", "--out", report}) == 0);
  auto from_file = load_json(report)["estimate"].get<double>();
  CHECK(from_file == dinf_distance(CopulaModel::independence(2), CopulaModel::comonotone(2), 8).estimate);

  // Flags win over the file.
  REQUIRE(cli({"--config", cfg.string(), "dist", "--r", "64", "--out", report}) == 0);
  CHECK(load_json(report)["estimate"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
}
