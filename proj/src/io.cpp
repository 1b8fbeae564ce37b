#include "xcop/io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace xcop {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t size_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw DomainError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void expect_kind(const Json& j, const char* kind) {
  check_version(j);
  if (j.contains("kind") && j.at("kind") != kind) {
    throw DomainError(std::string("expected a ") + kind + " document, got " + j.at("kind").dump());
  }
}

Json point_json(const RPoint& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(rational_json(x));
  return a;
}

RPoint point_from_json(const Json& j, bool& float_seen) {
  if (!j.is_array()) throw DomainError("point must be an array");
  RPoint p;
  for (const auto& x : j) {
    bool f = false;
    p.push_back(rational_from_json(x, &f));
    float_seen = float_seen || f;
  }
  return p;
}

Json interval_json(const Interval& i) { return Json::array({rational_json(i.lo), rational_json(i.hi)}); }

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Json rational_json(const Rational& x) { return to_string(x); }

Rational rational_from_json(const Json& j, bool* was_float) {
  if (was_float) *was_float = false;
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    if (was_float) *was_float = true;
    return from_double(j.get<double>());
  }
  throw DomainError("expected a number or a \"p/q\" string, got " + j.dump());
}

Json document(const char* kind, Json body) {
  Json out;
  out["version"] = kFormatVersion;
  out["kind"] = kind;
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  return out;
}

void check_version(const Json& j) {
  if (!j.is_object()) throw DomainError("expected a JSON object");
  if (!j.contains("version")) return;
  const Json& v = j.at("version");
  if (!v.is_string()) throw DomainError("version must be a string");
  const std::string s = v.get<std::string>();
  const std::string major = s.substr(0, s.find('.'));
  const std::string ours(kFormatVersion);
  if (major != ours.substr(0, ours.find('.'))) throw DomainError("unsupported format version " + s);
}

Json to_json(const SegmentMeasure& sm) {
  Json segs = Json::array();
  for (const auto& s : sm.segments()) {
    segs.push_back({{"a", point_json(s.a)}, {"b", point_json(s.b)}, {"w", rational_json(s.weight)}});
  }
  return document("segment_measure", {{"n", sm.dim()}, {"rational", sm.rational_backed()}, {"segments", segs}});
}

SegmentMeasure segment_measure_from_json(const Json& j) {
  expect_kind(j, "segment_measure");
  const std::size_t n = size_field(j, "n");
  bool float_seen = false;
  std::vector<Segment> segs;
  for (const auto& s : field(j, "segments")) {
    Segment seg{point_from_json(field(s, "a"), float_seen), point_from_json(field(s, "b"), float_seen), 0};
    bool f = false;
    seg.weight = rational_from_json(field(s, "w"), &f);
    float_seen = float_seen || f;
    segs.push_back(std::move(seg));
  }
  bool rational = !float_seen;
  if (j.contains("rational") && j.at("rational").is_boolean()) rational = rational && j.at("rational").get<bool>();
  return SegmentMeasure(n, std::move(segs), rational);
}

Json to_json(const GridDensity& d) {
  Json values = Json::array();
  for (const auto& v : d.values()) values.push_back(rational_json(v));
  return document("grid_density", {{"n", d.spec().n}, {"m", d.spec().m}, {"values", values}});
}

GridDensity grid_density_from_json(const Json& j) {
  expect_kind(j, "grid_density");
  GridSpec spec{size_field(j, "n"), size_field(j, "m")};
  std::vector<Rational> values;
  for (const auto& v : field(j, "values")) values.push_back(rational_from_json(v));
  return GridDensity(spec, std::move(values));
}

Json to_json(const GridMeasure& g) {
  return document("grid_measure",
                  {{"n", g.spec().n}, {"m", g.spec().m}, {"D", g.denominator()}, {"entries", g.entries()}});
}

GridMeasure grid_measure_from_json(const Json& j) {
  expect_kind(j, "grid_measure");
  GridSpec spec{size_field(j, "n"), size_field(j, "m")};
  return GridMeasure(spec, field(j, "D").get<std::int64_t>(), field(j, "entries").get<std::vector<std::int64_t>>());
}

Json to_json(const MixedMeasure& mm) {
  Json body{{"ac_weight", rational_json(mm.ac_weight())}};
  body["density"] = mm.density() ? to_json(*mm.density()) : Json(nullptr);
  body["singular"] = mm.singular() ? to_json(*mm.singular()) : Json(nullptr);
  return document("mixed_measure", std::move(body));
}

MixedMeasure mixed_measure_from_json(const Json& j) {
  expect_kind(j, "mixed_measure");
  std::optional<GridDensity> d;
  std::optional<SegmentMeasure> s;
  if (j.contains("density") && !j.at("density").is_null()) d = grid_density_from_json(j.at("density"));
  if (j.contains("singular") && !j.at("singular").is_null()) s = segment_measure_from_json(j.at("singular"));
  return MixedMeasure(rational_from_json(field(j, "ac_weight")), std::move(d), std::move(s));
}

Json to_json(const PiecewiseLinearMap& f) {
  Json breaks = Json::array();
  for (const auto& b : f.breakpoints()) breaks.push_back(rational_json(b));
  Json pieces = Json::array();
  for (std::size_t p = 0; p < f.piece_count(); ++p) {
    Json row = Json::array();
    for (std::size_t c = 0; c < f.coords(); ++c) {
      row.push_back({{"slope", rational_json(f.piece(p, c).slope)},
                     {"intercept", rational_json(f.piece(p, c).intercept)}});
    }
    pieces.push_back(std::move(row));
  }
  return document("pl_map", {{"n", f.dim()}, {"breakpoints", breaks}, {"pieces", pieces}});
}

PiecewiseLinearMap pl_map_from_json(const Json& j) {
  check_version(j);
  if (j.contains("kind") && j.at("kind") != "pl_map" && j.at("kind") != "graph_copula") {
    throw DomainError("expected a pl_map document");
  }
  bool float_seen = false;
  std::vector<Rational> breaks = point_from_json(field(j, "breakpoints"), float_seen);
  auto affine = [&](const Json& p) {
    bool f1 = false, f2 = false;
    AffinePiece a{rational_from_json(field(p, "slope"), &f1), rational_from_json(field(p, "intercept"), &f2)};
    float_seen = float_seen || f1 || f2;
    return a;
  };
  const Json& rows = field(j, "pieces");
  if (!rows.is_array()) throw DomainError("'pieces' must be an array");
  std::vector<std::vector<AffinePiece>> pieces;
  if (!rows.empty() && rows.front().is_object()) {
    // Flat form: {"coord": k, "slope", "intercept"} with k in 2..n, listed
    // in interval order per coordinate unless "piece" gives the index.
    const std::size_t count = breaks.empty() ? 0 : breaks.size() - 1;
    std::vector<std::map<std::size_t, AffinePiece>> by_coord;
    for (const auto& p : rows) {
      const std::size_t k = size_field(p, "coord");
      if (k < 2) throw DomainError("pl_map coord must be at least 2");
      if (by_coord.size() < k - 1) by_coord.resize(k - 1);
      auto& col = by_coord[k - 2];
      const std::size_t at = p.contains("piece") ? size_field(p, "piece") : col.size();
      if (at >= count || !col.emplace(at, affine(p)).second) {
        throw DomainError("pl_map coord " + std::to_string(k) + " has a misplaced or repeated piece");
      }
    }
    pieces.assign(count, {});
    for (std::size_t c = 0; c < by_coord.size(); ++c) {
      if (by_coord[c].size() != count) {
        throw DomainError("pl_map coord " + std::to_string(c + 2) + " needs one piece per interval");
      }
      for (auto& [at, a] : by_coord[c]) pieces[at].push_back(a);
    }
  } else {
    for (const auto& row : rows) {
      std::vector<AffinePiece> coords;
      for (const auto& p : row) coords.push_back(affine(p));
      pieces.push_back(std::move(coords));
    }
  }
  PiecewiseLinearMap f(std::move(breaks), std::move(pieces), !float_seen);
  if (j.contains("n") && size_field(j, "n") != f.dim()) throw DomainError("pl_map dimension does not match 'n'");
  return f;
}

Json to_json(const PermutationCopulaSpec& spec) {
  Json orient = Json::array();
  for (const auto& o : spec.orientations) orient.push_back(o.str());
  return document("permutation_spec", {{"m", spec.m}, {"perms", spec.perms}, {"orientations", orient}});
}

Json to_json(const CopulaModel& c) {
  return std::visit(
      Overloaded{
          [](const SegmentMeasure& s) { return to_json(s); },
          [](const GridDensity& d) { return to_json(d); },
          [](const MixedMeasure& m) { return to_json(m); },
          [](const GraphMeasure& g) {
            Json j = to_json(g.map);
            j["kind"] = "graph_copula";
            return j;
          },
          [](const Independence& p) { return document("analytic", {{"family", "pi"}, {"n", p.n}}); },
          [](const Comonotone& m) { return document("analytic", {{"family", "m"}, {"n", m.n}}); },
          [](const Countermonotone&) { return document("analytic", {{"family", "w"}, {"n", 2}}); },
          [](const Fgm& f) {
            return document("analytic", {{"family", "fgm"}, {"n", 2}, {"theta", rational_json(f.theta)}});
          },
      },
      c.representation());
}

CopulaModel model_from_json(const Json& j) {
  check_version(j);
  if (!j.contains("kind")) throw DomainError("model document needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "segment_measure") return segment_measure_from_json(j);
  if (kind == "grid_density") return grid_density_from_json(j);
  if (kind == "mixed_measure") return mixed_measure_from_json(j);
  if (kind == "graph_copula" || kind == "pl_map") return graph_copula(pl_map_from_json(j));
  if (kind == "analytic") {
    const std::string family = field(j, "family").get<std::string>();
    const std::size_t n = j.contains("n") ? size_field(j, "n") : 2;
    if (family == "pi") return CopulaModel::independence(n);
    if (family == "m") return CopulaModel::comonotone(n);
    if (family == "w") return CopulaModel::countermonotone();
    if (family == "fgm") return CopulaModel::fgm(rational_from_json(field(j, "theta")));
    throw DomainError("unknown analytic family '" + family + "'");
  }
  throw DomainError("unknown model kind '" + kind + "'");
}

Json to_json(const ValidationReport& r) {
  return document("validation_report", {{"ok", r.ok},
                                        {"max_deviation", r.max_deviation},
                                        {"worst_axis", r.worst_axis + 1},
                                        {"worst_slab", r.worst_slab},
                                        {"exact", r.exact}});
}

Json to_json(const DinfResult& r) {
  return document("dinf_report",
                  {{"estimate", r.estimate}, {"certified_bound", r.certified_bound}, {"argmax", r.argmax}});
}

Json to_json(const ApproximationReport& r) {
  return document("approximation_report", {{"lattice_dinf", r.lattice_dinf},
                                           {"bound", r.certified_bound},
                                           {"q", r.q},
                                           {"D", r.denominator},
                                           {"rho", r.rho},
                                           {"segments", r.measure.size()}});
}

Json to_json(const DecompositionWitness& w) {
  Json g = Json::array();
  for (const auto& v : w.g) g.push_back(rational_json(v));
  return document("decomposition_witness",
                  {{"square", {{"corner", point_json(w.square.corner)}, {"edge", rational_json(w.square.edge)}}},
                   {"zero_fraction", rational_json(w.zero_fraction)},
                   {"g_shape", w.g_shape},
                   {"g", g},
                   {"h1", to_json(w.h1)},
                   {"h2", to_json(w.h2)}});
}

Json to_json(const SingularityDiagnostic& d) {
  const char* verdict = d.verdict == Verdict::NotExtreme                 ? "NOT_EXTREME"
                        : d.verdict == Verdict::NecessaryConditionPassed ? "NECESSARY_CONDITION_PASSED"
                                                                         : "INCONCLUSIVE";
  Json body{{"verdict", verdict}};
  if (d.witness) body["witness"] = to_json(*d.witness);
  return document("extremality_verdict", std::move(body));
}

Json to_json(const FunctionalCoverCertificate& c) {
  Json slabs = Json::array();
  for (const auto& axis : c.slabs) {
    Json a = Json::array();
    for (const auto& i : axis) a.push_back(interval_json(i));
    slabs.push_back(std::move(a));
  }
  return document("cover_certificate", {{"r", c.resolution}, {"covered", c.covered}, {"B", slabs}});
}

Json to_json(const MeasurePreservingReport& r) {
  Json body{{"ok", r.ok}, {"coord_ok", r.coord_ok}, {"max_deviation", r.max_deviation}};
  if (!r.ok) {
    body["witness"] = {{"coord", r.witness_coord + 2},
                       {"B", interval_json(r.witness)},
                       {"preimage_length", rational_json(r.witness_preimage)}};
  }
  return document("measure_preserving_report", std::move(body));
}

Json to_json(const OptimizationResult& r) {
  Json orient = Json::array();
  for (const auto& o : r.orientations) orient.push_back(o.str());
  Json body{{"value", r.value},
            {"total", r.total},
            {"k", r.k},
            {"sense", r.sense == Sense::Max ? "max" : "min"},
            {"solver", r.solver == Solver::Exact ? "exact" : "local"},
            {"perms", r.perms},
            {"orientations", orient}};
  if (r.certificate) {
    body["certificate"] = {{"primal", r.certificate->primal}, {"dual", r.certificate->dual}, {"gap", r.certificate->gap}};
  }
  return document("optimization_result", std::move(body));
}

Json to_json(const MatchProbability& r) {
  Json trace = Json::array();
  for (const auto& s : r.trace) trace.push_back({{"eps", s.eps}, {"k", s.k}, {"value", s.value}});
  return document("match_probability", {{"estimate", r.estimate}, {"trace", trace}});
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_plot_csv(std::ostream& out, const SegmentMeasure& sm) {
  const std::size_t n = sm.dim();
  if (n != 2 && n != 3) throw DomainError("plot data is only emitted for n = 2 or 3");
  for (std::size_t k = 1; k <= n; ++k) out << 'a' << k << ',';
  for (std::size_t k = 1; k <= n; ++k) out << 'b' << k << ',';
  out << "w\n";
  for (std::size_t i = 0; i < sm.size(); ++i) {
    for (double x : sm.start(i)) out << fmt17(x) << ',';
    for (double x : sm.end(i)) out << fmt17(x) << ',';
    out << fmt17(sm.weight(i)) << '\n';
  }
}

void write_plot_csv(const std::string& path, const SegmentMeasure& sm) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  write_plot_csv(out, sm);
}

SegmentMeasure read_plot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError(path + ": empty file");
  std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns != 5 && columns != 7) throw DomainError(path + ": expected columns a1..an,b1..bn,w");
  const std::size_t n = (columns - 1) / 2;
  std::vector<Segment> segs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Rational> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(from_double(std::stod(cell)));
      } catch (const std::invalid_argument&) {
        throw DomainError(path + ": bad number '" + cell + "'");
      }
    }
    if (v.size() != columns) throw DomainError(path + ": wrong number of columns");
    segs.push_back({RPoint(v.begin(), v.begin() + n), RPoint(v.begin() + n, v.begin() + 2 * n), v.back()});
  }
  return SegmentMeasure(n, std::move(segs), false);
}

void write_samples_csv(std::ostream& out, const std::vector<Point>& points) {
  for (const auto& p : points) {
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << fmt17(p[k]);
    out << '\n';
  }
}

}  // namespace xcop
