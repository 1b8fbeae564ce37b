#pragma once

#include "xcop/approximation.hpp"
#include "xcop/constructions.hpp"
#include "xcop/copula_model.hpp"
#include "xcop/extremality.hpp"
#include "xcop/frechet.hpp"
#include "xcop/measure_ops.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace xcop {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1.0";

/// Rationals are written as "p/q" strings. Readers also accept JSON numbers,
/// converted exactly; a measure read that way is not rational-backed.
Json rational_json(const Rational& x);
Rational rational_from_json(const Json& j, bool* was_float = nullptr);

Json to_json(const SegmentMeasure& sm);
Json to_json(const GridDensity& d);
Json to_json(const GridMeasure& g);
Json to_json(const MixedMeasure& mm);
Json to_json(const PiecewiseLinearMap& f);
Json to_json(const PermutationCopulaSpec& spec);
Json to_json(const CopulaModel& c);

SegmentMeasure segment_measure_from_json(const Json& j);
GridDensity grid_density_from_json(const Json& j);
GridMeasure grid_measure_from_json(const Json& j);
MixedMeasure mixed_measure_from_json(const Json& j);
PiecewiseLinearMap pl_map_from_json(const Json& j);
/// Dispatches on "kind": segment_measure, grid_density, mixed_measure,
/// graph_copula, analytic.
CopulaModel model_from_json(const Json& j);

Json to_json(const ValidationReport& r);
Json to_json(const DinfResult& r);
Json to_json(const ApproximationReport& r);
Json to_json(const DecompositionWitness& w);
Json to_json(const SingularityDiagnostic& d);
Json to_json(const FunctionalCoverCertificate& c);
Json to_json(const MeasurePreservingReport& r);
Json to_json(const OptimizationResult& r);
Json to_json(const MatchProbability& r);

/// Stamps "version" and "kind" on an object.
Json document(const char* kind, Json body);
/// Rejects documents whose major version differs from ours.
void check_version(const Json& j);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

/// Columns a1..an, b1..bn, w with 17 significant digits. n must be 2 or 3.
void write_plot_csv(std::ostream& out, const SegmentMeasure& sm);
void write_plot_csv(const std::string& path, const SegmentMeasure& sm);
SegmentMeasure read_plot_csv(const std::string& path);

void write_samples_csv(std::ostream& out, const std::vector<Point>& points);

}  // namespace xcop
