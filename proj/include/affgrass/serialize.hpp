#pragma once

// JSON forms of the library types. Rationals are "num/den" strings, dyadics
// "m*2^-e"; readers also accept JSON integers and (exactly converted) doubles.
// Malformed input throws ParseError; well-formed input violating a type
// invariant throws the type's own error.

#include <json.hpp>

#include "affgrass/affine.hpp"
#include "affgrass/dimest.hpp"
#include "affgrass/experiments.hpp"
#include "affgrass/grassmann.hpp"
#include "affgrass/nets.hpp"

namespace affgrass::io {

using json = nlohmann::json;

json to_json(const exact::Rational& q);
exact::Rational rational_from_json(const json& j);
json to_json(const exact::RatVector& v);
exact::RatVector vector_from_json(const json& j);
/// Row-major nested arrays.
json to_json(const exact::RatMatrix& m);
exact::RatMatrix matrix_from_json(const json& j);
/// Array of points.
std::vector<exact::RatVector> points_from_json(const json& j);

json to_json(const exact::DyadicInterval& d);
exact::DyadicInterval interval_from_json(const json& j);

/// {n, k, proj}
json to_json(const grass::GrassPoint& g);
/// Accepts {proj} (k from the trace) or {basis: [vectors]}.
grass::GrassPoint grass_point_from_json(const json& j);

json to_json(const grass::MetricSample& s);
grass::MetricSample metric_sample_from_json(const json& j);

/// {n, k, direction, basis, coords, translation}
json to_json(const affine::AffinePlane& p);
/// Accepts {direction, coords} or {direction, point}; a given basis or
/// translation must agree with the recomputed one.
affine::AffinePlane plane_from_json(const json& j);

json to_json(const affine::LineParams& p);
affine::LineParams line_params_from_json(const json& j);
json to_json(const affine::HyperplaneParams& p);
affine::HyperplaneParams hyperplane_params_from_json(const json& j);

json to_json(const affine::BoxFit& f);
json to_json(const affine::IntersectionReport& r);

json to_json(const nets::Element& e);
json to_json(const nets::Net& net);
/// Rebuilds the float cache; the audit is taken as recorded.
nets::Net net_from_json(const json& j);
json to_json(const nets::BallCount& b);

json to_json(const dim::CountProfile& p);
dim::CountProfile profile_from_json(const json& j);
json to_json(const dim::DimEstimate& e);
dim::DimEstimate estimate_from_json(const json& j);

json to_json(const exp::CantorSpec& c);
exp::CantorSpec cantor_from_json(const json& j);
json to_json(const exp::SubsetSpec& s);
exp::SubsetSpec subset_from_json(const json& j);
json to_json(const exp::FamilySpec& f);
exp::FamilySpec family_from_json(const json& j);
json to_json(const exp::ExperimentSpec& s);
/// Fields absent from j keep the values of defaults.
exp::ExperimentSpec experiment_from_json(const json& j, const exp::ExperimentSpec& defaults = {});
json to_json(const exp::BoundReport& r);

/// {"schema": 1, "seed"?, "tolerance"?, "experiments": [...]}. Top-level seed
/// and tolerance apply to experiments that do not set their own.
struct SuiteConfig {
  int schema = 1;
  std::vector<exp::ExperimentSpec> experiments;
};
SuiteConfig suite_from_json(const json& j);
json to_json(const SuiteConfig& c);

}  // namespace affgrass::io
