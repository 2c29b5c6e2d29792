#include "affgrass/serialize.hpp"

#include <cmath>

#include "affgrass/errors.hpp"

namespace affgrass::io {

using namespace exact;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

json window_json(const dim::Window& w) { return json::array({w.r_min, w.r_max}); }

dim::Window window_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("window must be [r_min, r_max]");
  try {
    return {j[0].get<int>(), j[1].get<int>()};
  } catch (const json::exception& e) {
    throw ParseError(std::string("window: ") + e.what());
  }
}

std::string kind_name(exp::SubsetSpec::Kind k) {
  switch (k) {
    case exp::SubsetSpec::Kind::full: return "full";
    case exp::SubsetSpec::Kind::intervals: return "intervals";
    case exp::SubsetSpec::Kind::sparse: return "sparse";
    case exp::SubsetSpec::Kind::cantor: return "cantor";
  }
  return "";
}

exp::SubsetSpec::Kind parse_kind(const std::string& s) {
  if (s == "full") return exp::SubsetSpec::Kind::full;
  if (s == "intervals") return exp::SubsetSpec::Kind::intervals;
  if (s == "sparse") return exp::SubsetSpec::Kind::sparse;
  if (s == "cantor") return exp::SubsetSpec::Kind::cantor;
  throw ParseError("unknown subset kind '" + s + "'");
}

}  // namespace

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) throw ParseError("non-finite number");
    return Rational(d);
  }
  throw ParseError("expected a rational, got " + j.dump());
}

json to_json(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

RatVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  RatVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

json to_json(const RatMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(i, c)));
    out.push_back(std::move(row));
  }
  return out;
}

RatMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of rows");
  std::vector<RatVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  const std::size_t cols = rows.front().size();
  if (cols == 0) throw ParseError("matrix rows must be nonempty");
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rows[i][c];
  }
  return m;
}

std::vector<RatVector> points_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of points");
  std::vector<RatVector> out;
  for (const auto& p : j) out.push_back(vector_from_json(p));
  return out;
}

json to_json(const DyadicInterval& d) {
  return {{"lo", d.lo.to_string()}, {"hi", d.hi.to_string()}, {"precision", d.precision}};
}

DyadicInterval interval_from_json(const json& j) {
  DyadicInterval d{Dyadic::parse(get<std::string>(j, "lo")), Dyadic::parse(get<std::string>(j, "hi")),
                   get<int>(j, "precision")};
  if (d.hi < d.lo) throw ParseError("interval with hi < lo");
  return d;
}

json to_json(const grass::GrassPoint& g) { return {{"n", g.n}, {"k", g.k}, {"proj", to_json(g.proj)}}; }

grass::GrassPoint grass_point_from_json(const json& j) {
  if (j.is_object() && j.contains("basis") && !j.contains("proj")) {
    return grass::span_to_projection(points_from_json(j["basis"]));
  }
  RatMatrix proj = matrix_from_json(field(j, "proj"));
  if (proj.rows() != proj.cols()) throw DimensionMismatch("projection must be square");
  Rational tr = 0;
  for (std::size_t i = 0; i < proj.rows(); ++i) tr += proj(i, i);
  if (tr.get_den() != 1 || tr < 0) throw PreconditionViolation("projection trace must be a nonnegative integer");
  const auto k = static_cast<std::size_t>(tr.get_num().get_ui());
  if (j.contains("k") && get<std::size_t>(j, "k") != k) throw PreconditionViolation("k disagrees with the trace");
  if (j.contains("n") && get<std::size_t>(j, "n") != proj.rows()) throw DimensionMismatch("n disagrees with proj");
  return grass::GrassPoint::from_projection(std::move(proj), k);
}

json to_json(const grass::MetricSample& s) {
  return {{"value", to_json(s.value)}, {"method", std::string(grass::to_string(s.method))},
          {"precision", s.precision}};
}

grass::MetricSample metric_sample_from_json(const json& j) {
  return {interval_from_json(field(j, "value")), grass::parse_metric_method(get<std::string>(j, "method")),
          get<int>(j, "precision")};
}

json to_json(const affine::AffinePlane& p) {
  json basis = json::array();
  for (const auto& b : p.basis.vectors) basis.push_back(to_json(b));
  return {{"n", p.n()},
          {"k", p.k()},
          {"direction", to_json(p.direction.proj)},
          {"basis", std::move(basis)},
          {"coords", to_json(p.coords)},
          {"translation", to_json(p.translation)}};
}

affine::AffinePlane plane_from_json(const json& j) {
  json dir = field(j, "direction");
  const grass::GrassPoint v =
      dir.is_object() ? grass_point_from_json(dir) : grass_point_from_json(json{{"proj", std::move(dir)}});
  affine::AffinePlane p;
  if (j.contains("coords")) {
    affine::ComplementBasis basis = affine::complement_basis(v);
    RatVector coords = vector_from_json(j["coords"]);
    if (coords.size() != basis.vectors.size()) throw DimensionMismatch("coords must have n - k entries");
    RatVector t = basis.matrix() * coords;
    p = affine::AffinePlane{v, std::move(coords), std::move(basis), std::move(t)};
  } else {
    p = affine::make_affine(v, vector_from_json(field(j, "point")));
  }
  if (j.contains("basis") && points_from_json(j["basis"]) != p.basis.vectors) {
    throw PreconditionViolation("basis disagrees with the canonical complement basis");
  }
  if (j.contains("translation") && vector_from_json(j["translation"]) != p.translation) {
    throw PreconditionViolation("translation disagrees with basis and coords");
  }
  return p;
}

json to_json(const affine::LineParams& p) {
  return {{"slopes", to_json(p.slopes)}, {"intercepts", to_json(p.intercepts)}};
}

affine::LineParams line_params_from_json(const json& j) {
  return {vector_from_json(field(j, "slopes")), vector_from_json(field(j, "intercepts"))};
}

json to_json(const affine::HyperplaneParams& p) { return {{"a", to_json(p.a)}, {"b", to_json(p.b)}}; }

affine::HyperplaneParams hyperplane_params_from_json(const json& j) {
  return {vector_from_json(field(j, "a")), rational_from_json(field(j, "b"))};
}

json to_json(const affine::BoxFit& f) {
  return {{"plane", to_json(f.plane)}, {"error_bound", to_json(f.error_bound)}, {"r", f.r}};
}

json to_json(const affine::IntersectionReport& r) {
  return {{"t", r.t},
          {"r", r.r},
          {"rho_affine", r.rho_affine},
          {"observed_error", r.observed_error},
          {"predicted_scale", r.predicted_scale},
          {"trials", r.trials},
          {"t_source", r.t_source}};
}

json to_json(const nets::Element& e) {
  if (const auto* g = std::get_if<grass::GrassPoint>(&e)) return to_json(*g);
  return to_json(std::get<affine::AffinePlane>(e));
}

json to_json(const nets::Net& net) {
  json elements = json::array();
  for (const auto& e : net.elements) elements.push_back(to_json(e));
  return {{"space", net.space.to_string()},
          {"r", net.r},
          {"separation", to_json(net.separation)},
          {"cover_radius", to_json(ldexp(Rational(1), -net.r))},
          {"depth", net.depth},
          {"candidates_examined", net.candidates_examined},
          {"audit",
           {{"probes", net.audit.probes},
            {"covered", net.audit.covered},
            {"max_rep_distance", net.audit.max_rep_distance},
            {"seed", net.audit.seed},
            {"kind", net.audit.kind}}},
          {"elements", std::move(elements)}};
}

nets::Net net_from_json(const json& j) {
  nets::Net net;
  const auto space = get<std::string>(j, "space");
  std::size_t n = 0;
  std::size_t k = 0;
  char kind = 0;
  if (std::sscanf(space.c_str(), "%c(%zu,%zu)", &kind, &n, &k) != 3 || (kind != 'G' && kind != 'A')) {
    throw ParseError("space must look like G(n,k) or A(n,k)");
  }
  net.space = nets::Space{kind == 'G' ? nets::SpaceKind::grassmann : nets::SpaceKind::affine, n, k};
  net.r = get<int>(j, "r");
  net.separation = rational_from_json(field(j, "separation"));
  if (net.separation != ldexp(Rational(1), -(net.r + 1))) throw PreconditionViolation("separation must be 2^-(r+1)");
  net.depth = get_or<int>(j, "depth", 0);
  net.candidates_examined = get_or<std::size_t>(j, "candidates_examined", 0);
  const json& audit = field(j, "audit");
  net.audit.probes = get<std::size_t>(audit, "probes");
  net.audit.covered = get<std::size_t>(audit, "covered");
  net.audit.max_rep_distance = get<double>(audit, "max_rep_distance");
  net.audit.seed = get_or<std::uint64_t>(audit, "seed", 0);
  net.audit.kind = get_or<std::string>(audit, "kind", "statistical");
  for (const auto& e : field(j, "elements")) {
    nets::Element el = kind == 'G' ? nets::Element(grass_point_from_json(e)) : nets::Element(plane_from_json(e));
    net.approx.push_back(nets::to_float(el));
    net.elements.push_back(std::move(el));
  }
  return net;
}

json to_json(const nets::BallCount& b) {
  return {{"center", to_json(b.center)}, {"l", b.l}, {"count", b.count}, {"ambiguous", b.ambiguous}};
}

json to_json(const dim::CountProfile& p) { return {{"scales", p.scales}, {"counts", p.counts}}; }

dim::CountProfile profile_from_json(const json& j) {
  dim::CountProfile p{get<std::vector<int>>(j, "scales"), get<std::vector<std::uint64_t>>(j, "counts")};
  if (p.scales.size() != p.counts.size()) throw ParseError("scales and counts differ in length");
  return p;
}

json to_json(const dim::DimEstimate& e) {
  return {{"slope", e.slope}, {"stderr", e.std_error}, {"window", window_json(e.window)},
          {"residual_max", e.residual_max}};
}

dim::DimEstimate estimate_from_json(const json& j) {
  return {get<double>(j, "slope"), get<double>(j, "stderr"), window_from_json(field(j, "window")),
          get<double>(j, "residual_max")};
}

json to_json(const exp::CantorSpec& c) { return {{"base", c.base}, {"digits", c.digits}, {"depth", c.depth}}; }

exp::CantorSpec cantor_from_json(const json& j) {
  exp::CantorSpec c{get<int>(j, "base"), get<std::vector<int>>(j, "digits"), get<int>(j, "depth")};
  exp::validate(c);
  return c;
}

json to_json(const exp::SubsetSpec& s) {
  json out{{"kind", kind_name(s.kind)}};
  switch (s.kind) {
    case exp::SubsetSpec::Kind::full:
    case exp::SubsetSpec::Kind::sparse:
      out["bits"] = s.bits;
      break;
    case exp::SubsetSpec::Kind::intervals: {
      out["bits"] = s.bits;
      json ivs = json::array();
      for (const auto& [lo, hi] : s.intervals) ivs.push_back(json::array({to_json(lo), to_json(hi)}));
      out["intervals"] = std::move(ivs);
      break;
    }
    case exp::SubsetSpec::Kind::cantor:
      out["cantor"] = to_json(s.cantor);
      break;
  }
  return out;
}

exp::SubsetSpec subset_from_json(const json& j) {
  exp::SubsetSpec s;
  s.kind = parse_kind(get<std::string>(j, "kind"));
  s.bits = get_or<int>(j, "bits", s.bits);
  if (j.contains("intervals")) {
    s.intervals.clear();
    for (const auto& iv : j["intervals"]) {
      if (!iv.is_array() || iv.size() != 2) throw ParseError("intervals are [lo, hi] pairs");
      s.intervals.emplace_back(rational_from_json(iv[0]), rational_from_json(iv[1]));
    }
  }
  if (s.kind == exp::SubsetSpec::Kind::cantor) s.cantor = cantor_from_json(field(j, "cantor"));
  return s;
}

json to_json(const exp::FamilySpec& f) {
  json params = json::array();
  for (const auto& c : f.params) params.push_back(to_json(c));
  return {{"n", f.n},
          {"k", f.k},
          {"params", std::move(params)},
          {"subset", to_json(f.subset)},
          {"subset_type", f.subset_type == exp::SubsetType::packing ? "packing" : "hausdorff"}};
}

exp::FamilySpec family_from_json(const json& j) {
  exp::FamilySpec f;
  f.n = get<std::size_t>(j, "n");
  f.k = get<std::size_t>(j, "k");
  for (const auto& c : field(j, "params")) f.params.push_back(cantor_from_json(c));
  if (j.contains("subset")) f.subset = subset_from_json(j["subset"]);
  const auto type = get_or<std::string>(j, "subset_type", "hausdorff");
  if (type != "hausdorff" && type != "packing") throw ParseError("subset_type must be hausdorff or packing");
  f.subset_type = type == "packing" ? exp::SubsetType::packing : exp::SubsetType::hausdorff;
  exp::validate(f);
  return f;
}

json to_json(const exp::ExperimentSpec& s) {
  json out{{"id", s.id},
           {"kind", exp::to_string(s.kind)},
           {"window", window_json(s.window)},
           {"seed", s.seed},
           {"tolerance", s.tolerance},
           {"samples", s.samples}};
  switch (s.kind) {
    case exp::ExperimentKind::cantor_calibration:
      out["cantor"] = to_json(s.cantor);
      break;
    case exp::ExperimentKind::grid_calibration:
      out["grid"] = {{"dim", s.grid_dim}, {"bits", s.grid_bits}};
      break;
    case exp::ExperimentKind::extension:
      out["mode"] = exp::to_string(s.mode);
      out["extension_subset"] = to_json(s.extension_subset);
      [[fallthrough]];
    case exp::ExperimentKind::union_bound:
      out["family"] = to_json(s.family);
      out["param_window"] = window_json(s.param_window);
      break;
  }
  return out;
}

exp::ExperimentSpec experiment_from_json(const json& j, const exp::ExperimentSpec& defaults) {
  exp::ExperimentSpec s = defaults;
  s.id = get<std::string>(j, "id");
  s.kind = exp::parse_experiment_kind(get<std::string>(j, "kind"));
  if (j.contains("window")) s.window = window_from_json(j["window"]);
  if (j.contains("param_window")) s.param_window = window_from_json(j["param_window"]);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  s.tolerance = get_or<double>(j, "tolerance", s.tolerance);
  s.samples = get_or<std::size_t>(j, "samples", s.samples);
  if (s.tolerance < 0) throw PreconditionViolation("tolerance must be >= 0");
  switch (s.kind) {
    case exp::ExperimentKind::cantor_calibration:
      if (j.contains("cantor")) s.cantor = cantor_from_json(j["cantor"]);
      break;
    case exp::ExperimentKind::grid_calibration:
      if (j.contains("grid")) {
        const json& g = j["grid"];
        s.grid_dim = get_or<std::size_t>(g, "dim", s.grid_dim);
        s.grid_bits = get_or<int>(g, "bits", s.grid_bits);
      }
      break;
    case exp::ExperimentKind::extension:
      if (j.contains("mode")) s.mode = exp::parse_extension_mode(get<std::string>(j, "mode"));
      if (j.contains("extension_subset")) s.extension_subset = subset_from_json(j["extension_subset"]);
      [[fallthrough]];
    case exp::ExperimentKind::union_bound:
      if (j.contains("family")) s.family = family_from_json(j["family"]);
      break;
  }
  return s;
}

json to_json(const exp::BoundReport& r) {
  json out{{"id", r.id},
           {"check", r.check},
           {"relation", exp::to_string(r.relation)},
           {"measured", to_json(r.measured)},
           {"bound_value", r.bound_value},
           {"tolerance", r.tolerance},
           {"satisfied", r.satisfied},
           {"margin", r.margin},
           {"profile", to_json(r.profile)},
           {"note", r.note}};
  if (r.t_measured) out["t_measured"] = *r.t_measured;
  if (r.s_value) out["s"] = *r.s_value;
  if (r.reference) out["reference"] = to_json(*r.reference);
  return out;
}

SuiteConfig suite_from_json(const json& j) {
  SuiteConfig c;
  c.schema = get<int>(j, "schema");
  if (c.schema != 1) throw ParseError("unsupported config schema " + std::to_string(c.schema));
  exp::ExperimentSpec defaults;
  defaults.seed = get_or<std::uint64_t>(j, "seed", defaults.seed);
  defaults.tolerance = get_or<double>(j, "tolerance", defaults.tolerance);
  for (const auto& e : field(j, "experiments")) c.experiments.push_back(experiment_from_json(e, defaults));
  return c;
}

json to_json(const SuiteConfig& c) {
  json exps = json::array();
  for (const auto& e : c.experiments) exps.push_back(to_json(e));
  return {{"schema", c.schema}, {"experiments", std::move(exps)}};
}

}  // namespace affgrass::io
