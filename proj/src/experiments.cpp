#include "affgrass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affgrass/errors.hpp"
#include "affgrass/rng.hpp"

namespace affgrass::exp {

using namespace exact;

namespace {

// Lists larger than this are never materialized.
constexpr std::size_t kMaxEnumeration = std::size_t{1} << 24;

Integer ipow(long base, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

// Triangular numbers 1, 3, 6, 10, ...
bool is_triangular(int p) {
  for (int i = 1, t = 1; t <= p; ++i, t += i) {
    if (t == p) return true;
  }
  return false;
}

std::vector<Rational> all_points(const CantorSpec& spec) {
  if (spec.size() > kMaxEnumeration) throw PreconditionViolation("Cantor enumeration too large");
  return gen_cantor_points(spec, spec.size(), 0);
}

template <class F>
void parallel_for(long count, Exec exec, F&& f) {
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<RatVector> concat(std::vector<std::vector<RatVector>>&& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<RatVector> out;
  out.reserve(total);
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

DimEstimate measure(const dim::CellGrid& grid, Window w, Exec exec, CountProfile* profile) {
  CountProfile p = dim::count_profile(grid, w, exec);
  DimEstimate e = dim::estimate_dim(p, w);
  if (profile) *profile = std::move(p);
  return e;
}

DimEstimate measure(const std::vector<RatVector>& points, Window w, Exec exec, CountProfile* profile) {
  CountProfile p = dim::count_profile(points, w, exec);
  DimEstimate e = dim::estimate_dim(p, w);
  if (profile) *profile = std::move(p);
  return e;
}

bool uses_hyperplane_bound(const FamilySpec& f) {
  return f.n >= 3 && f.k + 1 == f.n && f.subset.kind == SubsetSpec::Kind::full;
}

}  // namespace

double CantorSpec::target_dim() const {
  return std::log(static_cast<double>(digits.size())) / std::log(static_cast<double>(base));
}

std::size_t CantorSpec::size() const {
  std::size_t out = 1;
  for (int i = 0; i < depth; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / digits.size()) return std::numeric_limits<std::size_t>::max();
    out *= digits.size();
  }
  return out;
}

void validate(const CantorSpec& spec) {
  if (spec.base < 2) throw PreconditionViolation("Cantor base must be >= 2");
  if (spec.depth < 0) throw PreconditionViolation("Cantor depth must be >= 0");
  if (spec.digits.empty() || spec.digits.size() > static_cast<std::size_t>(spec.base)) {
    throw PreconditionViolation("Cantor digit set must have 1..base elements");
  }
  std::vector<int> d = spec.digits;
  std::sort(d.begin(), d.end());
  if (std::adjacent_find(d.begin(), d.end()) != d.end() || d.front() < 0 || d.back() >= spec.base) {
    throw PreconditionViolation("Cantor digits must be distinct and in [0, base)");
  }
}

std::vector<Rational> gen_cantor_points(const CantorSpec& spec, std::size_t count, std::uint64_t seed) {
  validate(spec);
  const Integer denom = ipow(spec.base, spec.depth);
  const std::size_t m = spec.digits.size();
  std::vector<Rational> out;
  auto point = [&](auto&& digit_at) {
    Integer num = 0;
    for (int i = 0; i < spec.depth; ++i) num = num * spec.base + spec.digits[digit_at(i)];
    Rational q(num, denom);
    q.canonicalize();
    out.push_back(std::move(q));
  };
  if (count >= spec.size()) {
    const std::size_t total = spec.size();
    if (total > kMaxEnumeration) throw PreconditionViolation("Cantor enumeration too large");
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      // Digit i is the (depth-1-i)-th base-m digit of idx: lexicographic order.
      point([&](int i) {
        std::size_t v = idx;
        for (int j = spec.depth - 1; j > i; --j) v /= m;
        return v % m;
      });
    }
    return out;
  }
  Rng rng(seed);
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> ds(spec.depth);
    for (auto& d : ds) d = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(m) - 1));
    point([&](int i) { return ds[i]; });
  }
  return out;
}

double SubsetSpec::target_dim() const { return kind == Kind::cantor ? cantor.target_dim() : 1.0; }

std::vector<Rational> subset_coordinates(const SubsetSpec& spec) {
  if (spec.kind == SubsetSpec::Kind::cantor) {
    auto pts = all_points(spec.cantor);
    std::sort(pts.begin(), pts.end());
    return pts;
  }
  if (spec.bits < 0 || spec.bits > 20) throw PreconditionViolation("subset grid bits must be in [0, 20]");
  const long top = 1L << spec.bits;
  std::vector<Rational> out;
  switch (spec.kind) {
    case SubsetSpec::Kind::full:
      for (long j = 0; j <= top; ++j) out.push_back(ldexp(Rational(j), -spec.bits));
      break;
    case SubsetSpec::Kind::intervals:
      for (const auto& [lo, hi] : spec.intervals) {
        if (lo < 0 || hi > 1 || lo > hi) throw PreconditionViolation("intervals must lie in [0, 1]");
      }
      for (long j = 0; j <= top; ++j) {
        Rational x = ldexp(Rational(j), -spec.bits);
        const bool inside = std::any_of(spec.intervals.begin(), spec.intervals.end(),
                                        [&](const auto& iv) { return iv.first <= x && x <= iv.second; });
        if (inside) out.push_back(std::move(x));
      }
      if (out.empty()) throw PreconditionViolation("interval subset has no grid points");
      break;
    case SubsetSpec::Kind::sparse: {
      if (spec.bits % 2 != 0) throw PreconditionViolation("sparse subsets need an even number of bits");
      const int digits = spec.bits / 2;
      for (long j = 0; j < top; ++j) {
        bool keep = true;
        for (int p = 1; p <= digits && keep; ++p) {
          const long d = (j >> (2 * (digits - p))) & 3;
          keep = !is_triangular(p) || d <= 1;
        }
        if (keep) out.push_back(ldexp(Rational(j), -spec.bits));
      }
      break;
    }
    case SubsetSpec::Kind::cantor:
      break;
  }
  return out;
}

std::size_t param_count(std::size_t n, std::size_t k) {
  if (k == 1) return 2 * (n - 1);
  if (k + 1 == n) return n;
  throw PreconditionViolation("plane families need k = 1 or k = n - 1");
}

void validate(const FamilySpec& spec) {
  if (spec.n < 2 || spec.k < 1 || spec.k >= spec.n) throw PreconditionViolation("family needs 1 <= k < n");
  if (spec.params.size() != param_count(spec.n, spec.k)) {
    throw PreconditionViolation("family needs " + std::to_string(param_count(spec.n, spec.k)) +
                                " parameter specs");
  }
  for (const auto& c : spec.params) validate(c);
}

std::vector<FamilyMember> gen_plane_family(const FamilySpec& spec, std::size_t count, std::uint64_t seed) {
  validate(spec);
  std::vector<std::vector<Rational>> coords;
  std::size_t total = 1;
  for (const auto& c : spec.params) {
    coords.push_back(all_points(c));
    total = total > kMaxEnumeration / coords.back().size() ? kMaxEnumeration + 1 : total * coords.back().size();
  }
  auto member = [&](const std::vector<std::size_t>& pick) {
    FamilyMember m;
    for (std::size_t i = 0; i < pick.size(); ++i) m.params.push_back(coords[i][pick[i]]);
    const std::size_t half = spec.n - 1;
    if (spec.k == 1) {
      affine::LineParams lp;
      lp.slopes.assign(m.params.begin(), m.params.begin() + static_cast<std::ptrdiff_t>(half));
      lp.intercepts.assign(m.params.begin() + static_cast<std::ptrdiff_t>(half), m.params.end());
      m.plane = affine::line_to_affine(lp);
    } else {
      affine::HyperplaneParams hp;
      hp.a.assign(m.params.begin(), m.params.begin() + static_cast<std::ptrdiff_t>(half));
      hp.b = m.params.back();
      m.plane = affine::hyperplane_to_affine(hp);
    }
    return m;
  };
  std::vector<FamilyMember> out;
  std::vector<std::size_t> pick(coords.size(), 0);
  if (count >= total) {
    for (;;) {
      out.push_back(member(pick));
      std::size_t i = pick.size();
      while (i > 0 && pick[i - 1] + 1 == coords[i - 1].size()) pick[--i] = 0;
      if (i == 0) return out;
      ++pick[i - 1];
    }
  }
  Rng rng(seed);
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < pick.size(); ++i) {
      pick[i] = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(coords[i].size()) - 1));
    }
    out.push_back(member(pick));
  }
  return out;
}

std::vector<RatVector> in_plane_points(const FamilySpec& spec, const FamilyMember& m, const SubsetSpec& subset) {
  const std::vector<Rational> us = subset_coordinates(subset);
  const std::size_t n = spec.n;
  std::vector<RatVector> out;
  if (spec.k == 1) {
    for (const auto& u : us) {
      RatVector x(n);
      x[0] = u;
      for (std::size_t i = 1; i < n; ++i) x[i] = m.params[i - 1] * u + m.params[n - 1 + i - 1];
      out.push_back(std::move(x));
    }
  } else {
    std::vector<std::size_t> pick(n - 1, 0);
    for (;;) {
      RatVector x(n);
      x[n - 1] = m.params.back();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        x[i] = us[pick[i]];
        x[n - 1] += m.params[i] * x[i];
      }
      out.push_back(std::move(x));
      std::size_t i = pick.size();
      while (i > 0 && pick[i - 1] + 1 == us.size()) pick[--i] = 0;
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  for (const auto& x : out) {
    if (!affine::lies_on(m.plane, x)) throw PreconditionViolation("sampled point is off its plane");
  }
  return out;
}

std::vector<RatVector> union_points(const FamilySpec& spec, const std::vector<FamilyMember>& family,
                                    const SubsetSpec& subset, Exec exec) {
  std::vector<std::vector<RatVector>> parts(family.size());
  parallel_for(static_cast<long>(family.size()), exec,
               [&](long i) { parts[i] = in_plane_points(spec, family[i], subset); });
  return concat(std::move(parts));
}

dim::CellGrid union_cells(const FamilySpec& spec, const std::vector<FamilyMember>& family,
                          const SubsetSpec& subset, int max_r, Exec exec) {
  std::vector<std::vector<std::int64_t>> parts(family.size());
  parallel_for(static_cast<long>(family.size()), exec,
               [&](long i) { parts[i] = dim::cell_indices(in_plane_points(spec, family[i], subset), max_r); });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<std::int64_t> cells;
  cells.reserve(total);
  for (auto& p : parts) {
    cells.insert(cells.end(), p.begin(), p.end());
    std::vector<std::int64_t>().swap(p);
  }
  return dim::CellGrid(spec.n, max_r, std::move(cells));
}

double union_bound_general(std::size_t n, std::size_t k, double s, double t) {
  const double cs = std::ceil(s);
  return s + (t - (static_cast<double>(k) - cs) * static_cast<double>(n - k)) / (cs + 1);
}

double union_bound_packing(std::size_t n, std::size_t k, double s, double t) {
  const double cs = std::ceil(s);
  return std::max(s, (t - (static_cast<double>(k) - cs) * static_cast<double>(n - k)) / (cs + 1));
}

double union_bound_hyperplane(std::size_t n, double t) {
  const double nd = static_cast<double>(n);
  return nd - 1 + nd * t / ((nd - 1) * t + nd);
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::lower: return "lower";
    case Relation::upper: return "upper";
    case Relation::equal: return "equal";
  }
  return "";
}

Relation parse_relation(const std::string& s) {
  if (s == "lower") return Relation::lower;
  if (s == "upper") return Relation::upper;
  if (s == "equal") return Relation::equal;
  throw ParseError("unknown relation '" + s + "'");
}

std::string to_string(ExtensionMode m) {
  switch (m) {
    case ExtensionMode::positive_measure: return "positive_measure";
    case ExtensionMode::dim1_lines: return "dim1_lines";
    case ExtensionMode::hyperplane_fulldim: return "hyperplane_fulldim";
  }
  return "";
}

ExtensionMode parse_extension_mode(const std::string& s) {
  if (s == "positive_measure") return ExtensionMode::positive_measure;
  if (s == "dim1_lines") return ExtensionMode::dim1_lines;
  if (s == "hyperplane_fulldim") return ExtensionMode::hyperplane_fulldim;
  throw ParseError("unknown extension mode '" + s + "'");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::cantor_calibration: return "cantor_calibration";
    case ExperimentKind::grid_calibration: return "grid_calibration";
    case ExperimentKind::union_bound: return "union_bound";
    case ExperimentKind::extension: return "extension";
  }
  return "";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "cantor_calibration") return ExperimentKind::cantor_calibration;
  if (s == "grid_calibration") return ExperimentKind::grid_calibration;
  if (s == "union_bound") return ExperimentKind::union_bound;
  if (s == "extension") return ExperimentKind::extension;
  throw ParseError("unknown experiment kind '" + s + "'");
}

void decide(BoundReport& report) {
  const double m = report.measured.slope;
  switch (report.relation) {
    case Relation::lower: report.margin = m - (report.bound_value - report.tolerance); break;
    case Relation::upper: report.margin = report.bound_value + report.tolerance - m; break;
    case Relation::equal: report.margin = report.tolerance - std::abs(m - report.bound_value); break;
  }
  report.satisfied = report.margin >= 0;
}

DimEstimate parameter_dim(const std::vector<FamilyMember>& family, Window w, Exec exec) {
  std::vector<RatVector> params;
  params.reserve(family.size());
  for (const auto& m : family) params.push_back(m.params);
  return measure(params, w, exec, nullptr);
}

BoundReport cantor_calibration(const std::string& id, const CantorSpec& spec, Window w, std::size_t count,
                               std::uint64_t seed, double tolerance, Exec exec) {
  std::vector<RatVector> pts;
  for (auto& x : gen_cantor_points(spec, count, seed)) pts.push_back(RatVector{std::move(x)});
  BoundReport r;
  r.id = id;
  r.check = "cantor_calibration";
  r.relation = Relation::equal;
  r.measured = measure(pts, w, exec, &r.profile);
  r.bound_value = spec.target_dim();
  r.tolerance = tolerance;
  r.note = "target log|digits|/log base";
  decide(r);
  return r;
}

BoundReport grid_calibration(const std::string& id, std::size_t n, int bits, Window w, double tolerance,
                             Exec exec) {
  if (n < 1 || bits < 0 || static_cast<long>(n) * bits > 24) throw PreconditionViolation("grid too large");
  const long side = 1L << bits;
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= side;
  std::vector<RatVector> pts(static_cast<std::size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    RatVector x(n);
    long v = idx;
    for (std::size_t i = n; i-- > 0;) {
      x[i] = ldexp(Rational(v % side), -bits);
      v /= side;
    }
    pts[static_cast<std::size_t>(idx)] = std::move(x);
  }
  BoundReport r;
  r.id = id;
  r.check = "grid_calibration";
  r.relation = Relation::equal;
  r.measured = measure(pts, w, exec, &r.profile);
  r.bound_value = static_cast<double>(n);
  r.tolerance = tolerance;
  r.note = "grid of [0,1)^n";
  decide(r);
  return r;
}

BoundReport union_bound_experiment(const ExperimentSpec& spec, Exec exec) {
  const FamilySpec& f = spec.family;
  const auto family = gen_plane_family(f, spec.samples, spec.seed);
  BoundReport r;
  r.id = spec.id;
  r.relation = Relation::lower;
  r.tolerance = spec.tolerance;
  const double t = parameter_dim(family, spec.param_window, exec).slope;
  const double s = static_cast<double>(f.k) * f.subset.target_dim();
  r.t_measured = t;
  r.s_value = s;
  if (uses_hyperplane_bound(f)) {
    r.check = "union_bound_hyperplane";
    r.bound_value = union_bound_hyperplane(f.n, t);
  } else if (f.subset_type == SubsetType::packing) {
    r.check = "union_bound_packing";
    r.bound_value = union_bound_packing(f.n, f.k, s, t);
  } else {
    r.check = "union_bound_general";
    r.bound_value = union_bound_general(f.n, f.k, s, t);
  }
  r.measured = measure(union_cells(f, family, f.subset, spec.window.r_max, exec), spec.window, exec, &r.profile);
  r.note = "finite-scale box dimension vs a packing-dimension lower bound: consistency, not tightness";
  decide(r);
  return r;
}

BoundReport extension_experiment(const ExperimentSpec& spec, Exec exec) {
  const FamilySpec& f = spec.family;
  if (f.subset.kind != SubsetSpec::Kind::full) throw PreconditionViolation("extension needs full planes for F");
  if (spec.mode == ExtensionMode::dim1_lines && f.k != 1) throw PreconditionViolation("dim1_lines needs k = 1");
  if (spec.mode == ExtensionMode::hyperplane_fulldim && f.k + 1 != f.n) {
    throw PreconditionViolation("hyperplane_fulldim needs k = n - 1");
  }
  const auto family = gen_plane_family(f, spec.samples, spec.seed);
  BoundReport r;
  r.id = spec.id;
  r.check = "extension_" + to_string(spec.mode);
  r.tolerance = spec.tolerance;
  r.t_measured = parameter_dim(family, spec.param_window, exec).slope;
  r.s_value = static_cast<double>(f.k) * spec.extension_subset.target_dim();
  CountProfile e_profile;
  const DimEstimate e = measure(union_cells(f, family, spec.extension_subset, spec.window.r_max, exec), spec.window, exec, &e_profile);
  r.reference = e;
  r.measured = measure(union_cells(f, family, f.subset, spec.window.r_max, exec), spec.window, exec, &r.profile);
  if (spec.mode == ExtensionMode::hyperplane_fulldim) {
    r.relation = Relation::equal;
    r.bound_value = e.slope;
    r.note = "dim F vs dim E";
  } else {
    r.relation = Relation::upper;
    r.bound_value = 2 * e.slope - static_cast<double>(f.k);
    r.note = "dim F vs 2 dim E - k";
  }
  decide(r);
  return r;
}

BoundReport run_experiment(const ExperimentSpec& spec, Exec exec) {
  switch (spec.kind) {
    case ExperimentKind::cantor_calibration:
      return cantor_calibration(spec.id, spec.cantor, spec.window, spec.samples, spec.seed, spec.tolerance, exec);
    case ExperimentKind::grid_calibration:
      return grid_calibration(spec.id, spec.grid_dim, spec.grid_bits, spec.window, spec.tolerance, exec);
    case ExperimentKind::union_bound:
      return union_bound_experiment(spec, exec);
    case ExperimentKind::extension:
      return extension_experiment(spec, exec);
  }
  throw PreconditionViolation("unknown experiment kind");
}

std::vector<BoundReport> run_suite(const std::vector<ExperimentSpec>& specs, Exec exec) {
  std::vector<BoundReport> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(run_experiment(s, exec));
  std::stable_sort(out.begin(), out.end(), [](const BoundReport& a, const BoundReport& b) { return a.id < b.id; });
  return out;
}

std::vector<ExperimentSpec> standard_suite() {
  const CantorSpec half4_4{4, {0, 2}, 4};
  const CantorSpec half4_3{4, {0, 2}, 3};
  const CantorSpec zero4_3{4, {0}, 3};

  FamilySpec lines;
  lines.n = 2;
  lines.k = 1;
  lines.params = {half4_4, half4_4};
  lines.subset.kind = SubsetSpec::Kind::full;
  lines.subset.bits = 11;

  FamilySpec planes;
  planes.n = 3;
  planes.k = 2;
  planes.params = {half4_3, zero4_3, half4_3};
  planes.subset.kind = SubsetSpec::Kind::full;
  planes.subset.bits = 8;

  std::vector<ExperimentSpec> out;
  auto add = [&](ExperimentSpec s) { out.push_back(std::move(s)); };

  ExperimentSpec cantor;
  cantor.id = "cal-cantor";
  cantor.kind = ExperimentKind::cantor_calibration;
  cantor.cantor = CantorSpec{3, {0, 2}, 14};
  cantor.window = {4, 15};
  cantor.tolerance = 0.05;
  add(cantor);

  ExperimentSpec square;
  square.id = "cal-square";
  square.kind = ExperimentKind::grid_calibration;
  square.grid_dim = 2;
  square.grid_bits = 8;
  square.window = {2, 6};
  square.tolerance = 0.05;
  add(square);

  // Parameter windows span whole base-4 digit periods.
  ExperimentSpec line_union;
  line_union.id = "union-lines-full";
  line_union.family = lines;
  line_union.window = {2, 8};
  line_union.param_window = {2, 8};
  add(line_union);

  ExperimentSpec single = line_union;
  single.id = "union-lines-single";
  single.family.params = {CantorSpec{4, {0}, 4}, CantorSpec{4, {0}, 4}};
  add(single);

  ExperimentSpec cantor_sub = line_union;
  cantor_sub.id = "union-lines-cantor-hausdorff";
  cantor_sub.family.subset.kind = SubsetSpec::Kind::cantor;
  cantor_sub.family.subset.cantor = CantorSpec{4, {0, 2}, 5};
  cantor_sub.window = {2, 6};
  add(cantor_sub);

  ExperimentSpec cantor_pack = cantor_sub;
  cantor_pack.id = "union-lines-cantor-packing";
  cantor_pack.family.subset_type = SubsetType::packing;
  add(cantor_pack);

  ExperimentSpec plane_union;
  plane_union.id = "union-planes-full";
  plane_union.family = planes;
  plane_union.window = {2, 6};
  plane_union.param_window = {2, 6};
  add(plane_union);

  ExperimentSpec seg = line_union;
  seg.id = "ext-lines-positive-measure";
  seg.kind = ExperimentKind::extension;
  seg.mode = ExtensionMode::positive_measure;
  seg.extension_subset.kind = SubsetSpec::Kind::intervals;
  seg.extension_subset.bits = 11;
  seg.extension_subset.intervals = {{Rational(0), Rational(1, 2)}};
  add(seg);

  ExperimentSpec sparse = seg;
  sparse.id = "ext-lines-dim1";
  sparse.mode = ExtensionMode::dim1_lines;
  sparse.extension_subset.kind = SubsetSpec::Kind::sparse;
  sparse.extension_subset.bits = 12;
  add(sparse);

  ExperimentSpec fixed = seg;
  fixed.id = "ext-lines-full";
  fixed.mode = ExtensionMode::hyperplane_fulldim;
  fixed.extension_subset = lines.subset;
  add(fixed);

  ExperimentSpec hyper = plane_union;
  hyper.id = "ext-planes-fulldim";
  hyper.kind = ExperimentKind::extension;
  hyper.mode = ExtensionMode::hyperplane_fulldim;
  hyper.extension_subset.kind = SubsetSpec::Kind::intervals;
  hyper.extension_subset.bits = 8;
  hyper.extension_subset.intervals = {{Rational(1, 8), Rational(1)}};
  add(hyper);

  return out;
}

}  // namespace affgrass::exp
