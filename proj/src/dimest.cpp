#include "affgrass/dimest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <climits>
#include <exception>

#include "affgrass/errors.hpp"

namespace affgrass::dim {

using namespace exact;

namespace {

void check_scale(int max_r) {
  if (max_r < 0 || max_r > 60) throw PreconditionViolation("scale exponent out of range");
}

void append_cells(const RatVector& p, int max_r, std::int64_t* out) {
  static const Integer limit = Integer(1) << 62;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Integer c = floor(ldexp(p[j], max_r));
    if (abs(c) >= limit) throw PreconditionViolation("coordinates too large for the finest scale");
    out[j] = c.get_si();
  }
}

}  // namespace

std::vector<std::int64_t> cell_indices(const std::vector<RatVector>& points, int max_r) {
  check_scale(max_r);
  const std::size_t d = points.empty() ? 0 : points.front().size();
  std::vector<std::int64_t> out(points.size() * d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw ShapeMismatch("points of different dimensions");
    append_cells(points[i], max_r, out.data() + i * d);
  }
  return out;
}

CellGrid::CellGrid(const std::vector<RatVector>& points, int max_r, Exec exec)
    : size_(points.size()), max_r_(max_r) {
  if (points.empty()) throw PreconditionViolation("box counting needs a nonempty point set");
  check_scale(max_r);
  dim_ = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim_) throw ShapeMismatch("points of different dimensions");
  }
  cells_.resize(size_ * dim_);
  const long count = static_cast<long>(size_);
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) append_cells(points[i], max_r, cells_.data() + i * dim_);
    return;
  }
  bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
  for (long i = 0; i < count; ++i) {
    try {
      append_cells(points[i], max_r, cells_.data() + i * dim_);
    } catch (const PreconditionViolation&) {
      ok = false;
    }
  }
  if (!ok) throw PreconditionViolation("coordinates too large for the finest scale");
}

CellGrid::CellGrid(std::size_t dim, int max_r, std::vector<std::int64_t> cells)
    : dim_(dim), max_r_(max_r), cells_(std::move(cells)) {
  check_scale(max_r);
  if (dim == 0 || cells_.empty() || cells_.size() % dim != 0) {
    throw PreconditionViolation("cell grid needs a nonempty whole number of points");
  }
  size_ = cells_.size() / dim;
}

std::uint64_t CellGrid::count(int r) const {
  if (r < 0 || r > max_r_) throw PreconditionViolation("scale outside the precomputed range");
  const int shift = max_r_ - r;
  const std::size_t d = dim_;
  // Arithmetic right shift is floor division by 2^shift.
  std::vector<std::int64_t> lo(d, INT64_MAX);
  std::vector<std::int64_t> hi(d, INT64_MIN);
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::int64_t c = cells_[i * d + j] >> shift;
      lo[j] = std::min(lo[j], c);
      hi[j] = std::max(hi[j], c);
    }
  }
  std::vector<int> width(d);
  int total = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto span = static_cast<std::uint64_t>(hi[j] - lo[j]);
    width[j] = span == 0 ? 0 : 64 - __builtin_clzll(span);
    total += width[j];
  }
  if (total <= 64) {
    // Offsets fit in one word: sort packed keys.
    std::vector<std::uint64_t> keys(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      std::uint64_t key = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (width[j] == 0) continue;
        key = (width[j] == 64 ? 0 : key << width[j]) |
              static_cast<std::uint64_t>((cells_[i * d + j] >> shift) - lo[j]);
      }
      keys[i] = key;
    }
    std::sort(keys.begin(), keys.end());
    return static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
  }
  std::vector<std::int64_t> keys(cells_.size());
  std::transform(cells_.begin(), cells_.end(), keys.begin(), [shift](std::int64_t c) { return c >> shift; });
  std::vector<std::size_t> order(size_);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return keys.begin() + static_cast<std::ptrdiff_t>(i * d); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + d, row(b), row(b) + d);
  });
  std::uint64_t distinct = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    if (i == 0 || !std::equal(row(order[i]), row(order[i]) + d, row(order[i - 1]))) ++distinct;
  }
  return distinct;
}

std::uint64_t box_count_points(const std::vector<RatVector>& points, int r) {
  return CellGrid(points, r, Exec::serial).count(r);
}

CountProfile count_profile(const CellGrid& grid, Window w, Exec exec) {
  if (w.r_min > w.r_max) throw PreconditionViolation("empty scale window");
  CountProfile p;
  for (int r = w.r_min; r <= w.r_max; ++r) p.scales.push_back(r);
  p.counts.resize(p.scales.size());
  const long m = static_cast<long>(p.scales.size());
  if (exec == Exec::serial) {
    for (long i = 0; i < m; ++i) p.counts[i] = grid.count(p.scales[i]);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < m; ++i) p.counts[i] = grid.count(p.scales[i]);
  }
  return p;
}

CountProfile count_profile(const std::vector<RatVector>& points, Window w, Exec exec) {
  return count_profile(CellGrid(points, w.r_max, exec), w, exec);
}

std::uint64_t box_count_planes(const std::vector<nets::Element>& planes, const nets::Net& net, Exec exec) {
  std::vector<std::size_t> reps(planes.size());
  const long m = static_cast<long>(planes.size());
  auto one = [&](long i) {
    reps[i] = static_cast<std::size_t>(&nets::canonical_rep(net, planes[i]) - net.elements.data());
  };
  if (exec == Exec::serial) {
    for (long i = 0; i < m; ++i) one(i);
  } else {
    // canonical_rep may throw; the first failure is rethrown after the loop.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < m; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return std::set<std::size_t>(reps.begin(), reps.end()).size();
}

DimEstimate estimate_dim(const CountProfile& profile, Window w) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < profile.scales.size(); ++i) {
    const int r = profile.scales[i];
    if (r < w.r_min || r > w.r_max) continue;
    if (profile.counts[i] == 0) throw PreconditionViolation("zero box count");
    xs.push_back(r);
    ys.push_back(std::log2(static_cast<double>(profile.counts[i])));
  }
  const std::size_t m = xs.size();
  if (m < 3) throw InsufficientScales("need at least three scales in the window, have " + std::to_string(m));
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DimEstimate e;
  e.slope = sxy / sxx;
  e.window = w;
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double res = ys[i] - (my + e.slope * (xs[i] - mx));
    ssr += res * res;
    e.residual_max = std::max(e.residual_max, std::abs(res));
  }
  e.std_error = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return e;
}

std::string CountProfile::to_csv() const {
  std::ostringstream out;
  out << "r,N\n";
  for (std::size_t i = 0; i < scales.size(); ++i) out << scales[i] << ',' << counts[i] << '\n';
  return out.str();
}

CountProfile CountProfile::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CountProfile p;
  if (!std::getline(in, line) || line != "r,N") throw ParseError("count profile CSV needs an 'r,N' header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("malformed profile row: " + line);
    try {
      p.scales.push_back(std::stoi(line.substr(0, comma)));
      p.counts.push_back(std::stoull(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("malformed profile row: " + line);
    }
  }
  return p;
}

}  // namespace affgrass::dim
