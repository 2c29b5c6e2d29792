#pragma once

// Finite-scale box counting. Upper box dimension over an explicit window of
// dyadic scales stands in for packing dimension.

#include <cstdint>
#include <string>
#include <vector>

#include "affgrass/exact/rational.hpp"
#include "affgrass/exec.hpp"
#include "affgrass/nets.hpp"

namespace affgrass::dim {

using exact::RatVector;

/// Closed range of scale exponents r (cells of side 2^-r).
struct Window {
  int r_min = 0;
  int r_max = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

struct CountProfile {
  std::vector<int> scales;
  std::vector<std::uint64_t> counts;  ///< nondecreasing in r

  /// "r,N" lines with a header.
  std::string to_csv() const;
  static CountProfile from_csv(const std::string& text);
  friend bool operator==(const CountProfile&, const CountProfile&) = default;
};

struct DimEstimate {
  double slope = 0;
  double std_error = 0;
  Window window;
  double residual_max = 0;
};

/// Exact cell indices floor(x 2^R) of every point at the finest scale R;
/// coarser scales are arithmetic shifts of these.
class CellGrid {
 public:
  /// Requires every |x_i| 2^R < 2^62. Throws PreconditionViolation.
  CellGrid(const std::vector<RatVector>& points, int max_r, Exec exec = Exec::parallel);
  /// From indices produced by cell_indices at the same max_r.
  CellGrid(std::size_t dim, int max_r, std::vector<std::int64_t> cells);

  std::size_t size() const { return size_; }
  int max_r() const { return max_r_; }
  /// Number of distinct cells of side 2^-r, r <= max_r.
  std::uint64_t count(int r) const;

 private:
  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  int max_r_ = 0;
  std::vector<std::int64_t> cells_;  ///< row-major, size_ x dim_
};

/// floor(x 2^max_r) for every coordinate, row-major. Throws PreconditionViolation
/// when a coordinate does not fit.
std::vector<std::int64_t> cell_indices(const std::vector<RatVector>& points, int max_r);

/// Distinct dyadic cells of side 2^-r meeting the set. Requires nonempty input.
std::uint64_t box_count_points(const std::vector<RatVector>& points, int r);

CountProfile count_profile(const CellGrid& grid, Window w, Exec exec = Exec::parallel);
CountProfile count_profile(const std::vector<RatVector>& points, Window w, Exec exec = Exec::parallel);

/// Distinct canonical representatives among the family. NotCovered propagates.
std::uint64_t box_count_planes(const std::vector<nets::Element>& planes, const nets::Net& net,
                               Exec exec = Exec::parallel);

/// Least-squares slope of log2 N(r) against r over the scales inside w.
/// Throws InsufficientScales with fewer than three.
DimEstimate estimate_dim(const CountProfile& profile, Window w);

}  // namespace affgrass::dim
