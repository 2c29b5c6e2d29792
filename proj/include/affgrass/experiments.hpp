#pragma once

// Digit-restricted self-similar generators and bound checks for unions of
// plane subsets. Hausdorff, packing and box dimensions of these sets agree.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affgrass/affine.hpp"
#include "affgrass/dimest.hpp"
#include "affgrass/exec.hpp"

namespace affgrass::exp {

using affine::AffinePlane;
using dim::CountProfile;
using dim::DimEstimate;
using dim::Window;
using exact::Rational;
using exact::RatVector;

/// Points sum_{i<=depth} d_i b^-i with every d_i in digits.
struct CantorSpec {
  int base = 3;
  std::vector<int> digits{0, 2};
  int depth = 8;
  double target_dim() const;
  std::size_t size() const;  ///< |digits|^depth
  friend bool operator==(const CantorSpec&, const CantorSpec&) = default;
};

/// Validates 2 <= base, 1 <= |digits| <= base, distinct digits in range.
void validate(const CantorSpec& spec);

/// Enumerates every point (lexicographic digit order) when count >= size(),
/// otherwise draws count digit strings from seed.
std::vector<Rational> gen_cantor_points(const CantorSpec& spec, std::size_t count, std::uint64_t seed);

/// In-plane coordinate set on [0, 1], sampled on the 2^-bits grid.
struct SubsetSpec {
  enum class Kind {
    full,      ///< all of [0, 1]
    intervals, ///< union of closed intervals inside [0, 1]
    sparse,    ///< base-4 digits at positions 1, 3, 6, 10, ... restricted to {0, 1}: null set of dimension 1
    cantor,    ///< the Cantor set of `cantor`
  };
  Kind kind = Kind::full;
  int bits = 10;
  std::vector<std::pair<Rational, Rational>> intervals{{Rational(0), Rational(1, 2)}};
  CantorSpec cantor;
  double target_dim() const;
  friend bool operator==(const SubsetSpec&, const SubsetSpec&) = default;
};

/// Sorted sample of the coordinate set.
std::vector<Rational> subset_coordinates(const SubsetSpec& spec);

enum class SubsetType { hausdorff, packing };

/// k = 1: lines x -> (x, a x + b) in R^n with params (a_1..a_{n-1}, b_1..b_{n-1}).
/// k = n - 1: graphs x_n = a . x + b with params (a_1..a_{n-1}, b).
struct FamilySpec {
  std::size_t n = 2;
  std::size_t k = 1;
  std::vector<CantorSpec> params;  ///< one per parameter coordinate
  SubsetSpec subset;               ///< same set on every in-plane coordinate
  SubsetType subset_type = SubsetType::hausdorff;
  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

std::size_t param_count(std::size_t n, std::size_t k);
void validate(const FamilySpec& spec);

struct FamilyMember {
  RatVector params;
  AffinePlane plane;
};

/// Parameter vectors from the product of the coordinate Cantor sets
/// (all of them when count covers the product, else count seeded draws).
std::vector<FamilyMember> gen_plane_family(const FamilySpec& spec, std::size_t count, std::uint64_t seed);

/// Graph points of the member over the product subset; each is checked to
/// lie on the plane exactly. Throws PreconditionViolation otherwise.
std::vector<RatVector> in_plane_points(const FamilySpec& spec, const FamilyMember& m, const SubsetSpec& subset);

/// Union of in_plane_points over the family.
std::vector<RatVector> union_points(const FamilySpec& spec, const std::vector<FamilyMember>& family,
                                    const SubsetSpec& subset, Exec exec = Exec::parallel);
/// Cells of the same union at scale max_r, built member by member.
dim::CellGrid union_cells(const FamilySpec& spec, const std::vector<FamilyMember>& family,
                          const SubsetSpec& subset, int max_r, Exec exec = Exec::parallel);

double union_bound_general(std::size_t n, std::size_t k, double s, double t);    ///< Hausdorff-type subsets
double union_bound_packing(std::size_t n, std::size_t k, double s, double t);    ///< packing-type subsets
double union_bound_hyperplane(std::size_t n, double t);                          ///< k = n-1, s = n-1

enum class Relation { lower, upper, equal };
std::string to_string(Relation r);
Relation parse_relation(const std::string& s);

enum class ExtensionMode { positive_measure, dim1_lines, hyperplane_fulldim };
std::string to_string(ExtensionMode m);
ExtensionMode parse_extension_mode(const std::string& s);

struct BoundReport {
  std::string id;
  std::string check;  ///< which relation was tested, e.g. "union_bound_general"
  Relation relation = Relation::lower;
  DimEstimate measured;
  double bound_value = 0;
  double tolerance = 0.1;
  bool satisfied = false;
  double margin = 0;  ///< >= 0 iff satisfied
  std::optional<double> t_measured;
  std::optional<double> s_value;
  std::optional<DimEstimate> reference;  ///< dim E for extension checks
  CountProfile profile;                  ///< profile of the measured set
  std::string note;
};

/// Fills satisfied and margin from measured.slope, bound_value, tolerance.
void decide(BoundReport& report);

enum class ExperimentKind { cantor_calibration, grid_calibration, union_bound, extension };
std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

struct ExperimentSpec {
  std::string id;
  ExperimentKind kind = ExperimentKind::union_bound;
  CantorSpec cantor;                   ///< cantor_calibration
  std::size_t grid_dim = 2;            ///< grid_calibration
  int grid_bits = 8;                   ///< grid_calibration
  FamilySpec family;                   ///< union_bound, extension
  ExtensionMode mode = ExtensionMode::positive_measure;
  SubsetSpec extension_subset;         ///< in-plane subsets of E for extension
  Window window{2, 8};
  Window param_window{1, 6};
  std::size_t samples = 1u << 20;      ///< family size cap
  std::uint64_t seed = 1;
  double tolerance = 0.1;
};

/// Measured parameter dimension t of a family.
DimEstimate parameter_dim(const std::vector<FamilyMember>& family, Window w, Exec exec = Exec::parallel);

BoundReport cantor_calibration(const std::string& id, const CantorSpec& spec, Window w, std::size_t count,
                               std::uint64_t seed, double tolerance, Exec exec = Exec::parallel);
BoundReport grid_calibration(const std::string& id, std::size_t n, int bits, Window w, double tolerance,
                             Exec exec = Exec::parallel);
BoundReport union_bound_experiment(const ExperimentSpec& spec, Exec exec = Exec::parallel);
BoundReport extension_experiment(const ExperimentSpec& spec, Exec exec = Exec::parallel);

BoundReport run_experiment(const ExperimentSpec& spec, Exec exec = Exec::parallel);
/// Runs every cell; reports are sorted by id.
std::vector<BoundReport> run_suite(const std::vector<ExperimentSpec>& specs, Exec exec = Exec::parallel);

/// The standard suite (also shipped as configs/suite.json).
std::vector<ExperimentSpec> standard_suite();

}  // namespace affgrass::exp
