#pragma once

#include "rwmm/geometry.hpp"
#include "rwmm/random.hpp"
#include "rwmm/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rwmm {

/// The elementary event [x_m^n]: symbols fixed on indices start..start+len-1.
template <class Symbol>
struct Cylinder {
  std::size_t start = 0;
  std::vector<Symbol> symbols;

  std::size_t end() const { return start + symbols.size(); }  // one past the last fixed index
};

using WaypointCylinder = Cylinder<Cell>;
using PathCylinder = Cylinder<PathId>;

/// Waypoint selection process: IID uniform over the grid (the Bernoulli
/// scheme of the classic model) or a finite Markov chain over cells.
///
/// Markov chains are checked for exact row normalization, irreducibility
/// and aperiodicity at construction.
class WaypointProcessSpec {
 public:
  enum class Kind { kIidUniform, kMarkov };

  static WaypointProcessSpec iid_uniform(const GridSpec& grid);
  static WaypointProcessSpec markov(const GridSpec& grid, std::vector<std::vector<Rational>> transition,
                                    std::vector<Rational> initial);

  Kind kind() const { return kind_; }
  const GridSpec& grid() const { return grid_; }
  std::size_t symbol_count() const { return grid_.cell_count(); }

  /// Marginal distribution of W_k.
  std::vector<Rational> marginal(std::size_t k) const;
  Rational initial(std::size_t from) const;
  Rational transition(std::size_t from, std::size_t to) const;

  const std::vector<std::vector<Rational>>& transition_matrix() const { return transition_; }
  const std::vector<Rational>& initial_distribution() const { return initial_; }

  /// Cumulative distributions in double precision, for sampling.
  const std::vector<double>& initial_cdf() const { return initial_cdf_; }
  const std::vector<double>& transition_cdf(std::size_t from) const { return transition_cdf_[from]; }

 private:
  WaypointProcessSpec() = default;

  Kind kind_ = Kind::kIidUniform;
  GridSpec grid_;
  std::vector<std::vector<Rational>> transition_;
  std::vector<Rational> initial_;
  std::vector<double> initial_cdf_;
  std::vector<std::vector<double>> transition_cdf_;
};

/// A Markov waypoint chain that favors nearby cells: weight 2 for cells within
/// Chebyshev distance 1 (self included), weight 1 elsewhere, rows normalized.
/// Uniform initial distribution. Always irreducible and aperiodic.
WaypointProcessSpec make_local_markov(const GridSpec& grid);

Rational waypoint_cylinder_prob(const WaypointProcessSpec& spec, const WaypointCylinder& ev);

/// nu_w([p_0^{n-1}]) = prod 1/|P_{w_i,w_{i+1}}| if every p_i is in its family, else 0.
/// Needs at least n + 1 waypoints.
Rational channel_cylinder_prob(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                               std::span<const PathId> paths);

/// Channel measure of a partial assignment: positions holding nullopt are
/// free and summed over the whole alphabet by enumeration.
Rational channel_pattern_prob(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                              std::span<const std::optional<PathId>> pattern,
                              std::size_t cap = enumeration_cap());

struct StationarityResult {
  Rational max_discrepancy;
  std::size_t cylinders_checked = 0;
};

/// Max over path cylinders [p_0^{n-1}] of |nu_{Tw}(C) - nu_w(T^{-1} C)|.
///
/// nu_w(T^{-1} C) is computed by summing the free index 0 over the alphabet.
/// Cylinders whose i-th symbol lies in neither P_{w_i,w_{i+1}} nor
/// P_{w_{i+1},w_{i+2}} have measure zero on both sides and are skipped.
StationarityResult check_channel_stationarity(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                                              std::size_t horizon, std::size_t cap = enumeration_cap());

struct MixingResult {
  Rational discrepancy;
  Rational joint;     // nu_w(T^{-tau} A  intersect  B)
  Rational shifted;   // nu_w(T^{-tau} A)
  Rational base;      // nu_w(B)
  bool premise_met = false;  // tau >= b
};

/// |nu_w(T^{-tau} A intersect B) - nu_w(T^{-tau} A) nu_w(B)| for A = [p_0^{a-1}], B = [p_0^{b-1}].
MixingResult check_output_mixing(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                                 std::span<const PathId> a, std::span<const PathId> b, std::size_t tau,
                                 std::size_t cap = enumeration_cap());

/// Sum of nu_w over every admissible cylinder [p_0^{n-1}].
Rational channel_normalization(const PathAlphabet& alphabet, std::span<const Cell> waypoints, std::size_t horizon,
                               std::size_t cap = enumeration_cap());

/// mu_p(A) = sum over waypoint prefixes w' of length `horizon` of mu_w(w') nu_{w'}(A).
Rational path_process_prob(const WaypointProcessSpec& spec, const PathAlphabet& alphabet, const PathCylinder& ev,
                           std::size_t horizon, std::size_t cap = enumeration_cap());

/// Streaming waypoint draws with a private RNG.
class WaypointSampler {
 public:
  WaypointSampler(const WaypointProcessSpec& spec, std::uint64_t seed);
  Cell next();

 private:
  const WaypointProcessSpec* spec_;
  Rng rng_;
  std::optional<std::size_t> last_;
};

/// Uniform draws from P_{w,w'} with a private RNG.
class PathSampler {
 public:
  PathSampler(const PathAlphabet& alphabet, std::uint64_t seed);
  PathId next(Cell from, Cell to);

 private:
  const PathAlphabet* alphabet_;
  Rng rng_;
};

std::vector<Cell> sample_waypoints(const WaypointProcessSpec& spec, std::size_t count, std::uint64_t seed);

/// One path per consecutive waypoint pair.
std::vector<PathId> sample_paths(const PathAlphabet& alphabet, std::span<const Cell> waypoints, std::uint64_t seed);

}  // namespace rwmm
