#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpc/parallel.hpp"
#include "fracpc/problem.hpp"
#include "fracpc/systems.hpp"

namespace fracpc {

/// E_alpha(z) = sum_k z^k / Gamma(alpha k + 1), summed in long double until
/// a term falls below tol once the terms have started shrinking.
/// Requires 0 < alpha <= 1 and |z| <= 5; throws std::domain_error otherwise.
double mittag_leffler(double alpha, double z, double tol = 1e-15);

/// Samples of a trajectory taken once per strobe period.
struct StrobeSet {
  double phase = 0.0;
  double period = 0.0;
  std::size_t dim = 0;
  std::vector<double> times;    // grid time of each sample
  std::vector<double> samples;  // row-major, dim values per sample

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> sample(std::size_t k) const { return {samples.data() + k * dim, dim}; }
};

/// Nearest-grid-point samples at t = phase + k period (k >= 0, t <= T),
/// skipping grid indices below first_index. Throws std::invalid_argument when
/// period < 2h or phase < 0.
template <class Real>
StrobeSet strobe(const Trajectory<Real>& trajectory, double period, double phase,
                 std::size_t first_index = 0);

/// Re-strobes an existing set: keeps, for each k, the sample nearest to
/// phase + k period (within half a period).
StrobeSet strobe(const StrobeSet& set, double period, double phase);

/// Concatenates sets of equal dimension (samples in argument order).
StrobeSet merge(const std::vector<StrobeSet>& sets);

struct AttractorStats {
  std::size_t samples = 0;
  std::size_t clusters = 0;
  std::vector<double> lower;  // bounding box per component
  std::vector<double> upper;
  bool spans_both_signs = false;  // first component takes both signs
};

/// Bounding box, single-linkage cluster count at distance theta, and whether
/// the first component visits both signs. Throws for an empty set.
AttractorStats attractor_stats(const StrobeSet& samples, double theta = 0.3);

/// Per-cluster statistics (clusters ordered by their first sample).
std::vector<AttractorStats> cluster_stats(const StrobeSet& samples, double theta = 0.3);

struct BifurcationRow {
  double f = 0.0;
  std::size_t transient = 0;
  std::vector<StrobeSet> per_seed;
  StrobeSet samples;  // all seeds merged
};

struct BifurcationTable {
  std::vector<BifurcationRow> rows;
};

struct SweepOptions {
  std::vector<double> f_values;
  std::size_t transient = 0;             // grid steps discarded before strobing
  std::vector<std::vector<double>> seeds;  // initial states; empty means base.init
  double phase = 0.0;
  std::optional<double> period;          // defaults to 2 pi / omega
};

/// Solver failure inside a sweep, annotated with the forcing amplitude.
class SweepError : public std::runtime_error {
 public:
  SweepError(double f, const std::string& cause, bool non_finite);
  double f() const noexcept { return f_; }
  bool non_finite() const noexcept { return non_finite_; }

 private:
  double f_;
  bool non_finite_;
};

/// For each forcing amplitude and seed: solve with `plan`, drop the
/// transient, strobe at the forcing period. Throws ValidationError for
/// unsorted f values or transient >= N, SweepError for solver failures.
BifurcationTable sweep_bifurcation(const ProblemSpec& base, const SweepOptions& options,
                                   const PartitionPlan& plan);

/// Terminal errors of D^alpha y = -y, y(0) = 1 on [0, 1] against
/// E_alpha(-1), one solve per step count.
struct ConvergenceStudy {
  double alpha = 0.0;
  double reference = 0.0;
  std::vector<std::size_t> steps;
  std::vector<double> errors;
  std::vector<double> pair_orders;  // log2(e_i / e_{i+1}) / log2(N_{i+1} / N_i)
  double fitted_order = 0.0;        // least-squares slope of -log e against log N
};

ConvergenceStudy mittag_leffler_convergence(double alpha, const std::vector<std::size_t>& steps,
                                            const PartitionPlan& plan);

extern template StrobeSet strobe<double>(const Trajectory<double>&, double, double, std::size_t);
extern template StrobeSet strobe<long double>(const Trajectory<long double>&, double, double,
                                              std::size_t);

}  // namespace fracpc
