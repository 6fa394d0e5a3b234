#include "fracpc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fracpc {

double mittag_leffler(double alpha, double z, double tol) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::domain_error("mittag_leffler: alpha must lie in (0, 1]");
  }
  if (!(std::abs(z) <= 5.0)) {
    throw std::domain_error("mittag_leffler: |z| > 5 is outside the series-safe range");
  }
  if (!(tol > 0.0)) throw std::domain_error("mittag_leffler: tol must be > 0");
  if (z == 0.0) return 1.0;

  using wide = long double;
  const wide log_abs_z = std::log(std::abs(static_cast<wide>(z)));
  const bool negative = z < 0.0;
  wide sum = 1.0L;
  wide previous = 1.0L;
  constexpr std::size_t kMaxTerms = 20000;
  for (std::size_t k = 1; k < kMaxTerms; ++k) {
    const wide kk = static_cast<wide>(k);
    const wide magnitude =
        std::exp(kk * log_abs_z - std::lgamma(static_cast<wide>(alpha) * kk + 1.0L));
    sum += (negative && (k % 2 == 1)) ? -magnitude : magnitude;
    if (magnitude < tol && magnitude < previous) break;
    previous = magnitude;
  }
  return static_cast<double>(sum);
}

template <class Real>
StrobeSet strobe(const Trajectory<Real>& trajectory, double period, double phase,
                 std::size_t first_index) {
  const std::size_t steps = trajectory.steps();
  if (steps == 0) throw std::invalid_argument("strobe: trajectory has no steps");
  const double horizon = static_cast<double>(trajectory.times().back());
  const double h = horizon / static_cast<double>(steps);
  if (!(period >= 2.0 * h)) {
    throw std::invalid_argument("strobe: period shorter than two steps cannot be resolved");
  }
  if (!(phase >= 0.0)) throw std::invalid_argument("strobe: phase must be >= 0");

  StrobeSet out;
  out.phase = phase;
  out.period = period;
  out.dim = trajectory.dim();
  for (std::size_t k = 0;; ++k) {
    const double t = phase + static_cast<double>(k) * period;
    if (t > horizon + 0.5 * h) break;
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(std::llround(t / h)), steps);
    if (index < first_index) continue;
    out.times.push_back(static_cast<double>(trajectory.times()[index]));
    for (const Real v : trajectory.state(index)) out.samples.push_back(static_cast<double>(v));
  }
  return out;
}

StrobeSet strobe(const StrobeSet& set, double period, double phase) {
  if (!(period > 0.0)) throw std::invalid_argument("strobe: period must be > 0");
  if (!(phase >= 0.0)) throw std::invalid_argument("strobe: phase must be >= 0");
  StrobeSet out;
  out.phase = phase;
  out.period = period;
  out.dim = set.dim;
  if (set.size() == 0) return out;

  const double last = set.times.back();
  std::size_t cursor = 0;
  for (std::size_t k = 0;; ++k) {
    const double target = phase + static_cast<double>(k) * period;
    if (target > last + 0.5 * period) break;
    std::size_t best = set.size();
    double best_gap = 0.5 * period;
    for (std::size_t i = cursor; i < set.size(); ++i) {
      const double gap = std::abs(set.times[i] - target);
      if (set.times[i] > target + 0.5 * period) break;
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == set.size()) continue;
    cursor = best + 1;
    out.times.push_back(set.times[best]);
    const auto row = set.sample(best);
    out.samples.insert(out.samples.end(), row.begin(), row.end());
  }
  return out;
}

StrobeSet merge(const std::vector<StrobeSet>& sets) {
  StrobeSet out;
  if (sets.empty()) return out;
  out.phase = sets.front().phase;
  out.period = sets.front().period;
  out.dim = sets.front().dim;
  for (const StrobeSet& s : sets) {
    if (s.dim != out.dim) throw std::invalid_argument("merge: dimension mismatch");
    out.times.insert(out.times.end(), s.times.begin(), s.times.end());
    out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
  }
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Cluster label (0-based, in order of first appearance) for each sample.
std::vector<std::size_t> single_linkage(const StrobeSet& set, double theta) {
  const std::size_t n = set.size();
  DisjointSets sets(n);
  const double theta2 = theta * theta;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = set.sample(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = set.sample(j);
      double d2 = 0.0;
      for (std::size_t c = 0; c < set.dim; ++c) d2 += (a[c] - b[c]) * (a[c] - b[c]);
      if (d2 <= theta2) sets.unite(i, j);
    }
  }
  std::vector<std::size_t> label(n), root_label(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (root_label[root] == n) root_label[root] = next++;
    label[i] = root_label[root];
  }
  return label;
}

AttractorStats box_stats(const StrobeSet& set, const std::vector<std::size_t>& members) {
  AttractorStats s;
  s.samples = members.size();
  s.clusters = 1;
  s.lower.assign(set.dim, HUGE_VAL);
  s.upper.assign(set.dim, -HUGE_VAL);
  for (const std::size_t i : members) {
    const auto row = set.sample(i);
    for (std::size_t c = 0; c < set.dim; ++c) {
      s.lower[c] = std::min(s.lower[c], row[c]);
      s.upper[c] = std::max(s.upper[c], row[c]);
    }
  }
  s.spans_both_signs = set.dim > 0 && s.lower[0] < 0.0 && s.upper[0] > 0.0;
  return s;
}

}  // namespace

AttractorStats attractor_stats(const StrobeSet& samples, double theta) {
  if (samples.size() == 0) throw std::invalid_argument("attractor_stats: need at least one sample");
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  AttractorStats s = box_stats(samples, all);
  const auto labels = single_linkage(samples, theta);
  s.clusters = *std::max_element(labels.begin(), labels.end()) + 1;
  return s;
}

std::vector<AttractorStats> cluster_stats(const StrobeSet& samples, double theta) {
  if (samples.size() == 0) throw std::invalid_argument("cluster_stats: need at least one sample");
  const auto labels = single_linkage(samples, theta);
  const std::size_t count = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  std::vector<AttractorStats> out;
  for (const auto& m : members) out.push_back(box_stats(samples, m));
  return out;
}

SweepError::SweepError(double f, const std::string& cause, bool non_finite)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "sweep at f=" << f << ": " << cause;
        return os.str();
      }()),
      f_(f),
      non_finite_(non_finite) {}

BifurcationTable sweep_bifurcation(const ProblemSpec& base, const SweepOptions& options,
                                   const PartitionPlan& plan) {
  const LcrParams* params = base.system.lcr_params();
  if (params == nullptr) throw ValidationError("system: bifurcation sweeps need the lcr system");
  for (std::size_t i = 1; i < options.f_values.size(); ++i) {
    if (!(options.f_values[i] > options.f_values[i - 1])) {
      throw ValidationError("f_values: must be strictly increasing");
    }
  }
  if (options.transient >= base.steps) {
    throw ValidationError("transient: must be smaller than the step count");
  }
  const double period = options.period.value_or(2.0 * std::numbers::pi / params->omega);

  BifurcationTable table;
  for (const double f : options.f_values) {
    BifurcationRow row;
    row.f = f;
    row.transient = options.transient;

    ProblemSpec spec = base;
    spec.system = base.system.with_forcing(f);
    std::vector<std::vector<std::vector<double>>> inits;
    if (options.seeds.empty()) {
      inits.push_back(base.init);
    } else {
      for (const auto& seed : options.seeds) {
        if (seed.size() != spec.orders.size()) {
          throw ValidationError("seeds: each seed needs one value per component");
        }
        std::vector<std::vector<double>> init;
        for (const double v : seed) init.push_back({v});
        inits.push_back(std::move(init));
      }
    }
    for (auto& init : inits) {
      spec.init = std::move(init);
      try {
        const auto traj = solve_parallel(spec.instantiate<double>(), plan);
        row.per_seed.push_back(strobe(traj, period, options.phase, options.transient));
      } catch (const NonFiniteState& e) {
        throw SweepError(f, e.what(), true);
      }
    }
    row.samples = merge(row.per_seed);
    table.rows.push_back(std::move(row));
  }
  return table;
}

ConvergenceStudy mittag_leffler_convergence(double alpha, const std::vector<std::size_t>& steps,
                                            const PartitionPlan& plan) {
  if (steps.size() < 2) throw ValidationError("verify_levels: need at least two step counts");
  ConvergenceStudy study;
  study.alpha = alpha;
  study.reference = mittag_leffler(alpha, -1.0, 1e-17);
  study.steps = steps;
  for (const std::size_t n : steps) {
    ProblemSpec spec;
    spec.system = System::linear(-1.0);
    spec.orders = {alpha};
    spec.init = {{1.0}};
    spec.horizon = 1.0;
    spec.steps = n;
    const auto traj = solve_parallel(spec.instantiate<double>(), plan);
    study.errors.push_back(std::abs(traj.state(n)[0] - study.reference));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double x = std::log2(static_cast<double>(steps[i]));
    const double y = -std::log2(study.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (i + 1 < steps.size()) {
      study.pair_orders.push_back(
          std::log2(study.errors[i] / study.errors[i + 1]) /
          std::log2(static_cast<double>(steps[i + 1]) / static_cast<double>(steps[i])));
    }
  }
  study.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return study;
}

template StrobeSet strobe<double>(const Trajectory<double>&, double, double, std::size_t);
template StrobeSet strobe<long double>(const Trajectory<long double>&, double, double, std::size_t);

}  // namespace fracpc
