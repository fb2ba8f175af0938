#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scs/dataset.hpp"

namespace scs {

/// Box-bounded minimization problem over real vectors.
struct Objective {
    std::size_t dim = 0;
    std::vector<double> lower;  ///< per-coordinate lower bound
    std::vector<double> upper;  ///< per-coordinate upper bound
    std::function<double(const std::vector<double>&)> eval;  ///< deterministic cost, lower is better

    /// Throws std::invalid_argument unless dim >= 1, bounds have dim
    /// entries with lower < upper, and eval is set.
    void validate() const;
};

/// Particle swarm hyperparameters. Defaults come from a benchmark grid
/// search scored by worst-case accuracy over many seeds; they are
/// deliberately conservative (moderate inertia, social-leaning pull, tight
/// velocity clamp), which suits the weight-fitting problems this library
/// ships.
struct PsoConfig {
    int swarm_size = 50;
    double w = 0.5;    ///< inertia weight
    double c1 = 1.0;   ///< cognitive weight
    double c2 = 2.0;   ///< social weight
    int max_iterations = 300;
    double velocity_fraction = 0.05;  ///< velocity clamp as a fraction of each range
    std::uint64_t seed = 0;
};

/// Bat algorithm hyperparameters. The loudness decay (alpha) is the
/// benchmark-calibrated value; canonical frequency range and schedules
/// otherwise.
struct BatConfig {
    int population = 30;
    double f_min = 0.0;      ///< pulse frequency range lower end
    double f_max = 2.0;      ///< pulse frequency range upper end
    double loudness = 1.0;   ///< initial loudness A0
    double pulse_rate = 0.5; ///< initial pulse rate r0
    double alpha = 0.7;      ///< loudness decay per accepted move
    double gamma = 0.9;      ///< pulse-rate growth constant
    int max_iterations = 300;
    std::uint64_t seed = 0;
};

/// Result of one optimizer run.
struct OptimizerTrace {
    std::vector<double> best_history;  ///< best-so-far fitness, one entry per iteration
    std::vector<double> best_vector;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;       ///< exact objective call count
};

/// Pulse-rate schedule: r0 * (1 - exp(-gamma * t)), t the 1-based iteration
/// at which a move was accepted. Approaches r0 for large t.
inline double bat_pulse_rate(double r0, double gamma, int t) {
    return r0 * (1.0 - std::exp(-gamma * static_cast<double>(t)));
}

/// Particle swarm optimization, synchronous variant.
///
/// Positions start uniform within bounds, velocities at zero. Each
/// iteration, per particle i in index order: fresh uniform[0,1] vectors r1
/// then r2 are drawn; v <- w v + c1 r1 (pbest_i - x) + c2 r2 (gbest - x),
/// clamped to +/- velocity_fraction * range per coordinate; x <- x + v,
/// clamped to bounds. The gbest used by every particle is the one frozen at
/// the iteration start. All candidates are then evaluated (concurrently
/// when threads > 1), and pbest/gbest update on strict improvement in
/// particle-index order — so results are bitwise identical for any thread
/// count. Draw order per iteration: particle 0 r1[0..dim), r2[0..dim),
/// particle 1 ..., consumed before any evaluation.
///
/// Throws std::invalid_argument for invalid config and std::runtime_error
/// naming the offending vector when the objective returns a non-finite
/// value.
OptimizerTrace optimize_pso(const Objective& obj, const PsoConfig& cfg, int threads = 1);

/// Bat algorithm (frequency-tuned velocities, decaying loudness, rising
/// pulse rate).
///
/// Per iteration t (1-based), the mean loudness and gbest are frozen at the
/// iteration start; per bat i in index order the draws are: beta (frequency
/// f = f_min + (f_max - f_min) beta), u_walk, a uniform[-1,1] vector epsilon
/// only when u_walk > r_i (local walk: candidate = gbest + epsilon * mean
/// loudness), and u_acc. Velocity v += (x - gbest) f always updates; the
/// fly candidate is x + v clamped to bounds, replaced by the clamped local
/// walk when it triggers. All candidates are then evaluated (concurrently
/// when threads > 1); in bat-index order a candidate replaces x_i when it
/// strictly improves f(x_i) AND u_acc < A_i (then A_i *= alpha and r_i
/// follows bat_pulse_rate), while the global best updates from every
/// evaluated candidate on strict improvement, independent of acceptance.
OptimizerTrace optimize_bat(const Objective& obj, const BatConfig& cfg, int threads = 1);

/// Objective whose cost is the network MSE over `train`: a vector decodes
/// into a network (codec order) and is scored with mse_of_network. Bounds
/// are [-bound, +bound] per coordinate. The default bound matches the PSO
/// defaults' grid search.
Objective fnn_weight_objective(const FeatureMatrix& train, const std::vector<int>& layer_sizes,
                               double bound = 3.0);

template <typename Config>
struct GridRow {
    std::size_t grid_index = 0;  ///< position in the caller's grid enumeration
    Config config;
    std::vector<double> seed_scores;
    double median_score = 0.0;
};

template <typename Config>
struct GridSearchResult {
    Config best;
    std::size_t best_index = 0;
    std::vector<GridRow<Config>> leaderboard;  ///< sorted by (median, grid index)
};

/// Score every configuration with a fixed seed set (>= 3 seeds; the score is
/// the median of the per-seed final fitnesses) and return the argmin, ties
/// broken by grid order. When budget < grid size only the first `budget`
/// grid points are evaluated (the documented truncation rule). `run` is
/// called as run(config, seed) -> final best fitness.
template <typename Config, typename Runner>
GridSearchResult<Config> grid_search(Runner&& run, std::vector<Config> grid,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::size_t budget) {
    if (grid.empty()) {
        throw std::invalid_argument("grid search needs a non-empty grid");
    }
    if (seeds.size() < 3) {
        throw std::invalid_argument("grid search needs at least 3 seeds, got " +
                                    std::to_string(seeds.size()));
    }
    if (budget == 0) {
        throw std::invalid_argument("grid search budget must be >= 1");
    }
    if (budget < grid.size()) {
        grid.resize(budget);
    }

    std::vector<GridRow<Config>> rows;
    rows.reserve(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        GridRow<Config> row;
        row.grid_index = gi;
        row.config = grid[gi];
        for (auto seed : seeds) {
            row.seed_scores.push_back(run(grid[gi], seed));
        }
        std::vector<double> sorted = row.seed_scores;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        row.median_score = n % 2 == 1 ? sorted[n / 2]
                                      : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        rows.push_back(std::move(row));
    }

    std::size_t best = 0;
    for (std::size_t gi = 1; gi < rows.size(); ++gi) {
        if (rows[gi].median_score < rows[best].median_score) {
            best = gi;
        }
    }
    GridSearchResult<Config> result;
    result.best = rows[best].config;
    result.best_index = best;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const GridRow<Config>& a, const GridRow<Config>& b) {
                         return a.median_score < b.median_score;
                     });
    result.leaderboard = std::move(rows);
    return result;
}

nlohmann::json pso_config_to_json(const PsoConfig& cfg);
nlohmann::json bat_config_to_json(const BatConfig& cfg);

/// Trace serialization: config echo, per-iteration best fitness, best
/// vector, evaluation count (the config JSON carries the seed).
nlohmann::json trace_to_json(const OptimizerTrace& trace, const nlohmann::json& config);

} // namespace scs
