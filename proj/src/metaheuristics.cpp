#include "scs/metaheuristics.hpp"

#include <numeric>
#include <thread>

#include "scs/fnn.hpp"
#include "scs/io_util.hpp"
#include "scs/rng.hpp"

namespace scs {

void Objective::validate() const {
    if (dim < 1) {
        throw std::invalid_argument("objective dimension must be >= 1");
    }
    if (lower.size() != dim || upper.size() != dim) {
        throw std::invalid_argument("objective bounds must have one entry per dimension");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(lower[i] < upper[i])) {
            throw std::invalid_argument("objective bounds violate lower < upper at coordinate " +
                                        std::to_string(i));
        }
    }
    if (!eval) {
        throw std::invalid_argument("objective has no evaluation function");
    }
}

namespace {

void check_pso_config(const PsoConfig& cfg) {
    if (cfg.swarm_size < 2) {
        throw std::invalid_argument("swarm size must be >= 2");
    }
    if (cfg.w < 0.0 || cfg.c1 < 0.0 || cfg.c2 < 0.0) {
        throw std::invalid_argument("PSO weights must be >= 0");
    }
    if (cfg.max_iterations < 1) {
        throw std::invalid_argument("iteration count must be >= 1");
    }
    if (!(cfg.velocity_fraction > 0.0 && cfg.velocity_fraction <= 1.0)) {
        throw std::invalid_argument("velocity fraction must be in (0, 1]");
    }
}

void check_bat_config(const BatConfig& cfg) {
    if (cfg.population < 2) {
        throw std::invalid_argument("population must be >= 2");
    }
    if (!(cfg.f_min < cfg.f_max)) {
        throw std::invalid_argument("frequency range needs f_min < f_max");
    }
    if (!(cfg.loudness > 0.0)) {
        throw std::invalid_argument("initial loudness must be > 0");
    }
    if (!(cfg.pulse_rate >= 0.0 && cfg.pulse_rate <= 1.0)) {
        throw std::invalid_argument("initial pulse rate must be in [0, 1]");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0) || !(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
        throw std::invalid_argument("alpha and gamma must be in (0, 1)");
    }
    if (cfg.max_iterations < 1) {
        throw std::invalid_argument("iteration count must be >= 1");
    }
}

std::string vector_preview(const std::vector<double>& x) {
    std::string out = "[";
    const std::size_t shown = std::min<std::size_t>(x.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_double(x[i]);
    }
    if (shown < x.size()) {
        out += ", ... (" + std::to_string(x.size()) + " entries)";
    }
    out += "]";
    return out;
}

/// Evaluate every candidate, optionally across threads. Results, error
/// detection, and error order are independent of the thread count: fitness
/// lands by index and the first failure by index is the one reported.
std::vector<double> evaluate_population(const Objective& obj,
                                        const std::vector<std::vector<double>>& xs,
                                        int threads, std::size_t& evaluations) {
    std::vector<double> fitness(xs.size());
    std::vector<std::exception_ptr> errors(xs.size());

    auto eval_one = [&](std::size_t i) {
        try {
            fitness[i] = obj.eval(xs[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const auto n_threads = static_cast<std::size_t>(std::max(threads, 1));
    if (n_threads <= 1 || xs.size() <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            eval_one(i);
        }
    } else {
        const std::size_t workers = std::min(n_threads, xs.size());
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < xs.size(); i += workers) {
                    eval_one(i);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    evaluations += xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        if (!std::isfinite(fitness[i])) {
            throw std::runtime_error("objective returned non-finite value at " +
                                     vector_preview(xs[i]));
        }
    }
    return fitness;
}

} // namespace

OptimizerTrace optimize_pso(const Objective& obj, const PsoConfig& cfg, int threads) {
    obj.validate();
    check_pso_config(cfg);

    const auto swarm = static_cast<std::size_t>(cfg.swarm_size);
    const std::size_t dim = obj.dim;
    Rng rng(cfg.seed);

    std::vector<double> vmax(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        vmax[d] = cfg.velocity_fraction * (obj.upper[d] - obj.lower[d]);
    }

    std::vector<std::vector<double>> x(swarm, std::vector<double>(dim));
    std::vector<std::vector<double>> v(swarm, std::vector<double>(dim, 0.0));
    for (auto& particle : x) {
        for (std::size_t d = 0; d < dim; ++d) {
            particle[d] = rng.uniform(obj.lower[d], obj.upper[d]);
        }
    }

    OptimizerTrace trace;
    std::vector<double> fx = evaluate_population(obj, x, threads, trace.evaluations);
    std::vector<std::vector<double>> pbest = x;
    std::vector<double> pf = fx;
    std::size_t gi = 0;
    for (std::size_t i = 1; i < swarm; ++i) {
        if (pf[i] < pf[gi]) {
            gi = i;
        }
    }
    std::vector<double> gbest = pbest[gi];
    double gf = pf[gi];

    std::vector<double> r1(dim);
    std::vector<double> r2(dim);
    for (int t = 1; t <= cfg.max_iterations; ++t) {
        // All draws happen serially here, before any evaluation; gbest is
        // the value frozen at the iteration start.
        for (std::size_t i = 0; i < swarm; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                r1[d] = rng.uniform01();
            }
            for (std::size_t d = 0; d < dim; ++d) {
                r2[d] = rng.uniform01();
            }
            for (std::size_t d = 0; d < dim; ++d) {
                double vel = cfg.w * v[i][d] + cfg.c1 * r1[d] * (pbest[i][d] - x[i][d]) +
                             cfg.c2 * r2[d] * (gbest[d] - x[i][d]);
                vel = std::clamp(vel, -vmax[d], vmax[d]);
                v[i][d] = vel;
                x[i][d] = std::clamp(x[i][d] + vel, obj.lower[d], obj.upper[d]);
            }
        }
        fx = evaluate_population(obj, x, threads, trace.evaluations);
        for (std::size_t i = 0; i < swarm; ++i) {
            if (fx[i] < pf[i]) {
                pf[i] = fx[i];
                pbest[i] = x[i];
            }
            if (pf[i] < gf) {
                gf = pf[i];
                gbest = pbest[i];
            }
        }
        trace.best_history.push_back(gf);
    }

    trace.best_vector = std::move(gbest);
    trace.best_fitness = gf;
    return trace;
}

OptimizerTrace optimize_bat(const Objective& obj, const BatConfig& cfg, int threads) {
    obj.validate();
    check_bat_config(cfg);

    const auto pop = static_cast<std::size_t>(cfg.population);
    const std::size_t dim = obj.dim;
    Rng rng(cfg.seed);

    std::vector<std::vector<double>> x(pop, std::vector<double>(dim));
    std::vector<std::vector<double>> v(pop, std::vector<double>(dim, 0.0));
    for (auto& bat : x) {
        for (std::size_t d = 0; d < dim; ++d) {
            bat[d] = rng.uniform(obj.lower[d], obj.upper[d]);
        }
    }

    OptimizerTrace trace;
    std::vector<double> fx = evaluate_population(obj, x, threads, trace.evaluations);
    std::vector<double> loud(pop, cfg.loudness);
    std::vector<double> pulse(pop, cfg.pulse_rate);

    std::size_t gi = 0;
    for (std::size_t i = 1; i < pop; ++i) {
        if (fx[i] < fx[gi]) {
            gi = i;
        }
    }
    std::vector<double> gbest = x[gi];
    double gf = fx[gi];

    std::vector<std::vector<double>> cand(pop, std::vector<double>(dim));
    std::vector<double> u_acc(pop);
    for (int t = 1; t <= cfg.max_iterations; ++t) {
        // Mean loudness and gbest frozen at the iteration start; all draws
        // serial and in bat-index order, before any evaluation.
        const double mean_loud =
            std::accumulate(loud.begin(), loud.end(), 0.0) / static_cast<double>(pop);
        const std::vector<double> g0 = gbest;

        for (std::size_t i = 0; i < pop; ++i) {
            const double beta = rng.uniform01();
            const double f = cfg.f_min + (cfg.f_max - cfg.f_min) * beta;
            for (std::size_t d = 0; d < dim; ++d) {
                v[i][d] += (x[i][d] - g0[d]) * f;
                cand[i][d] = std::clamp(x[i][d] + v[i][d], obj.lower[d], obj.upper[d]);
            }
            const double u_walk = rng.uniform01();
            if (u_walk > pulse[i]) {
                for (std::size_t d = 0; d < dim; ++d) {
                    const double eps = rng.uniform(-1.0, 1.0);
                    cand[i][d] = std::clamp(g0[d] + eps * mean_loud, obj.lower[d], obj.upper[d]);
                }
            }
            u_acc[i] = rng.uniform01();
        }

        const std::vector<double> fc = evaluate_population(obj, cand, threads, trace.evaluations);
        for (std::size_t i = 0; i < pop; ++i) {
            if (fc[i] < fx[i] && u_acc[i] < loud[i]) {
                x[i] = cand[i];
                fx[i] = fc[i];
                loud[i] *= cfg.alpha;
                pulse[i] = bat_pulse_rate(cfg.pulse_rate, cfg.gamma, t);
            }
            // The global best learns from every evaluated candidate,
            // independent of the loudness-gated acceptance.
            if (fc[i] < gf) {
                gf = fc[i];
                gbest = cand[i];
            }
        }
        trace.best_history.push_back(gf);
    }

    trace.best_vector = std::move(gbest);
    trace.best_fitness = gf;
    return trace;
}

Objective fnn_weight_objective(const FeatureMatrix& train, const std::vector<int>& layer_sizes,
                               double bound) {
    if (train.rows == 0) {
        throw std::invalid_argument("weight objective needs a non-empty training matrix");
    }
    if (!(bound > 0.0)) {
        throw std::invalid_argument("weight bound must be > 0");
    }
    if (train.cols != static_cast<std::size_t>(layer_sizes.front())) {
        throw std::invalid_argument("training matrix has " + std::to_string(train.cols) +
                                    " features, network expects " +
                                    std::to_string(layer_sizes.front()));
    }
    Objective obj;
    obj.dim = parameter_count(layer_sizes);
    obj.lower.assign(obj.dim, -bound);
    obj.upper.assign(obj.dim, bound);
    obj.eval = [train, layer_sizes](const std::vector<double>& flat) {
        return mse_of_network(decode_weights(layer_sizes, flat), train);
    };
    return obj;
}

nlohmann::json pso_config_to_json(const PsoConfig& cfg) {
    return nlohmann::json{{"algorithm", "pso"},
                          {"swarm_size", cfg.swarm_size},
                          {"w", cfg.w},
                          {"c1", cfg.c1},
                          {"c2", cfg.c2},
                          {"max_iterations", cfg.max_iterations},
                          {"velocity_fraction", cfg.velocity_fraction},
                          {"seed", cfg.seed}};
}

nlohmann::json bat_config_to_json(const BatConfig& cfg) {
    return nlohmann::json{{"algorithm", "bat"},
                          {"population", cfg.population},
                          {"f_min", cfg.f_min},
                          {"f_max", cfg.f_max},
                          {"loudness", cfg.loudness},
                          {"pulse_rate", cfg.pulse_rate},
                          {"alpha", cfg.alpha},
                          {"gamma", cfg.gamma},
                          {"max_iterations", cfg.max_iterations},
                          {"seed", cfg.seed}};
}

nlohmann::json trace_to_json(const OptimizerTrace& trace, const nlohmann::json& config) {
    return nlohmann::json{{"config", config},
                          {"best_fitness", trace.best_fitness},
                          {"best_vector", trace.best_vector},
                          {"best_history", trace.best_history},
                          {"evaluations", trace.evaluations}};
}

} // namespace scs
