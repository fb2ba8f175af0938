/// scs — punching shear strength toolkit for slab-column connections.
///
/// Subcommands: stats, predict, train, compare, synthesize. Every run is
/// deterministic given its full flag set (seed included); output files never
/// embed timestamps or thread counts, so identical invocations produce
/// byte-identical artifacts.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scs/codes.hpp"
#include "scs/dataset.hpp"
#include "scs/evaluation.hpp"
#include "scs/fnn.hpp"
#include "scs/io_util.hpp"
#include "scs/metaheuristics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string out_root = "out";
    std::string json_dir;  ///< when set, receives a copy of the primary JSON
    std::string label;     ///< run directory name; derived from inputs when empty
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

/// Lowercase filesystem-safe label: alnum kept, runs of anything else
/// collapse to single dashes.
std::string slug(const std::string& text) {
    std::string out;
    bool pending_dash = false;
    for (char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (std::isalnum(u) != 0) {
            if (pending_dash && !out.empty()) {
                out += '-';
            }
            pending_dash = false;
            out += static_cast<char>(std::tolower(u));
        } else {
            pending_dash = true;
        }
    }
    return out.empty() ? std::string("run") : out;
}

std::string csv_stem(const std::string& path) { return slug(fs::path(path).stem().string()); }

fs::path run_dir(const GlobalOpts& g, const std::string& command, const std::string& default_label) {
    return fs::path(g.out_root) / command / (g.label.empty() ? default_label : g.label);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Write the command's primary JSON artifact, plus a copy into --json's
/// directory when that flag was given.
void emit_primary_json(const GlobalOpts& g, const fs::path& dir, const std::string& name,
                       const json& j) {
    scs::write_text_file(dir / name, dump(j));
    if (!g.json_dir.empty()) {
        scs::write_text_file(fs::path(g.json_dir) / name, dump(j));
    }
}

void write_meta(const fs::path& dir, json meta) {
    scs::write_text_file(dir / "meta.json", dump(meta));
}

json norm_to_json(const scs::NormParams& p) {
    json bounds = json::array();
    for (const auto& [lo, hi] : p.feature_bounds) {
        bounds.push_back({lo, hi});
    }
    return json{{"feature_bounds", bounds},
                {"target_bounds", {p.target_bounds.first, p.target_bounds.second}},
                {"combo_id", p.combo_id},
                {"feature_names", p.feature_names}};
}

scs::NormParams norm_from_json(const json& j) {
    scs::NormParams p;
    for (const auto& b : j.at("feature_bounds")) {
        p.feature_bounds.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
    }
    p.target_bounds = {j.at("target_bounds").at(0).get<double>(),
                       j.at("target_bounds").at(1).get<double>()};
    p.combo_id = j.at("combo_id").get<int>();
    p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    return p;
}

json violations_to_json(const scs::ValidationReport& report) {
    json arr = json::array();
    for (const auto& v : report.violations) {
        arr.push_back({{"row", v.row},
                       {"id", v.id},
                       {"field", v.field},
                       {"value", v.value},
                       {"min", v.min},
                       {"max", v.max}});
    }
    return arr;
}

/// Train/test quality block: r and r² (scale invariant), plus MSE/MAE both
/// in physical kN units and on the normalized [0,1] scale as percentages.
json metric_block(const std::vector<double>& y_norm, const std::vector<double>& p_norm,
                  const std::vector<double>& y_kn, const std::vector<double>& p_kn) {
    const scs::MetricSet norm = scs::metric_set(y_norm, p_norm);
    const scs::MetricSet kn = scs::metric_set(y_kn, p_kn);
    return json{{"n", kn.n},
                {"r", kn.r},
                {"r_squared", kn.r * kn.r},
                {"mse_kn2", kn.mse},
                {"mae_kn", kn.mae},
                {"mse_norm_pct", norm.mse * 100.0},
                {"mae_norm_pct", norm.mae * 100.0}};
}

// ---------------------------------------------------------------------------
// stats

struct StatsOpts {
    std::string csv;
};

void run_stats(const GlobalOpts& g, const StatsOpts& o) {
    const scs::Dataset ds = scs::load_csv(o.csv);
    const scs::RangeSpec ranges = scs::summarize(ds);
    const scs::CorrelationMatrix corr = scs::correlation_matrix(ds);
    const scs::ValidationReport check = scs::validate_ranges(ds, scs::reference_ranges());

    std::printf("dataset: %s (%zu samples)\n\n", o.csv.c_str(), ds.size());
    std::printf("%-12s %12s %12s %12s %12s %12s %8s\n", "parameter", "min", "max", "diff", "avg",
                "std", "cov");
    for (const auto& [name, st] : ranges.params) {
        std::printf("%-12s %12.6g %12.6g %12.6g %12.6g %12.6g %8.4f\n", name.c_str(), st.min,
                    st.max, st.diff(), st.avg, st.std_dev, st.cov);
    }

    std::printf("\ncorrelation matrix\n%-12s", "");
    for (const auto& label : corr.labels) {
        std::printf(" %11s", label.c_str());
    }
    std::printf("\n");
    for (std::size_t i = 0; i < corr.labels.size(); ++i) {
        std::printf("%-12s", corr.labels[i].c_str());
        for (std::size_t j = 0; j < corr.labels.size(); ++j) {
            std::printf(" %11.4f", corr.values[i][j]);
        }
        std::printf("\n");
    }
    for (const auto& note : corr.notes) {
        std::printf("note: %s\n", note.c_str());
    }

    if (check.pass()) {
        std::printf("\nall samples are inside the reference parameter ranges\n");
    } else {
        std::printf("\n%zu value(s) outside the reference parameter ranges:\n",
                    check.violations.size());
        for (const auto& v : check.violations) {
            std::printf("  row %zu (id '%s'): %s = %g outside [%g, %g]\n", v.row + 1, v.id.c_str(),
                        v.field.c_str(), v.value, v.min, v.max);
        }
    }

    const fs::path dir = run_dir(g, "stats", csv_stem(o.csv));
    const json j{{"csv", o.csv},
                 {"n_samples", ds.size()},
                 {"ranges", scs::range_spec_to_json(ranges)},
                 {"correlation",
                  {{"labels", corr.labels}, {"values", corr.values}, {"notes", corr.notes}}},
                 {"reference_violations", violations_to_json(check)}};
    emit_primary_json(g, dir, "stats.json", j);
    scs::write_text_file(dir / "correlation.csv", scs::correlation_csv(corr));
    write_meta(dir, json{{"command", "stats"}, {"csv", o.csv}});
    std::printf("\nwrote %s\n", (dir / "stats.json").string().c_str());
}

// ---------------------------------------------------------------------------
// predict

struct PredictOpts {
    std::string csv;
    std::vector<std::string> methods;
    bool ec2_size_cap = false;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (const auto& p : parts) {
        out += (out.empty() ? "" : sep) + p;
    }
    return out;
}

void run_predict(const GlobalOpts& g, const PredictOpts& o) {
    const scs::Dataset ds = scs::load_csv(o.csv);
    const std::vector<std::string> methods = o.methods.empty() ? scs::code_methods() : o.methods;

    std::string csv_out =
        "id,method,v_exp_kn,v_pred_kn,ratio,lambda_s,u_mm,rho_s,lambda_c,w_mm,warnings\n";
    json rows = json::array();
    std::printf("%-10s %-6s %12s %12s %8s  %s\n", "id", "method", "V_exp[kN]", "V_pred[kN]",
                "ratio", "warnings");
    for (const auto& s : ds.samples) {
        for (const auto& m : methods) {
            const scs::CodePrediction p = scs::predict(s, m, o.ec2_size_cap);
            const double ratio = s.v_exp / p.v_kn;
            const bool is_aci = p.method == "ACI";
            const bool is_ec2 = p.method == "EC2";
            const bool is_cfp = p.method == "CFP";

            csv_out += s.id + ',' + p.method;
            csv_out += ',' + scs::format_double(s.v_exp);
            csv_out += ',' + scs::format_double(p.v_kn);
            csv_out += ',' + scs::format_double(ratio);
            csv_out += ',' + (is_aci ? scs::format_double(p.lambda_s) : std::string());
            csv_out += ',' + scs::format_double(p.u_mm);
            csv_out += ',' + (is_ec2 ? scs::format_double(p.rho_s) : std::string());
            csv_out += ',' + (is_cfp ? scs::format_double(p.lambda_c) : std::string());
            csv_out += ',' + (is_cfp ? scs::format_double(p.w_mm) : std::string());
            csv_out += ',' + join(p.warnings, "; ");
            csv_out += '\n';

            json row{{"id", s.id},         {"method", p.method},
                     {"v_exp_kn", s.v_exp}, {"v_kn", p.v_kn},
                     {"v_newtons", p.v_newtons}, {"ratio", ratio},
                     {"warnings", p.warnings}};
            if (is_aci) {
                row["lambda_s"] = p.lambda_s;
                row["u_mm"] = p.u_mm;
            }
            if (is_ec2) {
                row["u_mm"] = p.u_mm;
                row["rho_s"] = p.rho_s;
            }
            if (is_cfp) {
                row["lambda_c"] = p.lambda_c;
                row["w_mm"] = p.w_mm;
                row["u_mm"] = p.u_mm;
            }
            rows.push_back(std::move(row));

            std::printf("%-10s %-6s %12.2f %12.2f %8.4f  %s\n", s.id.c_str(), p.method.c_str(),
                        s.v_exp, p.v_kn, ratio, join(p.warnings, "; ").c_str());
        }
    }

    std::vector<std::string> tags;
    for (const auto& m : methods) {
        tags.push_back(slug(m));
    }
    const fs::path dir = run_dir(g, "predict", csv_stem(o.csv) + "-" + join(tags, "-"));
    const json j{{"csv", o.csv},
                 {"methods", methods},
                 {"ec2_size_cap", o.ec2_size_cap},
                 {"predictions", rows}};
    emit_primary_json(g, dir, "predictions.json", j);
    scs::write_text_file(dir / "predictions.csv", csv_out);
    write_meta(dir, json{{"command", "predict"},
                         {"csv", o.csv},
                         {"methods", methods},
                         {"ec2_size_cap", o.ec2_size_cap}});
    std::printf("\nwrote %s\n", (dir / "predictions.csv").string().c_str());
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
    std::string csv;
    int combo_id = 1;
    std::string model;  ///< fnn | psofnn | batfnn
    double train_fraction = 0.7;
    int members = -1;     ///< population/swarm size; -1 = combination default
    int iterations = -1;  ///< -1 = combination default
    double bound = 3.0;   ///< weight search box half-width
    scs::PsoConfig pso;
    scs::BatConfig bat;
    scs::TrainConfig backprop;
};

std::string model_kind(const std::string& model) {
    std::string lower;
    for (char c : model) {
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (lower == "fnn") {
        return "FNN";
    }
    if (lower == "psofnn") {
        return "PSOFNN";
    }
    if (lower == "batfnn") {
        return "BATFNN";
    }
    throw std::invalid_argument("unknown model '" + model +
                                "'; valid models: fnn, psofnn, batfnn");
}

void run_train(const GlobalOpts& g, const TrainOpts& o) {
    if (!g.seed_set) {
        throw std::runtime_error("train is stochastic: pass --seed <n>");
    }
    const std::string kind = model_kind(o.model);
    const scs::ScsCombo& combo = scs::combo(o.combo_id);
    const scs::Dataset ds = scs::load_csv(o.csv);

    const scs::FeatureMatrix raw = scs::build_features(ds, combo);
    const auto [normed, norm] = scs::normalize(raw);
    const auto [train_idx, test_idx] = scs::split_indices(ds.size(), o.train_fraction, g.seed);
    const scs::FeatureMatrix train_norm = scs::take_rows(normed, train_idx);
    const scs::FeatureMatrix test_norm = scs::take_rows(normed, test_idx);
    const scs::FeatureMatrix train_raw = scs::take_rows(raw, train_idx);
    const scs::FeatureMatrix test_raw = scs::take_rows(raw, test_idx);

    const std::vector<int> sizes = {static_cast<int>(raw.cols), combo.hidden_units, 1};

    scs::Network net;
    json fit_config;
    json fit_extra;
    std::string curve_name;
    std::string curve_csv;

    if (kind == "FNN") {
        scs::TrainConfig cfg = o.backprop;
        cfg.seed = g.seed;
        if (o.iterations >= 0) {
            cfg.max_epochs = o.iterations;
        }
        const scs::TrainResult result =
            scs::train_backprop(scs::init_network(sizes, g.seed), train_norm, test_norm, cfg);
        net = result.net;
        fit_config = json{{"learning_rate", cfg.learning_rate},
                          {"max_epochs", cfg.max_epochs},
                          {"goal", cfg.goal},
                          {"max_validation_failures", cfg.max_validation_failures}};
        fit_extra = json{{"stop_reason", result.stop_reason}, {"epochs_run", result.epochs_run}};
        curve_name = "history.csv";
        curve_csv = "epoch,train_mse\n";
        for (std::size_t i = 0; i < result.history.size(); ++i) {
            curve_csv += std::to_string(i + 1) + ',' + scs::format_double(result.history[i]) + '\n';
        }
        std::printf("FNN combo %d: %d epochs (%s), final train MSE %.6g\n", combo.id,
                    result.epochs_run, result.stop_reason.c_str(),
                    result.history.empty() ? 0.0 : result.history.back());
    } else {
        const scs::Objective obj = scs::fnn_weight_objective(train_norm, sizes, o.bound);
        scs::OptimizerTrace trace;
        if (kind == "PSOFNN") {
            scs::PsoConfig cfg = o.pso;
            cfg.swarm_size = o.members >= 0 ? o.members : combo.pso_members;
            cfg.max_iterations = o.iterations >= 0 ? o.iterations : combo.iterations;
            cfg.seed = g.seed;
            trace = scs::optimize_pso(obj, cfg, g.threads);
            fit_config = scs::pso_config_to_json(cfg);
        } else {
            scs::BatConfig cfg = o.bat;
            cfg.population = o.members >= 0 ? o.members : combo.bat_members;
            cfg.max_iterations = o.iterations >= 0 ? o.iterations : combo.iterations;
            cfg.seed = g.seed;
            trace = scs::optimize_bat(obj, cfg, g.threads);
            fit_config = scs::bat_config_to_json(cfg);
        }
        fit_config["bound"] = o.bound;
        net = scs::decode_weights(sizes, trace.best_vector);
        net.init_seed = g.seed;
        fit_extra = json{{"best_fitness", trace.best_fitness}, {"evaluations", trace.evaluations}};
        curve_name = "trace.csv";
        curve_csv = "iteration,best_fitness\n";
        for (std::size_t i = 0; i < trace.best_history.size(); ++i) {
            curve_csv +=
                std::to_string(i + 1) + ',' + scs::format_double(trace.best_history[i]) + '\n';
        }
        const fs::path dir =
            run_dir(g, "train", csv_stem(o.csv) + "-c" + std::to_string(combo.id) + "-" +
                                    slug(kind) + "-s" + std::to_string(g.seed));
        scs::write_text_file(dir / "trace.json", dump(scs::trace_to_json(trace, fit_config)));
        std::printf("%s combo %d: %zu evaluations, best train MSE %.6g\n", kind.c_str(), combo.id,
                    trace.evaluations, trace.best_fitness);
    }

    const auto predict_both = [&](const scs::FeatureMatrix& m_norm) {
        std::vector<double> p_norm = scs::forward_batch(net, m_norm);
        std::vector<double> p_kn;
        p_kn.reserve(p_norm.size());
        for (double y : p_norm) {
            p_kn.push_back(scs::denormalize_target(y, norm));
        }
        return std::pair{std::move(p_norm), std::move(p_kn)};
    };
    const auto [train_pred_norm, train_pred_kn] = predict_both(train_norm);
    const auto [test_pred_norm, test_pred_kn] = predict_both(test_norm);
    const json train_metrics =
        metric_block(train_norm.target, train_pred_norm, train_raw.target, train_pred_kn);
    const json test_metrics =
        metric_block(test_norm.target, test_pred_norm, test_raw.target, test_pred_kn);

    const fs::path dir = run_dir(g, "train", csv_stem(o.csv) + "-c" + std::to_string(combo.id) +
                                                 "-" + slug(kind) + "-s" + std::to_string(g.seed));
    const json model_json{{"kind", kind},
                          {"combo_id", combo.id},
                          {"feature_names", combo.feature_names},
                          {"csv", o.csv},
                          {"seed", g.seed},
                          {"train_fraction", o.train_fraction},
                          {"split", {{"train_rows", train_idx.size()}, {"test_rows", test_idx.size()}}},
                          {"fit", fit_config},
                          {"network", scs::network_to_json(net)},
                          {"norm", norm_to_json(norm)}};
    emit_primary_json(g, dir, "model.json", model_json);
    scs::write_text_file(dir / curve_name, curve_csv);

    json metrics{{"kind", kind},   {"combo_id", combo.id},
                 {"seed", g.seed}, {"train", train_metrics},
                 {"test", test_metrics}};
    for (auto it = fit_extra.begin(); it != fit_extra.end(); ++it) {
        metrics[it.key()] = it.value();
    }
    scs::write_text_file(dir / "metrics.json", dump(metrics));
    write_meta(dir, json{{"command", "train"},
                         {"csv", o.csv},
                         {"combo_id", combo.id},
                         {"model", kind},
                         {"seed", g.seed},
                         {"train_fraction", o.train_fraction},
                         {"fit", fit_config}});

    std::printf("train: n=%zu r=%.4f MSE=%.6g kN²  |  test: n=%zu r=%.4f MSE=%.6g kN²\n",
                train_idx.size(), train_metrics["r"].get<double>(),
                train_metrics["mse_kn2"].get<double>(), test_idx.size(),
                test_metrics["r"].get<double>(), test_metrics["mse_kn2"].get<double>());
    std::printf("wrote %s\n", (dir / "model.json").string().c_str());
}

// ---------------------------------------------------------------------------
// compare

struct CompareOpts {
    std::string csv;
    std::vector<std::string> model_paths;
    bool ec2_size_cap = false;
    double band = 0.25;
};

struct LoadedModel {
    std::string path;
    std::string kind;
    int combo_id = 0;
    scs::Network net;
    scs::NormParams norm;
};

LoadedModel load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(scs::read_text_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error("model file '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        LoadedModel m;
        m.path = path;
        m.kind = j.at("kind").get<std::string>();
        m.combo_id = j.at("combo_id").get<int>();
        m.net = scs::network_from_json(j.at("network"));
        m.norm = norm_from_json(j.at("norm"));
        const auto& valid = scs::report_methods();
        if (std::find(valid.begin(), valid.end(), m.kind) == valid.end()) {
            throw std::runtime_error("model file '" + path + "' has unknown kind '" + m.kind +
                                     "'");
        }
        return m;
    } catch (const json::exception& e) {
        throw std::runtime_error("model file '" + path + "' is missing fields: " + e.what());
    }
}

void run_compare(const GlobalOpts& g, const CompareOpts& o) {
    const scs::Dataset ds = scs::load_csv(o.csv);

    std::vector<LoadedModel> models;
    for (const auto& path : o.model_paths) {
        models.push_back(load_model(path));
    }
    for (std::size_t i = 1; i < models.size(); ++i) {
        const auto& a = models[0].norm.target_bounds;
        const auto& b = models[i].norm.target_bounds;
        if (a != b) {
            throw std::runtime_error(
                "normalization mismatch: model '" + models[0].path + "' has target bounds [" +
                scs::format_double(a.first) + ", " + scs::format_double(a.second) +
                "] but model '" + models[i].path + "' has [" + scs::format_double(b.first) + ", " +
                scs::format_double(b.second) + "]");
        }
    }

    std::vector<scs::MethodPredictions> predictions;
    for (const auto& method : scs::code_methods()) {
        scs::MethodPredictions p;
        p.method = method;
        for (const auto& s : ds.samples) {
            p.v_pred_kn.push_back(scs::predict(s, method, o.ec2_size_cap).v_kn);
        }
        predictions.push_back(std::move(p));
    }
    for (const auto& m : models) {
        const scs::FeatureMatrix raw = scs::build_features(ds, scs::combo(m.combo_id));
        if (raw.feature_names != m.norm.feature_names) {
            throw std::runtime_error("normalization mismatch: model '" + m.path +
                                     "' stores features [" + join(m.norm.feature_names, ", ") +
                                     "] but combination " + std::to_string(m.combo_id) +
                                     " builds [" + join(raw.feature_names, ", ") + "]");
        }
        const scs::FeatureMatrix normed = scs::apply_normalization(raw, m.norm);
        scs::MethodPredictions p;
        p.method = m.kind;
        for (double y : scs::forward_batch(m.net, normed)) {
            p.v_pred_kn.push_back(scs::denormalize_target(y, m.norm));
        }
        predictions.push_back(std::move(p));
    }

    if (ds.samples.empty()) {
        throw std::runtime_error("dataset '" + o.csv + "' has no samples to compare");
    }
    std::pair<double, double> target_bounds;
    if (!models.empty()) {
        target_bounds = models[0].norm.target_bounds;
    } else {
        const auto [lo, hi] = std::minmax_element(ds.samples.begin(), ds.samples.end(),
                                                  [](const scs::SlabSample& a,
                                                     const scs::SlabSample& b) {
                                                      return a.v_exp < b.v_exp;
                                                  });
        target_bounds = {lo->v_exp, hi->v_exp};
    }

    const scs::EvaluationReport report = scs::compare(ds, predictions, target_bounds, o.band);
    const scs::CorrelationMatrix corr = scs::correlation_matrix(ds);

    std::printf("%zu samples, %zu methods ranked\n\n", report.n_samples, report.ranking.size());
    std::printf("%-8s %8s %8s %12s %10s %8s %8s %8s  %s\n", "method", "r", "r^2", "MSE[kN²]",
                "MAE[kN]", "mean", "std", "min/max", "bias");
    for (const auto& name : report.ranking) {
        const auto it = std::find_if(report.methods.begin(), report.methods.end(),
                                     [&](const scs::MethodEvaluation& ev) {
                                         return ev.method == name;
                                     });
        std::printf("%-8s %8.4f %8.4f %12.5g %10.4g %8.4f %8.4f %4.2f/%4.2f  %s\n", name.c_str(),
                    it->metrics_kn.r, it->metrics_kn.r * it->metrics_kn.r, it->metrics_kn.mse,
                    it->metrics_kn.mae, it->ratios.mean, it->ratios.std_dev, it->ratios.min,
                    it->ratios.max, it->bias_label.c_str());
    }
    for (const auto& ev : report.methods) {
        if (!ev.present) {
            std::printf("%-8s (absent: no model supplied)\n", ev.method.c_str());
        }
    }

    const fs::path dir = run_dir(
        g, "compare", csv_stem(o.csv) + "-" + std::to_string(models.size()) + "models");
    json j = scs::report_to_json(report);
    j["csv"] = o.csv;
    j["models"] = o.model_paths;
    j["ec2_size_cap"] = o.ec2_size_cap;
    j["correlation"] = {{"labels", corr.labels}, {"values", corr.values}, {"notes", corr.notes}};
    emit_primary_json(g, dir, "report.json", j);
    scs::write_text_file(dir / "metrics.csv", scs::metrics_csv(report));
    scs::write_text_file(dir / "correlation.csv", scs::correlation_csv(corr));
    for (const auto& ev : report.methods) {
        if (!ev.present) {
            continue;
        }
        const std::string tag = slug(ev.method);
        scs::write_text_file(dir / ("ratio_pdf_" + tag + ".csv"), scs::ratio_pdf_csv(ev.ratios));
        for (const auto& [param, rows] : ev.scatter) {
            scs::write_text_file(dir / ("scatter_" + tag + "_" + param + ".csv"),
                                 scs::scatter_csv(rows));
        }
    }
    write_meta(dir, json{{"command", "compare"},
                         {"csv", o.csv},
                         {"models", o.model_paths},
                         {"ec2_size_cap", o.ec2_size_cap},
                         {"band", o.band}});
    std::printf("\nwrote %s\n", (dir / "report.json").string().c_str());
}

// ---------------------------------------------------------------------------
// synthesize

struct SynthOpts {
    std::size_t n = 0;
    double noise = 0.02;
    std::string ranges_path;
};

void run_synthesize(const GlobalOpts& g, const SynthOpts& o) {
    if (!g.seed_set) {
        throw std::runtime_error("synthesize is stochastic: pass --seed <n>");
    }
    scs::RangeSpec spec;
    if (o.ranges_path.empty()) {
        spec = scs::reference_ranges();
    } else {
        try {
            spec = scs::range_spec_from_json(json::parse(scs::read_text_file(o.ranges_path)));
        } catch (const json::exception& e) {
            throw std::runtime_error("range file '" + o.ranges_path + "' is not valid JSON: " +
                                     e.what());
        }
    }

    const scs::Dataset ds = scs::synthesize(o.n, spec, g.seed, o.noise);
    const fs::path dir =
        run_dir(g, "synthesize", "n" + std::to_string(o.n) + "-s" + std::to_string(g.seed));
    scs::write_csv(ds, dir / "synthetic.csv");
    const json summary{{"n_samples", ds.size()},
                       {"seed", g.seed},
                       {"noise", o.noise},
                       {"ranges", scs::range_spec_to_json(spec)},
                       {"generated", scs::range_spec_to_json(scs::summarize(ds))}};
    emit_primary_json(g, dir, "summary.json", summary);
    write_meta(dir, json{{"command", "synthesize"},
                         {"n", o.n},
                         {"seed", g.seed},
                         {"noise", o.noise},
                         {"ranges", o.ranges_path.empty() ? json("reference") : json(o.ranges_path)}});
    std::printf("wrote %zu samples to %s\n", ds.size(), (dir / "synthetic.csv").string().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Punching shear strength toolkit for slab-column connections: design-code "
                 "equations (ACI 318-19, Eurocode 2, CFP), neural models trained by "
                 "backpropagation, PSO, or the bat algorithm, and comparative evaluation."};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out_root, "Root output directory")->capture_default_str();
    app.add_option("--json", g.json_dir,
                   "Directory receiving a copy of the primary JSON artifact");
    app.add_option("--label", g.label, "Run directory name (default: derived from the inputs)");
    auto* seed_opt = app.add_option("--seed", g.seed, "Seed for stochastic commands");
    app.add_option("--threads", g.threads,
                   "Worker threads for population evaluation (never changes results)")
        ->check(CLI::PositiveNumber);

    StatsOpts stats_opts;
    auto* stats = app.add_subcommand(
        "stats", "Summarize a dataset: parameter ranges, correlation matrix, range check");
    stats->fallthrough();
    stats->add_option("--csv", stats_opts.csv, "Dataset CSV file")->required();
    stats->callback([&] { run_stats(g, stats_opts); });

    PredictOpts predict_opts;
    auto* predict = app.add_subcommand(
        "predict", "Design-code capacity predictions (ACI, EC2, CFP) per sample");
    predict->fallthrough();
    predict->add_option("--csv", predict_opts.csv, "Dataset CSV file")->required();
    predict->add_option("--method", predict_opts.methods,
                        "Method tag (repeatable; default: all of ACI, EC2, CFP)");
    predict->add_flag("--ec2-size-cap", predict_opts.ec2_size_cap,
                      "Cap the EC2 size term at 2");
    predict->callback([&] { run_predict(g, predict_opts); });

    TrainOpts t;
    auto* train = app.add_subcommand(
        "train", "Fit a neural model (fnn, psofnn, batfnn) on one feature combination");
    train->fallthrough();
    train->add_option("--csv", t.csv, "Dataset CSV file")->required();
    train->add_option("--combo", t.combo_id, "Feature combination id (1-7)")->required();
    train->add_option("--model", t.model, "fnn | psofnn | batfnn")->required();
    train->add_option("--train-fraction", t.train_fraction, "Training split fraction")
        ->capture_default_str();
    train->add_option("--members", t.members,
                      "Swarm/population size (default: the combination's value)");
    train->add_option("--iterations", t.iterations,
                      "Optimizer iterations, or max epochs for fnn (default: combination/2000)");
    train->add_option("--bound", t.bound, "Weight search box half-width")->capture_default_str();
    train->add_option("--w", t.pso.w, "PSO inertia weight")->capture_default_str();
    train->add_option("--c1", t.pso.c1, "PSO cognitive weight")->capture_default_str();
    train->add_option("--c2", t.pso.c2, "PSO social weight")->capture_default_str();
    train->add_option("--vfrac", t.pso.velocity_fraction, "PSO velocity clamp fraction")
        ->capture_default_str();
    train->add_option("--fmin", t.bat.f_min, "BAT minimum frequency")->capture_default_str();
    train->add_option("--fmax", t.bat.f_max, "BAT maximum frequency")->capture_default_str();
    train->add_option("--loudness", t.bat.loudness, "BAT initial loudness")->capture_default_str();
    train->add_option("--pulse-rate", t.bat.pulse_rate, "BAT initial pulse rate")
        ->capture_default_str();
    train->add_option("--alpha", t.bat.alpha, "BAT loudness decay")->capture_default_str();
    train->add_option("--gamma", t.bat.gamma, "BAT pulse-rate growth")->capture_default_str();
    train->add_option("--lr", t.backprop.learning_rate, "fnn learning rate")
        ->capture_default_str();
    train->add_option("--goal", t.backprop.goal, "fnn MSE goal (negative disables)")
        ->capture_default_str();
    train->add_option("--max-fail", t.backprop.max_validation_failures,
                      "fnn validation-failure budget")
        ->capture_default_str();
    train->callback([&, seed_opt] {
        g.seed_set = seed_opt->count() > 0;
        run_train(g, t);
    });

    CompareOpts c;
    auto* cmp = app.add_subcommand(
        "compare", "Evaluate design codes and trained models against one dataset");
    cmp->fallthrough();
    cmp->add_option("--csv", c.csv, "Dataset CSV file")->required();
    cmp->add_option("--model", c.model_paths, "Trained model JSON (repeatable)");
    cmp->add_flag("--ec2-size-cap", c.ec2_size_cap, "Cap the EC2 size term at 2");
    cmp->add_option("--band", c.band, "Scatter flag band around ratio 1")->capture_default_str();
    cmp->callback([&] { run_compare(g, c); });

    SynthOpts s;
    auto* synth = app.add_subcommand(
        "synthesize", "Generate a synthetic dataset inside documented parameter ranges");
    synth->fallthrough();
    synth->add_option("--n", s.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    synth->add_option("--noise", s.noise, "Relative noise amplitude")->capture_default_str();
    synth->add_option("--ranges", s.ranges_path,
                      "Range spec JSON (default: built-in reference ranges)");
    synth->callback([&, seed_opt] {
        g.seed_set = seed_opt->count() > 0;
        run_synthesize(g, s);
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
