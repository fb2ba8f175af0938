#include "scs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "scs/io_util.hpp"

namespace scs {

namespace {

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    return sum / static_cast<double>(v.size());
}

} // namespace

MetricSet metric_set(const std::vector<double>& y_exp, const std::vector<double>& y_pred) {
    if (y_exp.size() != y_pred.size()) {
        throw std::invalid_argument("metric series length mismatch: " +
                                    std::to_string(y_exp.size()) + " vs " +
                                    std::to_string(y_pred.size()));
    }
    if (y_exp.size() < 2) {
        throw std::invalid_argument("metrics need at least 2 samples");
    }

    MetricSet m;
    m.n = y_exp.size();
    const double n = static_cast<double>(m.n);
    const double mean_exp = mean_of(y_exp);
    const double mean_pred = mean_of(y_pred);

    double sq = 0.0;
    double ab = 0.0;
    double cov = 0.0;
    double var_exp = 0.0;
    double var_pred = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        const double diff = y_exp[i] - y_pred[i];
        sq += diff * diff;
        ab += std::abs(diff);
        const double de = y_exp[i] - mean_exp;
        const double dp = y_pred[i] - mean_pred;
        cov += de * dp;
        var_exp += de * de;
        var_pred += dp * dp;
    }
    m.mse = sq / n;
    m.mae = ab / n;
    if (var_exp == 0.0) {
        throw std::invalid_argument("experimental series has zero variance; r is undefined");
    }
    if (var_pred == 0.0) {
        throw std::invalid_argument("predicted series has zero variance; r is undefined");
    }
    m.r = cov / std::sqrt(var_exp * var_pred);

    // Power-mean inequality; the slack absorbs floating-point rounding.
    if (m.mae * m.mae > m.mse * (1.0 + 1e-12) + 1e-300) {
        throw std::logic_error("metric invariant mae^2 <= mse violated");
    }
    return m;
}

RatioStats ratio_stats(const std::vector<double>& y_exp, const std::vector<double>& y_pred) {
    if (y_exp.size() != y_pred.size()) {
        throw std::invalid_argument("ratio series length mismatch: " +
                                    std::to_string(y_exp.size()) + " vs " +
                                    std::to_string(y_pred.size()));
    }
    if (y_exp.empty()) {
        throw std::invalid_argument("ratio statistics need at least 1 sample");
    }

    RatioStats rs;
    rs.ratios.reserve(y_exp.size());
    for (std::size_t i = 0; i < y_exp.size(); ++i) {
        if (!(y_pred[i] > 0.0)) {
            throw std::invalid_argument("non-positive prediction at index " + std::to_string(i) +
                                        ": " + format_double(y_pred[i]));
        }
        if (!(y_exp[i] > 0.0)) {
            throw std::invalid_argument("non-positive experimental value at index " +
                                        std::to_string(i) + ": " + format_double(y_exp[i]));
        }
        rs.ratios.push_back(y_exp[i] / y_pred[i]);
    }

    rs.mean = mean_of(rs.ratios);
    double ss = 0.0;
    for (double r : rs.ratios) {
        const double d = r - rs.mean;
        ss += d * d;
    }
    rs.std_dev = std::sqrt(ss / static_cast<double>(rs.ratios.size()));
    rs.min = *std::min_element(rs.ratios.begin(), rs.ratios.end());
    rs.max = *std::max_element(rs.ratios.begin(), rs.ratios.end());

    if (rs.std_dev == 0.0) {
        rs.degenerate = true;
        return rs;
    }
    constexpr std::size_t kPoints = 201;
    const double lo = rs.mean - 4.0 * rs.std_dev;
    const double hi = rs.mean + 4.0 * rs.std_dev;
    const double step = (hi - lo) / static_cast<double>(kPoints - 1);
    const double norm = 1.0 / (rs.std_dev * std::sqrt(2.0 * std::numbers::pi));
    rs.pdf_points.reserve(kPoints);
    for (std::size_t j = 0; j < kPoints; ++j) {
        const double x = lo + static_cast<double>(j) * step;
        const double z = (x - rs.mean) / rs.std_dev;
        rs.pdf_points.emplace_back(x, norm * std::exp(-0.5 * z * z));
    }
    return rs;
}

const std::vector<std::string>& scatter_params() {
    static const std::vector<std::string> params = {kParamD, kParamAvD, kParamFc, kParamRho};
    return params;
}

std::vector<ScatterRow> parametric_scatter(const Dataset& ds, const std::vector<double>& ratios,
                                           const std::string& param, double band) {
    if (ds.samples.size() != ratios.size()) {
        throw std::invalid_argument("scatter needs one ratio per sample: " +
                                    std::to_string(ds.samples.size()) + " samples vs " +
                                    std::to_string(ratios.size()) + " ratios");
    }
    std::vector<ScatterRow> rows;
    rows.reserve(ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto value = sample_param(ds.samples[i], param);
        if (!value.has_value()) {
            throw std::invalid_argument("sample '" + ds.samples[i].id +
                                        "' has no value for parameter '" + param + "'");
        }
        ScatterRow row;
        row.sample_id = ds.samples[i].id;
        row.param_value = *value;
        row.ratio = ratios[i];
        row.flagged = std::abs(ratios[i] - 1.0) > band;
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ScatterRow& a, const ScatterRow& b) {
        return a.param_value < b.param_value;
    });
    return rows;
}

CorrelationMatrix correlation_matrix(const Dataset& ds) {
    if (ds.samples.size() < 2) {
        throw std::invalid_argument("correlation matrix needs at least 2 samples");
    }
    CorrelationMatrix m;
    std::vector<std::string> candidates = {kParamD, kParamC, kParamAvD, kParamRho};
    if (ds.all_have_m_fs()) {
        candidates.push_back(kParamMfs);
    } else {
        m.notes.push_back(std::string(kParamMfs) + " dropped: not present on every sample");
    }
    candidates.insert(candidates.end(), {kParamFy, kParamFc, kParamV});

    std::vector<std::vector<double>> columns;
    for (const auto& key : candidates) {
        std::vector<double> col;
        col.reserve(ds.samples.size());
        for (const auto& s : ds.samples) {
            col.push_back(*sample_param(s, key));
        }
        const double mean = mean_of(col);
        double var = 0.0;
        for (double v : col) {
            var += (v - mean) * (v - mean);
        }
        if (var == 0.0) {
            m.notes.push_back(key + " dropped: constant column");
            continue;
        }
        m.labels.push_back(key);
        columns.push_back(std::move(col));
    }

    const std::size_t k = columns.size();
    m.values.assign(k, std::vector<double>(k, 0.0));
    std::vector<double> means(k);
    std::vector<double> norms(k);
    for (std::size_t i = 0; i < k; ++i) {
        means[i] = mean_of(columns[i]);
        double var = 0.0;
        for (double v : columns[i]) {
            var += (v - means[i]) * (v - means[i]);
        }
        norms[i] = std::sqrt(var);
    }
    for (std::size_t i = 0; i < k; ++i) {
        m.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            double cov = 0.0;
            for (std::size_t s = 0; s < columns[i].size(); ++s) {
                cov += (columns[i][s] - means[i]) * (columns[j][s] - means[j]);
            }
            const double r = cov / (norms[i] * norms[j]);
            m.values[i][j] = r;
            m.values[j][i] = r;
        }
    }
    return m;
}

const std::vector<std::string>& report_methods() {
    static const std::vector<std::string> methods = {"ACI",    "EC2",    "CFP",
                                                     "FNN",    "PSOFNN", "BATFNN"};
    return methods;
}

EvaluationReport compare(const Dataset& ds, const std::vector<MethodPredictions>& predictions,
                         std::pair<double, double> target_bounds, double band) {
    const auto& canonical = report_methods();
    std::set<std::string> seen;
    for (const auto& p : predictions) {
        if (std::find(canonical.begin(), canonical.end(), p.method) == canonical.end()) {
            std::string valid;
            for (const auto& mth : canonical) {
                valid += (valid.empty() ? "" : ", ") + mth;
            }
            throw std::invalid_argument("unknown method '" + p.method + "'; valid methods: " +
                                        valid);
        }
        if (!seen.insert(p.method).second) {
            throw std::invalid_argument("duplicate predictions for method '" + p.method + "'");
        }
        if (p.v_pred_kn.size() != ds.samples.size()) {
            throw std::invalid_argument("method '" + p.method + "' has " +
                                        std::to_string(p.v_pred_kn.size()) +
                                        " predictions but the dataset has " +
                                        std::to_string(ds.samples.size()) + " samples");
        }
    }
    if (!(target_bounds.second > target_bounds.first)) {
        throw std::invalid_argument("target bounds must satisfy min < max");
    }

    std::vector<double> y_exp;
    y_exp.reserve(ds.samples.size());
    for (const auto& s : ds.samples) {
        y_exp.push_back(s.v_exp);
    }
    const auto normalize_series = [&](const std::vector<double>& v) {
        std::vector<double> out;
        out.reserve(v.size());
        const double lo = target_bounds.first;
        const double range = target_bounds.second - target_bounds.first;
        for (double x : v) {
            out.push_back((x - lo) / range);
        }
        return out;
    };
    const std::vector<double> y_exp_norm = normalize_series(y_exp);

    EvaluationReport report;
    report.n_samples = ds.samples.size();
    report.band = band;
    report.target_bounds = target_bounds;

    for (const auto& method : canonical) {
        MethodEvaluation ev;
        ev.method = method;
        const auto it = std::find_if(predictions.begin(), predictions.end(),
                                     [&](const MethodPredictions& p) { return p.method == method; });
        if (it == predictions.end()) {
            report.methods.push_back(std::move(ev));
            continue;
        }
        ev.present = true;
        try {
            ev.metrics_kn = metric_set(y_exp, it->v_pred_kn);
            ev.metrics_norm = metric_set(y_exp_norm, normalize_series(it->v_pred_kn));
            ev.ratios = ratio_stats(y_exp, it->v_pred_kn);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("method '" + method + "': " + e.what());
        }
        if (ev.ratios.mean > 1.0) {
            ev.bias_label = "underestimates";
        } else if (ev.ratios.mean < 1.0) {
            ev.bias_label = "overestimates";
        } else {
            ev.bias_label = "unbiased";
        }
        for (const auto& param : scatter_params()) {
            ev.scatter[param] = parametric_scatter(ds, ev.ratios.ratios, param, band);
        }
        report.methods.push_back(std::move(ev));
    }

    std::vector<const MethodEvaluation*> present;
    for (const auto& ev : report.methods) {
        if (ev.present) {
            present.push_back(&ev);
        }
    }
    std::sort(present.begin(), present.end(),
              [](const MethodEvaluation* a, const MethodEvaluation* b) {
                  if (a->metrics_kn.r != b->metrics_kn.r) {
                      return a->metrics_kn.r > b->metrics_kn.r;
                  }
                  if (a->metrics_kn.mse != b->metrics_kn.mse) {
                      return a->metrics_kn.mse < b->metrics_kn.mse;
                  }
                  return a->method < b->method;
              });
    for (const auto* ev : present) {
        report.ranking.push_back(ev->method);
    }
    return report;
}

namespace {

nlohmann::json metric_json(const MetricSet& kn, const MetricSet& norm) {
    return nlohmann::json{{"n", kn.n},
                          {"r", kn.r},
                          {"r_squared", kn.r * kn.r},
                          {"kn", {{"mse", kn.mse}, {"mae", kn.mae}}},
                          {"normalized",
                           {{"mse", norm.mse},
                            {"mae", norm.mae},
                            {"mse_percent", norm.mse * 100.0},
                            {"mae_percent", norm.mae * 100.0}}}};
}

nlohmann::json ratio_json(const RatioStats& rs) {
    nlohmann::json j{{"mean", rs.mean}, {"std", rs.std_dev},        {"min", rs.min},
                     {"max", rs.max},   {"degenerate", rs.degenerate}};
    j["values"] = rs.ratios;
    if (!rs.degenerate) {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& [x, density] : rs.pdf_points) {
            points.push_back({x, density});
        }
        j["normal_pdf"] = points;
    }
    return j;
}

nlohmann::json scatter_json(const std::vector<ScatterRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        arr.push_back({{"id", row.sample_id},
                       {"value", row.param_value},
                       {"ratio", row.ratio},
                       {"flagged", row.flagged}});
    }
    return arr;
}

} // namespace

nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json methods;
    for (const auto& ev : report.methods) {
        if (!ev.present) {
            methods[ev.method] = {{"present", false}};
            continue;
        }
        nlohmann::json scatter;
        for (const auto& [param, rows] : ev.scatter) {
            scatter[param] = scatter_json(rows);
        }
        methods[ev.method] = {{"present", true},
                              {"metrics", metric_json(ev.metrics_kn, ev.metrics_norm)},
                              {"ratio", ratio_json(ev.ratios)},
                              {"bias", ev.bias_label},
                              {"scatter", scatter}};
    }
    return nlohmann::json{{"n_samples", report.n_samples},
                          {"band", report.band},
                          {"target_bounds", {report.target_bounds.first, report.target_bounds.second}},
                          {"method_order", report_methods()},
                          {"methods", methods},
                          {"ranking", report.ranking}};
}

std::string metrics_csv(const EvaluationReport& report) {
    std::string out = "method,n,r,r_squared,mse_kn2,mae_kn,mse_norm_pct,mae_norm_pct,"
                      "ratio_mean,ratio_std,ratio_min,ratio_max,bias,rank\n";
    for (const auto& ev : report.methods) {
        if (!ev.present) {
            continue;
        }
        const auto rank_it = std::find(report.ranking.begin(), report.ranking.end(), ev.method);
        const auto rank = static_cast<std::size_t>(rank_it - report.ranking.begin()) + 1;
        out += ev.method;
        out += ',' + std::to_string(ev.metrics_kn.n);
        out += ',' + format_double(ev.metrics_kn.r);
        out += ',' + format_double(ev.metrics_kn.r * ev.metrics_kn.r);
        out += ',' + format_double(ev.metrics_kn.mse);
        out += ',' + format_double(ev.metrics_kn.mae);
        out += ',' + format_double(ev.metrics_norm.mse * 100.0);
        out += ',' + format_double(ev.metrics_norm.mae * 100.0);
        out += ',' + format_double(ev.ratios.mean);
        out += ',' + format_double(ev.ratios.std_dev);
        out += ',' + format_double(ev.ratios.min);
        out += ',' + format_double(ev.ratios.max);
        out += ',' + ev.bias_label;
        out += ',' + std::to_string(rank);
        out += '\n';
    }
    return out;
}

std::string ratio_pdf_csv(const RatioStats& stats) {
    std::string out = "x,density\n";
    for (const auto& [x, density] : stats.pdf_points) {
        out += format_double(x);
        out += ',' + format_double(density);
        out += '\n';
    }
    return out;
}

std::string scatter_csv(const std::vector<ScatterRow>& rows) {
    std::string out = "sample_id,param_value,ratio,flagged\n";
    for (const auto& row : rows) {
        out += row.sample_id;
        out += ',' + format_double(row.param_value);
        out += ',' + format_double(row.ratio);
        out += row.flagged ? ",1\n" : ",0\n";
    }
    return out;
}

std::string correlation_csv(const CorrelationMatrix& m) {
    std::string out = "parameter";
    for (const auto& label : m.labels) {
        out += ',' + label;
    }
    out += '\n';
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        out += m.labels[i];
        for (std::size_t j = 0; j < m.labels.size(); ++j) {
            out += ',' + format_double(m.values[i][j]);
        }
        out += '\n';
    }
    return out;
}

} // namespace scs
