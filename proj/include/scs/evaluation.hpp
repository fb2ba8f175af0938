#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scs/dataset.hpp"

namespace scs {

/// Regression quality of one prediction series against experiments.
struct MetricSet {
    double mse = 0.0;
    double mae = 0.0;
    double r = 0.0;  ///< Pearson correlation
    std::size_t n = 0;
};

/// mse, mae and Pearson r between experimental and predicted series.
/// Requires equal lengths >= 2 and nonzero variance in both series (r is
/// undefined otherwise; the error names the flat series). Checks the
/// power-mean inequality mae^2 <= mse on every result.
MetricSet metric_set(const std::vector<double>& y_exp, const std::vector<double>& y_pred);

/// Strength-ratio statistics: per-sample V_exp / V_pred with normal-fit
/// curve points for plotting.
struct RatioStats {
    std::vector<double> ratios;
    double mean = 0.0;
    double std_dev = 0.0;  ///< population form
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false;  ///< std == 0: no PDF points emitted
    /// 201 evenly spaced (x, density) points over [mean - 4 std, mean + 4 std].
    std::vector<std::pair<double, double>> pdf_points;
};

/// Ratios y_exp/y_pred with mean, population std, min, max, and the fitted
/// normal PDF sampled at 201 points. Requires equal lengths >= 1 and every
/// entry of both series > 0 (the error names the offending index).
RatioStats ratio_stats(const std::vector<double>& y_exp, const std::vector<double>& y_pred);

/// One row of a ratio-versus-parameter scatter table.
struct ScatterRow {
    std::string sample_id;
    double param_value = 0.0;
    double ratio = 0.0;
    bool flagged = false;  ///< |ratio - 1| > band
};

/// Scatter table for one parameter, ordered by ascending parameter value
/// (ties keep dataset order). `param` is a canonical parameter key; every
/// sample must carry it. Rows with |ratio - 1| > band are flagged.
std::vector<ScatterRow> parametric_scatter(const Dataset& ds, const std::vector<double>& ratios,
                                           const std::string& param, double band = 0.25);

/// The four parameters the scatter analysis is reported against.
const std::vector<std::string>& scatter_params();

struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  ///< symmetric, unit diagonal
    std::vector<std::string> notes;           ///< dropped-column notes
};

/// Pairwise Pearson correlations over {d, c, a_v/d, rho, m_fs, fy, fc,
/// v_exp}. The m_fs column is included only when every sample carries it;
/// constant columns are dropped with a note. Requires >= 2 samples.
CorrelationMatrix correlation_matrix(const Dataset& ds);

/// Predictions of one method, aligned with a dataset's samples, in kN.
struct MethodPredictions {
    std::string method;
    std::vector<double> v_pred_kn;
};

/// Everything the report carries for one method.
struct MethodEvaluation {
    std::string method;
    bool present = false;
    MetricSet metrics_kn;    ///< on physical kN values
    MetricSet metrics_norm;  ///< on min-max normalized values (see target bounds)
    RatioStats ratios;
    std::string bias_label;  ///< "underestimates" (mean ratio > 1) | "overestimates" | "unbiased"
    std::map<std::string, std::vector<ScatterRow>> scatter;  ///< keyed by parameter
};

/// The canonical six method tags in display order.
const std::vector<std::string>& report_methods();

struct EvaluationReport {
    std::size_t n_samples = 0;
    double band = 0.25;
    std::pair<double, double> target_bounds{0.0, 0.0};  ///< kN bounds behind metrics_norm
    std::vector<MethodEvaluation> methods;  ///< canonical order, absent methods marked
    std::vector<std::string> ranking;       ///< present methods: r desc, mse asc, name asc
};

/// Assemble the full comparison. Every prediction series must be aligned to
/// ds (the error names the misaligned method); unknown or duplicate method
/// tags are rejected. Methods not supplied are marked absent. Normalized
/// metrics scale both series with `target_bounds` (kN). The ranking orders
/// present methods by r descending, ties by mse ascending, then by method
/// name.
EvaluationReport compare(const Dataset& ds, const std::vector<MethodPredictions>& predictions,
                         std::pair<double, double> target_bounds, double band = 0.25);

nlohmann::json report_to_json(const EvaluationReport& report);

/// CSV emission (strings; callers write files). Columns:
///   metrics:  method,n,r,r_squared,mse_kn2,mae_kn,mse_norm_pct,mae_norm_pct,
///             ratio_mean,ratio_std,ratio_min,ratio_max,bias,rank
///   pdf:      x,density
///   scatter:  sample_id,param_value,ratio,flagged
///   correlation: label header row, then one row per variable
std::string metrics_csv(const EvaluationReport& report);
std::string ratio_pdf_csv(const RatioStats& stats);
std::string scatter_csv(const std::vector<ScatterRow>& rows);
std::string correlation_csv(const CorrelationMatrix& m);

} // namespace scs
