#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace scs {

/// One physical slab-column connection test.
///
/// Units: lengths mm, stresses MPa, loads kN, moments kN·mm. The
/// reinforcement ratio `rho` is stored as a fraction (0.01 = 1%); the CSV
/// schema carries it as `rho_percent` and it is divided by 100 at load.
struct SlabSample {
    std::string id;               ///< text label
    std::string source;           ///< text citation
    double d = 0.0;               ///< effective slab depth, mm
    double c = 0.0;               ///< square column side, mm
    double av_d = 0.0;            ///< shear span ratio a_v/d, dimensionless
    double fy = 0.0;              ///< longitudinal steel yield strength, MPa
    double rho = 0.0;             ///< reinforcement ratio, fraction
    double fc = 0.0;              ///< concrete compressive strength, MPa
    double v_exp = 0.0;           ///< measured ultimate punching load, kN
    std::optional<double> m_fs;   ///< flexural moment, kN·mm
    std::optional<double> b;      ///< slab width, mm

    /// Throws std::invalid_argument naming the first violated field:
    /// d, c, av_d, fy, rho, fc, v_exp must be > 0; m_fs and b, if present,
    /// must be > 0.
    void validate() const;
};

/// Validated collection of slab samples.
struct Dataset {
    std::vector<SlabSample> samples;

    std::size_t size() const { return samples.size(); }
    bool all_have_m_fs() const;
    bool all_have_b() const;
};

/// Canonical parameter keys, shared by the CSV schema, RangeSpec JSON,
/// stats output, and scatter/correlation selectors.
inline constexpr const char* kParamD = "d_mm";
inline constexpr const char* kParamC = "c_mm";
inline constexpr const char* kParamAvD = "av_over_d";
inline constexpr const char* kParamRho = "rho_percent";
inline constexpr const char* kParamMfs = "m_fs_knmm";
inline constexpr const char* kParamFy = "fy_mpa";
inline constexpr const char* kParamFc = "fc_mpa";
inline constexpr const char* kParamV = "v_exp_kn";
inline constexpr const char* kParamB = "b_mm";

/// Value of a named parameter on a sample, in the units the key names
/// (`rho_percent` is rho * 100). Empty when the key is unknown or the
/// optional field is absent.
std::optional<double> sample_param(const SlabSample& s, const std::string& key);

/// Summary statistics for one parameter.
struct ParamStats {
    double min = 0.0;
    double max = 0.0;
    double avg = 0.0;
    double std_dev = 0.0;  ///< population form (divisor n)
    double cov = 0.0;      ///< std_dev / avg when avg != 0, else 0

    double diff() const { return max - min; }
};

/// Per-parameter ranges and statistics, keyed by the canonical parameter
/// names above and held in a fixed display order.
struct RangeSpec {
    std::vector<std::pair<std::string, ParamStats>> params;

    const ParamStats* find(const std::string& key) const;
    bool has(const std::string& key) const { return find(key) != nullptr; }

    /// Checks min <= avg <= max and std >= 0 for every row; throws
    /// std::invalid_argument naming the offending parameter.
    void validate() const;
};

nlohmann::json range_spec_to_json(const RangeSpec& spec);
RangeSpec range_spec_from_json(const nlohmann::json& j);

/// Statistical ranges of the reference experimental database the model
/// suite was designed around. Used as the default envelope for `synthesize`.
const RangeSpec& reference_ranges();

/// One violation found by validate_ranges.
struct RangeViolation {
    std::size_t row = 0;   ///< 0-based sample index
    std::string id;        ///< sample id
    std::string field;     ///< canonical parameter key
    double value = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ValidationReport {
    std::vector<RangeViolation> violations;
    bool pass() const { return violations.empty(); }
};

/// Min–max bounds used to scale features and target to [0, 1].
struct NormParams {
    std::vector<std::pair<double, double>> feature_bounds;  ///< (min, max) per feature
    std::pair<double, double> target_bounds{0.0, 0.0};
    int combo_id = 0;                                       ///< provenance
    std::vector<std::string> feature_names;                 ///< provenance
};

/// One of the seven fixed feature combinations the model suite is trained
/// on, together with its architecture and optimizer population sizes.
struct ScsCombo {
    int id = 0;
    std::vector<std::string> feature_names;
    int hidden_units = 0;
    int pso_members = 0;
    int bat_members = 0;
    int iterations = 300;

    bool needs_m_fs() const;
    bool needs_b() const;
};

/// The full combination table, ids 1..7.
const std::array<ScsCombo, 7>& combo_table();

/// Lookup by id; throws std::invalid_argument for ids outside 1..7.
const ScsCombo& combo(int id);

/// Row-major numeric matrix with an aligned target vector.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;   ///< row-major, rows * cols entries
    std::vector<double> target;   ///< rows entries
    int combo_id = 0;
    std::vector<std::string> feature_names;
    std::optional<NormParams> norm;  ///< set once normalized

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::vector<double> row(std::size_t r) const;
};

/// CSV schema (exact header, comma separated, UTF-8, '.' decimal):
///   id,source,d_mm,c_mm,av_over_d,fy_mpa,rho_percent,fc_mpa,v_exp_kn,m_fs_knmm,b_mm
/// The last two columns may be empty. Fields must not contain commas.
inline constexpr const char* kCsvHeader =
    "id,source,d_mm,c_mm,av_over_d,fy_mpa,rho_percent,fc_mpa,v_exp_kn,m_fs_knmm,b_mm";

/// Load a dataset from CSV. Errors name the file, the 1-based data row, and
/// the offending field: missing/extra column, non-numeric cell, or a
/// violated SlabSample invariant.
Dataset load_csv(const std::filesystem::path& path);

/// Write a dataset in the same schema; numbers use shortest round-trip
/// formatting so that load_csv(write_csv(ds)) reproduces ds exactly.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Per-parameter min/max/avg/population-std/cov over the dataset.
/// The m_fs and b rows are included only when every sample carries the
/// field. Throws std::invalid_argument on an empty dataset.
RangeSpec summarize(const Dataset& ds);

/// List every (row, field) outside [spec.min, spec.max]. Parameters missing
/// from either the spec or the sample are skipped. Bounds are inclusive.
ValidationReport validate_ranges(const Dataset& ds, const RangeSpec& spec);

/// Project the dataset onto one combination. Feature columns follow the
/// combo's feature list exactly, in dataset row order; target = v_exp.
/// Throws std::invalid_argument naming the combo and the missing field when
/// a sample lacks m_fs or b and the combo needs it.
FeatureMatrix build_features(const Dataset& ds, const ScsCombo& combo);

/// Min–max scale every feature column and the target to [0, 1], returning
/// the scaled matrix and the bounds used. Throws std::invalid_argument
/// naming any constant column (x_max == x_min).
std::pair<FeatureMatrix, NormParams> normalize(const FeatureMatrix& m);

/// Scale a raw matrix with previously stored bounds (e.g. applying a
/// trained model to new data). Entries outside the stored bounds map
/// outside [0, 1]; no error is raised.
FeatureMatrix apply_normalization(const FeatureMatrix& m, const NormParams& p);

/// Map one normalized feature value back to physical units.
/// Throws std::out_of_range when col is not a valid feature index.
double denormalize(double y, const NormParams& p, std::size_t col);

/// Map a normalized target value back to physical units (kN).
double denormalize_target(double y, const NormParams& p);

/// Seeded shuffle of 0..n-1 split at floor(n * train_fraction).
/// Draw order: one Fisher–Yates shuffle of the index vector.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

/// Seeded shuffle then partition; train gets floor(n * train_fraction)
/// samples. Requires 0 < train_fraction < 1 and at least 2 samples.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Select rows of a feature matrix (used to apply one split to features and
/// target consistently).
FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& idx);

/// Generate n synthetic samples inside the spec's parameter box.
///
/// Per sample, parameters are drawn uniformly within [min, max] in the fixed
/// order d, c, a_v/d, rho, m_fs (when the spec has a row), fy, fc, b (when
/// the spec has a row). The target is a documented smooth function:
///   g = d^1.5 * sqrt(fc) * (100*rho)^0.33 / (a_v/d)
/// mapped affinely from its box extremes onto the spec's v_exp range, then
/// multiplied by (1 + noise * u) with u uniform in [-1, 1] (one draw, made
/// after the parameters) and clamped back into the v_exp range. The result
/// always passes validate_ranges against the spec. Deterministic per seed.
Dataset synthesize(std::size_t n, const RangeSpec& spec, std::uint64_t seed, double noise = 0.02);

} // namespace scs
