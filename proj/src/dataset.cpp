#include "scs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "scs/io_util.hpp"
#include "scs/rng.hpp"

namespace scs {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("field '") + field + "' must be > 0, got " +
                                    format_double(value));
    }
}

} // namespace

void SlabSample::validate() const {
    require_positive(d, "d_mm");
    require_positive(c, "c_mm");
    require_positive(av_d, "av_over_d");
    require_positive(fy, "fy_mpa");
    require_positive(rho, "rho_percent");
    require_positive(fc, "fc_mpa");
    require_positive(v_exp, "v_exp_kn");
    if (m_fs.has_value()) {
        require_positive(*m_fs, "m_fs_knmm");
    }
    if (b.has_value()) {
        require_positive(*b, "b_mm");
    }
}

bool Dataset::all_have_m_fs() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const SlabSample& s) { return s.m_fs.has_value(); });
}

bool Dataset::all_have_b() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const SlabSample& s) { return s.b.has_value(); });
}

std::optional<double> sample_param(const SlabSample& s, const std::string& key) {
    if (key == kParamD) return s.d;
    if (key == kParamC) return s.c;
    if (key == kParamAvD) return s.av_d;
    if (key == kParamRho) return s.rho * 100.0;
    if (key == kParamMfs) return s.m_fs;
    if (key == kParamFy) return s.fy;
    if (key == kParamFc) return s.fc;
    if (key == kParamV) return s.v_exp;
    if (key == kParamB) return s.b;
    return std::nullopt;
}

const ParamStats* RangeSpec::find(const std::string& key) const {
    for (const auto& [name, stats] : params) {
        if (name == key) {
            return &stats;
        }
    }
    return nullptr;
}

void RangeSpec::validate() const {
    for (const auto& [name, st] : params) {
        if (!(st.min <= st.avg && st.avg <= st.max)) {
            throw std::invalid_argument("range row '" + name + "' violates min <= avg <= max");
        }
        if (st.std_dev < 0.0) {
            throw std::invalid_argument("range row '" + name + "' has negative std");
        }
    }
}

nlohmann::json range_spec_to_json(const RangeSpec& spec) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [name, st] : spec.params) {
        rows.push_back({{"name", name},
                        {"min", st.min},
                        {"max", st.max},
                        {"diff", st.diff()},
                        {"avg", st.avg},
                        {"std", st.std_dev},
                        {"cov", st.cov}});
    }
    return nlohmann::json{{"parameters", rows}};
}

RangeSpec range_spec_from_json(const nlohmann::json& j) {
    if (!j.contains("parameters") || !j["parameters"].is_array()) {
        throw std::invalid_argument("range spec JSON needs a 'parameters' array");
    }
    RangeSpec spec;
    for (const auto& row : j["parameters"]) {
        if (!row.contains("name") || !row.contains("min") || !row.contains("max")) {
            throw std::invalid_argument("range spec row needs 'name', 'min', 'max'");
        }
        ParamStats st;
        st.min = row["min"].get<double>();
        st.max = row["max"].get<double>();
        st.avg = row.value("avg", 0.5 * (st.min + st.max));
        st.std_dev = row.value("std", 0.0);
        st.cov = row.value("cov", st.avg != 0.0 ? st.std_dev / st.avg : 0.0);
        spec.params.emplace_back(row["name"].get<std::string>(), st);
    }
    spec.validate();
    return spec;
}

const RangeSpec& reference_ranges() {
    static const RangeSpec spec = [] {
        RangeSpec s;
        s.params = {
            {kParamD, {64.0, 275.0, 122.32, 44.82, 0.37}},
            {kParamC, {54.0, 600.0, 206.34, 87.0, 0.42}},
            {kParamAvD, {4.5, 14.02, 7.81, 2.4, 0.31}},
            {kParamRho, {0.3, 6.9, 1.31, 0.89, 0.68}},
            {kParamMfs, {39000.0, 1951000.0, 252655.0, 292121.0, 1.16}},
            {kParamFy, {294.0, 749.0, 496.88, 117.68, 0.24}},
            {kParamFc, {9.52, 118.7, 41.3, 24.85, 0.6}},
            {kParamV, {105.0, 2450.0, 458.7, 436.88, 0.95}},
        };
        return s;
    }();
    return spec;
}

bool ScsCombo::needs_m_fs() const {
    static const std::set<std::string> with_m_fs = {"m_fs", "m_fs/(fc*b*d^2)", "m_fs/(b*d^2)"};
    return std::any_of(feature_names.begin(), feature_names.end(),
                       [](const std::string& f) { return with_m_fs.count(f) > 0; });
}

bool ScsCombo::needs_b() const {
    static const std::set<std::string> with_b = {"m_fs/(fc*b*d^2)", "m_fs/(b*d^2)"};
    return std::any_of(feature_names.begin(), feature_names.end(),
                       [](const std::string& f) { return with_b.count(f) > 0; });
}

const std::array<ScsCombo, 7>& combo_table() {
    static const std::array<ScsCombo, 7> table = {{
        {1, {"rho", "fy", "fc", "c", "d", "av_d"}, 14, 50, 30, 300},
        {2, {"m_fs", "fc", "c", "d", "av_d"}, 12, 50, 30, 300},
        {3, {"m_fs/(fc*b*d^2)", "c/d", "av_d"}, 8, 50, 30, 300},
        {4, {"rho", "fc/fy", "c/d", "av_d"}, 10, 30, 30, 300},
        {5, {"m_fs/(b*d^2)", "fc", "d", "av_d"}, 10, 50, 25, 300},
        {6, {"m_fs/(fc*b*d^2)", "d", "c/d", "av_d"}, 10, 50, 25, 300},
        {7, {"m_fs/(fc*b*d^2)", "fc", "d", "c/d", "av_d"}, 12, 30, 25, 300},
    }};
    return table;
}

const ScsCombo& combo(int id) {
    if (id < 1 || id > 7) {
        throw std::invalid_argument("combo id must be in 1..7, got " + std::to_string(id));
    }
    return combo_table()[static_cast<std::size_t>(id - 1)];
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
    return std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(r * cols),
                               values.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
}

namespace {

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = split_csv_line(kCsvHeader);
    return cols;
}

std::string row_context(const std::filesystem::path& path, std::size_t data_row,
                        const std::string& field) {
    return path.filename().string() + " row " + std::to_string(data_row) + ": field '" + field +
           "'";
}

} // namespace

Dataset load_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.filename().string() + ": empty file, expected header '" +
                                 kCsvHeader + "'");
    }
    const auto header = split_csv_line(line);
    const auto& expected = csv_columns();
    if (header != expected) {
        std::string msg = path.filename().string() + ": header mismatch";
        for (const auto& col : expected) {
            if (std::find(header.begin(), header.end(), col) == header.end()) {
                msg += "; missing column '" + col + "'";
            }
        }
        for (const auto& col : header) {
            if (std::find(expected.begin(), expected.end(), col) == expected.end()) {
                msg += "; unexpected column '" + col + "'";
            }
        }
        if (header.size() == expected.size() &&
            std::set<std::string>(header.begin(), header.end()) ==
                std::set<std::string>(expected.begin(), expected.end())) {
            msg += "; columns out of order";
        }
        throw std::runtime_error(msg);
    }

    Dataset ds;
    std::size_t data_row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        ++data_row;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected.size()) {
            throw std::runtime_error(path.filename().string() + " row " +
                                     std::to_string(data_row) + ": expected " +
                                     std::to_string(expected.size()) + " columns, got " +
                                     std::to_string(fields.size()));
        }
        SlabSample s;
        s.id = fields[0];
        s.source = fields[1];
        s.d = parse_double(fields[2], row_context(path, data_row, "d_mm"));
        s.c = parse_double(fields[3], row_context(path, data_row, "c_mm"));
        s.av_d = parse_double(fields[4], row_context(path, data_row, "av_over_d"));
        s.fy = parse_double(fields[5], row_context(path, data_row, "fy_mpa"));
        s.rho = parse_double(fields[6], row_context(path, data_row, "rho_percent")) / 100.0;
        s.fc = parse_double(fields[7], row_context(path, data_row, "fc_mpa"));
        s.v_exp = parse_double(fields[8], row_context(path, data_row, "v_exp_kn"));
        if (!fields[9].empty()) {
            s.m_fs = parse_double(fields[9], row_context(path, data_row, "m_fs_knmm"));
        }
        if (!fields[10].empty()) {
            s.b = parse_double(fields[10], row_context(path, data_row, "b_mm"));
        }
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path.filename().string() + " row " +
                                     std::to_string(data_row) + " (id '" + s.id +
                                     "'): " + e.what());
        }
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& s : ds.samples) {
        out += s.id;
        out += ',';
        out += s.source;
        out += ',';
        out += format_double(s.d);
        out += ',';
        out += format_double(s.c);
        out += ',';
        out += format_double(s.av_d);
        out += ',';
        out += format_double(s.fy);
        out += ',';
        out += format_double(s.rho * 100.0);
        out += ',';
        out += format_double(s.fc);
        out += ',';
        out += format_double(s.v_exp);
        out += ',';
        if (s.m_fs.has_value()) {
            out += format_double(*s.m_fs);
        }
        out += ',';
        if (s.b.has_value()) {
            out += format_double(*s.b);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

namespace {

ParamStats stats_of(const std::vector<double>& values) {
    ParamStats st;
    st.min = *std::min_element(values.begin(), values.end());
    st.max = *std::max_element(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    st.avg = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        const double diff = v - st.avg;
        ss += diff * diff;
    }
    st.std_dev = std::sqrt(ss / n);
    st.cov = st.avg != 0.0 ? st.std_dev / st.avg : 0.0;
    return st;
}

} // namespace

RangeSpec summarize(const Dataset& ds) {
    if (ds.samples.empty()) {
        throw std::invalid_argument("cannot summarize an empty dataset");
    }
    std::vector<std::string> keys = {kParamD, kParamC, kParamAvD, kParamRho};
    if (ds.all_have_m_fs()) {
        keys.push_back(kParamMfs);
    }
    keys.insert(keys.end(), {kParamFy, kParamFc, kParamV});
    if (ds.all_have_b()) {
        keys.push_back(kParamB);
    }

    RangeSpec spec;
    for (const auto& key : keys) {
        std::vector<double> values;
        values.reserve(ds.samples.size());
        for (const auto& s : ds.samples) {
            values.push_back(*sample_param(s, key));
        }
        spec.params.emplace_back(key, stats_of(values));
    }
    return spec;
}

ValidationReport validate_ranges(const Dataset& ds, const RangeSpec& spec) {
    ValidationReport report;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto& s = ds.samples[i];
        for (const auto& [key, st] : spec.params) {
            const auto value = sample_param(s, key);
            if (!value.has_value()) {
                continue;
            }
            if (*value < st.min || *value > st.max) {
                report.violations.push_back({i, s.id, key, *value, st.min, st.max});
            }
        }
    }
    return report;
}

namespace {

double feature_value(const SlabSample& s, const std::string& name) {
    if (name == "rho") return s.rho;
    if (name == "fy") return s.fy;
    if (name == "fc") return s.fc;
    if (name == "c") return s.c;
    if (name == "d") return s.d;
    if (name == "av_d") return s.av_d;
    if (name == "c/d") return s.c / s.d;
    if (name == "fc/fy") return s.fc / s.fy;
    if (name == "m_fs") return *s.m_fs;
    if (name == "m_fs/(fc*b*d^2)") return *s.m_fs / (s.fc * *s.b * s.d * s.d);
    if (name == "m_fs/(b*d^2)") return *s.m_fs / (*s.b * s.d * s.d);
    throw std::invalid_argument("unknown feature '" + name + "'");
}

} // namespace

FeatureMatrix build_features(const Dataset& ds, const ScsCombo& cb) {
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto& s = ds.samples[i];
        if (cb.needs_m_fs() && !s.m_fs.has_value()) {
            throw std::invalid_argument("combo " + std::to_string(cb.id) +
                                        " needs field 'm_fs_knmm' but sample '" + s.id +
                                        "' (row " + std::to_string(i + 1) + ") lacks it");
        }
        if (cb.needs_b() && !s.b.has_value()) {
            throw std::invalid_argument("combo " + std::to_string(cb.id) +
                                        " needs field 'b_mm' but sample '" + s.id + "' (row " +
                                        std::to_string(i + 1) + ") lacks it");
        }
    }

    FeatureMatrix m;
    m.rows = ds.samples.size();
    m.cols = cb.feature_names.size();
    m.combo_id = cb.id;
    m.feature_names = cb.feature_names;
    m.values.reserve(m.rows * m.cols);
    m.target.reserve(m.rows);
    for (const auto& s : ds.samples) {
        for (const auto& name : cb.feature_names) {
            m.values.push_back(feature_value(s, name));
        }
        m.target.push_back(s.v_exp);
    }
    return m;
}

namespace {

std::pair<double, double> column_bounds(const FeatureMatrix& m, std::size_t col) {
    double lo = m.at(0, col);
    double hi = lo;
    for (std::size_t r = 1; r < m.rows; ++r) {
        lo = std::min(lo, m.at(r, col));
        hi = std::max(hi, m.at(r, col));
    }
    return {lo, hi};
}

} // namespace

std::pair<FeatureMatrix, NormParams> normalize(const FeatureMatrix& m) {
    if (m.rows == 0) {
        throw std::invalid_argument("cannot normalize an empty matrix");
    }
    NormParams p;
    p.combo_id = m.combo_id;
    p.feature_names = m.feature_names;
    for (std::size_t col = 0; col < m.cols; ++col) {
        const auto [lo, hi] = column_bounds(m, col);
        if (!(hi > lo)) {
            const std::string label = col < m.feature_names.size()
                                          ? "'" + m.feature_names[col] + "'"
                                          : std::to_string(col);
            throw std::invalid_argument("feature column " + label + " is constant (" +
                                        format_double(lo) + "); cannot min-max scale");
        }
        p.feature_bounds.emplace_back(lo, hi);
    }
    const double t_lo = *std::min_element(m.target.begin(), m.target.end());
    const double t_hi = *std::max_element(m.target.begin(), m.target.end());
    if (!(t_hi > t_lo)) {
        throw std::invalid_argument("target column is constant (" + format_double(t_lo) +
                                    "); cannot min-max scale");
    }
    p.target_bounds = {t_lo, t_hi};
    return {apply_normalization(m, p), p};
}

FeatureMatrix apply_normalization(const FeatureMatrix& m, const NormParams& p) {
    if (m.cols != p.feature_bounds.size()) {
        throw std::invalid_argument("normalization bounds cover " +
                                    std::to_string(p.feature_bounds.size()) +
                                    " features but the matrix has " + std::to_string(m.cols));
    }
    FeatureMatrix out = m;
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t col = 0; col < m.cols; ++col) {
            const auto [lo, hi] = p.feature_bounds[col];
            out.values[r * m.cols + col] = (m.at(r, col) - lo) / (hi - lo);
        }
        const auto [t_lo, t_hi] = p.target_bounds;
        out.target[r] = (m.target[r] - t_lo) / (t_hi - t_lo);
    }
    out.norm = p;
    return out;
}

double denormalize(double y, const NormParams& p, std::size_t col) {
    if (col >= p.feature_bounds.size()) {
        throw std::out_of_range("feature column " + std::to_string(col) + " out of range (" +
                                std::to_string(p.feature_bounds.size()) + " features)");
    }
    const auto [lo, hi] = p.feature_bounds[col];
    return lo + y * (hi - lo);
}

double denormalize_target(double y, const NormParams& p) {
    const auto [lo, hi] = p.target_bounds;
    return lo + y * (hi - lo);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("split needs at least 2 samples, got " + std::to_string(n));
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must be in (0, 1), got " +
                                    format_double(train_fraction));
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    // floor(n * fraction); the 1e-9 nudge absorbs floating error when the
    // product is mathematically integral (e.g. 10 * 0.7).
    const auto k = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * train_fraction + 1e-9));
    std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
    return {train, test};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    const auto [train_idx, test_idx] = split_indices(ds.samples.size(), train_fraction, seed);
    Dataset train;
    Dataset test;
    train.samples.reserve(train_idx.size());
    test.samples.reserve(test_idx.size());
    for (auto i : train_idx) {
        train.samples.push_back(ds.samples[i]);
    }
    for (auto i : test_idx) {
        test.samples.push_back(ds.samples[i]);
    }
    return {train, test};
}

FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& idx) {
    FeatureMatrix out;
    out.rows = idx.size();
    out.cols = m.cols;
    out.combo_id = m.combo_id;
    out.feature_names = m.feature_names;
    out.norm = m.norm;
    out.values.reserve(out.rows * out.cols);
    out.target.reserve(out.rows);
    for (auto r : idx) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            out.values.push_back(m.at(r, c));
        }
        out.target.push_back(m.target[r]);
    }
    return out;
}

namespace {

double synth_shape(double d, double fc, double rho_pct, double av_d) {
    return std::pow(d, 1.5) * std::sqrt(fc) * std::pow(rho_pct, 0.33) / av_d;
}

const ParamStats& required_row(const RangeSpec& spec, const char* key) {
    const ParamStats* st = spec.find(key);
    if (st == nullptr) {
        throw std::invalid_argument(std::string("synthesize requires range row '") + key + "'");
    }
    return *st;
}

} // namespace

Dataset synthesize(std::size_t n, const RangeSpec& spec, std::uint64_t seed, double noise) {
    if (n < 1) {
        throw std::invalid_argument("synthesize needs n >= 1");
    }
    if (noise < 0.0) {
        throw std::invalid_argument("noise must be >= 0, got " + format_double(noise));
    }
    spec.validate();
    const ParamStats& rd = required_row(spec, kParamD);
    const ParamStats& rc = required_row(spec, kParamC);
    const ParamStats& rav = required_row(spec, kParamAvD);
    const ParamStats& rrho = required_row(spec, kParamRho);
    const ParamStats& rfy = required_row(spec, kParamFy);
    const ParamStats& rfc = required_row(spec, kParamFc);
    const ParamStats& rv = required_row(spec, kParamV);
    const ParamStats* rm = spec.find(kParamMfs);
    const ParamStats* rb = spec.find(kParamB);

    // The shape function is monotone in each argument, so its extremes over
    // the parameter box sit at the box corners.
    const double g_lo = synth_shape(rd.min, rfc.min, rrho.min, rav.max);
    const double g_hi = synth_shape(rd.max, rfc.max, rrho.max, rav.min);

    Rng rng(seed);
    Dataset ds;
    ds.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SlabSample s;
        char label[32];
        std::snprintf(label, sizeof(label), "syn-%04zu", i + 1);
        s.id = label;
        s.source = "synthetic";
        // Draw order is fixed: d, c, av_d, rho, m_fs?, fy, fc, b?, noise.
        s.d = rng.uniform(rd.min, rd.max);
        s.c = rng.uniform(rc.min, rc.max);
        s.av_d = rng.uniform(rav.min, rav.max);
        const double rho_pct = rng.uniform(rrho.min, rrho.max);
        s.rho = rho_pct / 100.0;
        // The percent/fraction conversion can move the round-tripped value
        // (rho * 100) past a range boundary by one ulp; nudge it back inside.
        while (s.rho * 100.0 > rrho.max) {
            s.rho = std::nextafter(s.rho, 0.0);
        }
        while (s.rho * 100.0 < rrho.min) {
            s.rho = std::nextafter(s.rho, rrho.max);
        }
        if (rm != nullptr) {
            s.m_fs = rng.uniform(rm->min, rm->max);
        }
        s.fy = rng.uniform(rfy.min, rfy.max);
        s.fc = rng.uniform(rfc.min, rfc.max);
        if (rb != nullptr) {
            s.b = rng.uniform(rb->min, rb->max);
        }

        const double g = synth_shape(s.d, s.fc, rho_pct, s.av_d);
        const double frac = g_hi > g_lo ? (g - g_lo) / (g_hi - g_lo) : 0.5;
        double v = rv.min + frac * (rv.max - rv.min);
        const double u = rng.uniform(-1.0, 1.0);
        v *= 1.0 + noise * u;
        s.v_exp = std::clamp(v, rv.min, rv.max);
        s.validate();
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

} // namespace scs
