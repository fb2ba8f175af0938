#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "scs/dataset.hpp"
#include "scs/io_util.hpp"
#include "scs/rng.hpp"

namespace fs = std::filesystem;

namespace {

scs::SlabSample sample_s1() {
    scs::SlabSample s;
    s.id = "S1";
    s.source = "fixture";
    s.d = 205.0;
    s.c = 255.0;
    s.av_d = 6.2;
    s.fy = 655.0;
    s.rho = 0.00085;  // 0.085 %
    s.fc = 24.25;
    s.v_exp = 620.0;
    return s;
}

scs::Dataset tiny_dataset() {
    scs::Dataset ds;
    ds.samples.push_back(sample_s1());
    scs::SlabSample s3 = sample_s1();
    s3.id = "S3";
    s3.fy = 665.0;
    s3.rho = 0.00345;
    s3.v_exp = 640.0;
    ds.samples.push_back(s3);
    scs::SlabSample c1 = sample_s1();
    c1.id = "C1";
    c1.d = 255.0;
    c1.c = 455.0;
    c1.av_d = 5.6;
    c1.fy = 555.0;
    c1.rho = 0.01075;
    c1.fc = 33.95;
    c1.v_exp = 1390.0;
    ds.samples.push_back(c1);
    return ds;
}

fs::path temp_csv(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    scs::write_text_file(path, content);
    return path;
}

} // namespace

TEST_CASE("sample validation names the offending field") {
    scs::SlabSample s = sample_s1();
    s.d = 0.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("d"), std::invalid_argument);
    s = sample_s1();
    s.rho = -0.1;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("rho"), std::invalid_argument);
    s = sample_s1();
    s.b = 0.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("b"), std::invalid_argument);
    CHECK_NOTHROW(sample_s1().validate());
}

TEST_CASE("sample_param reports canonical keys, rho in percent") {
    const scs::SlabSample s = sample_s1();
    CHECK(*scs::sample_param(s, scs::kParamD) == 205.0);
    CHECK(*scs::sample_param(s, scs::kParamRho) == doctest::Approx(0.085).epsilon(1e-12));
    CHECK(*scs::sample_param(s, scs::kParamV) == 620.0);
    CHECK_FALSE(scs::sample_param(s, scs::kParamMfs).has_value());
    CHECK_FALSE(scs::sample_param(s, "nonsense").has_value());
}

TEST_CASE("csv round-trip reproduces every sample") {
    scs::Dataset ds = tiny_dataset();
    ds.samples[0].m_fs = 39000.5;
    ds.samples[1].m_fs = 1951000.0;
    ds.samples[2].m_fs = 252655.25;
    ds.samples[0].b = 1000.0;
    ds.samples[1].b = 1200.5;
    ds.samples[2].b = 1800.0;

    const fs::path path = fs::temp_directory_path() / "scs_roundtrip.csv";
    scs::write_csv(ds, path);
    const scs::Dataset back = scs::load_csv(path);

    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& a = ds.samples[i];
        const auto& b = back.samples[i];
        CHECK(a.id == b.id);
        CHECK(a.source == b.source);
        CHECK(a.d == b.d);
        CHECK(a.c == b.c);
        CHECK(a.av_d == b.av_d);
        CHECK(a.fy == b.fy);
        // rho crosses a /100 *100 round-trip; shortest round-trip formatting
        // keeps it within one ulp.
        CHECK(a.rho == doctest::Approx(b.rho).epsilon(1e-15));
        CHECK(a.fc == b.fc);
        CHECK(a.v_exp == b.v_exp);
        CHECK(*a.m_fs == *b.m_fs);
        CHECK(*a.b == *b.b);
    }
    fs::remove(path);
}

TEST_CASE("load_csv diagnoses header and field problems") {
    SUBCASE("missing file names the path") {
        CHECK_THROWS_WITH_AS(scs::load_csv("/nonexistent/never.csv"),
                             doctest::Contains("never.csv"), std::runtime_error);
    }
    SUBCASE("wrong header names the missing column") {
        const auto path = temp_csv("scs_badheader.csv", "id,source,d_mm\nS1,x,205\n");
        CHECK_THROWS_WITH_AS(scs::load_csv(path), doctest::Contains("missing column"),
                             std::runtime_error);
        fs::remove(path);
    }
    SUBCASE("non-numeric cell names row and field") {
        const auto path = temp_csv(
            "scs_badcell.csv", std::string(scs::kCsvHeader) +
                                   "\nS1,src,205,255,6.2,655,abc,24.25,620,,\n");
        CHECK_THROWS_WITH_AS(scs::load_csv(path), doctest::Contains("rho_percent"),
                             std::runtime_error);
        fs::remove(path);
    }
    SUBCASE("invariant violation names row and id") {
        const auto path = temp_csv(
            "scs_badrow.csv", std::string(scs::kCsvHeader) +
                                  "\nS9,src,205,255,6.2,655,0.5,-1,620,,\n");
        CHECK_THROWS_WITH_AS(scs::load_csv(path), doctest::Contains("S9"), std::runtime_error);
        fs::remove(path);
    }
    SUBCASE("optional trailing fields may be empty") {
        const auto path = temp_csv(
            "scs_opt.csv", std::string(scs::kCsvHeader) +
                               "\nS1,src,205,255,6.2,655,0.085,24.25,620,,\n");
        const auto ds = scs::load_csv(path);
        REQUIRE(ds.size() == 1);
        CHECK_FALSE(ds.samples[0].m_fs.has_value());
        CHECK_FALSE(ds.samples[0].b.has_value());
        fs::remove(path);
    }
}

TEST_CASE("summarize computes population statistics") {
    scs::Dataset ds;
    scs::SlabSample a = sample_s1();
    a.d = 100.0;
    scs::SlabSample b = sample_s1();
    b.d = 200.0;
    ds.samples = {a, b};

    const scs::RangeSpec spec = scs::summarize(ds);
    const scs::ParamStats* d = spec.find(scs::kParamD);
    REQUIRE(d != nullptr);
    CHECK(d->min == 100.0);
    CHECK(d->max == 200.0);
    CHECK(d->diff() == 100.0);
    CHECK(d->avg == 150.0);
    CHECK(d->std_dev == doctest::Approx(50.0).epsilon(1e-12));          // population form
    CHECK(d->cov == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // m_fs/b rows appear only when every sample carries the field
    CHECK_FALSE(spec.has(scs::kParamMfs));
    ds.samples[0].m_fs = 50000.0;
    CHECK_FALSE(scs::summarize(ds).has(scs::kParamMfs));
    ds.samples[1].m_fs = 60000.0;
    CHECK(scs::summarize(ds).has(scs::kParamMfs));

    CHECK_THROWS_AS(scs::summarize(scs::Dataset{}), std::invalid_argument);
}

TEST_CASE("reference ranges match the published database envelope") {
    const scs::RangeSpec& ref = scs::reference_ranges();
    const scs::ParamStats* d = ref.find(scs::kParamD);
    REQUIRE(d != nullptr);
    CHECK(d->min == 64.0);
    CHECK(d->max == 275.0);
    CHECK(d->avg == 122.32);
    const scs::ParamStats* v = ref.find(scs::kParamV);
    REQUIRE(v != nullptr);
    CHECK(v->min == 105.0);
    CHECK(v->max == 2450.0);
    CHECK_FALSE(ref.has(scs::kParamB));
    CHECK_NOTHROW(ref.validate());
}

TEST_CASE("range spec json round-trips") {
    const scs::RangeSpec& ref = scs::reference_ranges();
    const scs::RangeSpec back = scs::range_spec_from_json(scs::range_spec_to_json(ref));
    REQUIRE(back.params.size() == ref.params.size());
    for (std::size_t i = 0; i < ref.params.size(); ++i) {
        CHECK(back.params[i].first == ref.params[i].first);
        CHECK(back.params[i].second.min == ref.params[i].second.min);
        CHECK(back.params[i].second.max == ref.params[i].second.max);
        CHECK(back.params[i].second.avg == ref.params[i].second.avg);
    }
    CHECK_THROWS_AS(scs::range_spec_from_json(nlohmann::json{{"x", 1}}), std::invalid_argument);
}

TEST_CASE("validate_ranges lists violations with row, id and field") {
    scs::Dataset ds = tiny_dataset();
    ds.samples[0].rho = 0.005;  // lift the fixture slab's ratio into the envelope
    CHECK(scs::validate_ranges(ds, scs::reference_ranges()).pass());

    ds.samples[1].fc = 500.0;  // far above the reference max
    const scs::ValidationReport report = scs::validate_ranges(ds, scs::reference_ranges());
    CHECK_FALSE(report.pass());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].row == 1);
    CHECK(report.violations[0].id == "S3");
    CHECK(report.violations[0].field == scs::kParamFc);
    CHECK(report.violations[0].value == 500.0);

    // the raw fixture itself sits outside the envelope: S1's reinforcement
    // ratio is below the reference minimum
    const auto raw = scs::validate_ranges(tiny_dataset(), scs::reference_ranges());
    REQUIRE(raw.violations.size() == 1);
    CHECK(raw.violations[0].id == "S1");
    CHECK(raw.violations[0].field == scs::kParamRho);
}

TEST_CASE("combination table matches the model suite") {
    const auto& table = scs::combo_table();
    REQUIRE(table.size() == 7);
    for (int id = 1; id <= 7; ++id) {
        CHECK(scs::combo(id).id == id);
        CHECK(scs::combo(id).iterations == 300);
    }
    CHECK(scs::combo(1).feature_names ==
          std::vector<std::string>{"rho", "fy", "fc", "c", "d", "av_d"});
    CHECK(scs::combo(1).hidden_units == 14);
    CHECK(scs::combo(1).pso_members == 50);
    CHECK(scs::combo(1).bat_members == 30);
    CHECK_FALSE(scs::combo(1).needs_m_fs());
    CHECK_FALSE(scs::combo(1).needs_b());

    CHECK(scs::combo(2).hidden_units == 12);
    CHECK(scs::combo(2).needs_m_fs());
    CHECK_FALSE(scs::combo(2).needs_b());

    CHECK(scs::combo(3).hidden_units == 8);
    CHECK(scs::combo(3).needs_m_fs());
    CHECK(scs::combo(3).needs_b());

    CHECK(scs::combo(4).hidden_units == 10);
    CHECK(scs::combo(4).pso_members == 30);

    CHECK(scs::combo(5).bat_members == 25);
    CHECK(scs::combo(6).bat_members == 25);
    CHECK(scs::combo(7).hidden_units == 12);
    CHECK(scs::combo(7).pso_members == 30);
    CHECK(scs::combo(7).bat_members == 25);

    CHECK_THROWS_AS(scs::combo(0), std::invalid_argument);
    CHECK_THROWS_AS(scs::combo(8), std::invalid_argument);
}

TEST_CASE("build_features projects combo 1 exactly") {
    const scs::Dataset ds = tiny_dataset();
    const scs::FeatureMatrix m = scs::build_features(ds, scs::combo(1));
    REQUIRE(m.rows == 3);
    REQUIRE(m.cols == 6);
    const std::vector<double> s1 = m.row(0);
    CHECK(s1[0] == doctest::Approx(0.00085).epsilon(1e-15));  // rho
    CHECK(s1[1] == 655.0);                                    // fy
    CHECK(s1[2] == 24.25);                                    // fc
    CHECK(s1[3] == 255.0);                                    // c
    CHECK(s1[4] == 205.0);                                    // d
    CHECK(s1[5] == 6.2);                                      // av_d
    CHECK(m.target == std::vector<double>{620.0, 640.0, 1390.0});
    CHECK(m.combo_id == 1);
}

TEST_CASE("build_features names the missing optional field") {
    const scs::Dataset ds = tiny_dataset();  // no m_fs, no b
    CHECK_THROWS_WITH_AS(scs::build_features(ds, scs::combo(2)),
                         doctest::Contains("m_fs_knmm"), std::invalid_argument);
    scs::Dataset with_mfs = ds;
    for (auto& s : with_mfs.samples) {
        s.m_fs = 100000.0;
    }
    CHECK_THROWS_WITH_AS(scs::build_features(with_mfs, scs::combo(3)),
                         doctest::Contains("b_mm"), std::invalid_argument);
}

TEST_CASE("derived features compute their formulas") {
    scs::Dataset ds = tiny_dataset();
    for (auto& s : ds.samples) {
        s.m_fs = 250000.0;
        s.b = 1500.0;
    }
    const auto& s = ds.samples[0];
    const scs::FeatureMatrix m3 = scs::build_features(ds, scs::combo(3));
    CHECK(m3.row(0)[0] ==
          doctest::Approx(250000.0 / (s.fc * 1500.0 * s.d * s.d)).epsilon(1e-12));
    CHECK(m3.row(0)[1] == doctest::Approx(s.c / s.d).epsilon(1e-12));
    CHECK(m3.row(0)[2] == s.av_d);

    const scs::FeatureMatrix m4 = scs::build_features(ds, scs::combo(4));
    CHECK(m4.row(0)[1] == doctest::Approx(s.fc / s.fy).epsilon(1e-12));

    const scs::FeatureMatrix m5 = scs::build_features(ds, scs::combo(5));
    CHECK(m5.row(0)[0] == doctest::Approx(250000.0 / (1500.0 * s.d * s.d)).epsilon(1e-12));
}

TEST_CASE("normalization round-trips to 1e-12 and hits the depth fixture") {
    // the documented fixture: depth average inside the reference bounds
    scs::NormParams p;
    p.feature_bounds = {{64.0, 275.0}};
    p.target_bounds = {105.0, 2450.0};
    const double y = (122.32 - 64.0) / (275.0 - 64.0);
    CHECK(y == doctest::Approx(0.2763981042654028).epsilon(1e-12));
    CHECK(scs::denormalize(y, p, 0) == doctest::Approx(122.32).epsilon(1e-12));

    scs::Rng rng(77);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(64.0, 275.0);
        const double n = (x - 64.0) / 211.0;
        CHECK(scs::denormalize(n, p, 0) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(scs::denormalize(0.5, p, 7), std::out_of_range);
}

TEST_CASE("normalize scales matrix and target into [0,1] and back") {
    const scs::Dataset ds = tiny_dataset();
    const scs::FeatureMatrix raw = scs::build_features(ds, scs::combo(1));
    const auto [normed, p] = scs::normalize(raw);
    REQUIRE(normed.norm.has_value());
    CHECK(p.combo_id == 1);
    CHECK(p.feature_names == raw.feature_names);
    for (std::size_t r = 0; r < normed.rows; ++r) {
        for (std::size_t c = 0; c < normed.cols; ++c) {
            CHECK(normed.at(r, c) >= 0.0);
            CHECK(normed.at(r, c) <= 1.0);
            CHECK(scs::denormalize(normed.at(r, c), p, c) ==
                  doctest::Approx(raw.at(r, c)).epsilon(1e-12));
        }
        CHECK(scs::denormalize_target(normed.target[r], p) ==
              doctest::Approx(raw.target[r]).epsilon(1e-12));
    }
}

TEST_CASE("normalize rejects constant columns by name") {
    scs::Dataset ds = tiny_dataset();
    for (auto& s : ds.samples) {
        s.fc = 30.0;
    }
    const scs::FeatureMatrix raw = scs::build_features(ds, scs::combo(1));
    CHECK_THROWS_WITH_AS(scs::normalize(raw), doctest::Contains("fc"), std::invalid_argument);
}

TEST_CASE("apply_normalization rejects bound-count mismatch") {
    const scs::FeatureMatrix raw = scs::build_features(tiny_dataset(), scs::combo(1));
    scs::NormParams p;
    p.feature_bounds = {{0.0, 1.0}};  // one bound for six columns
    p.target_bounds = {0.0, 1.0};
    CHECK_THROWS_AS(scs::apply_normalization(raw, p), std::invalid_argument);
}

TEST_CASE("split_indices partitions deterministically with the floor rule") {
    SUBCASE("145 at 0.5 gives 72/73") {
        const auto [train, test] = scs::split_indices(145, 0.5, 3);
        CHECK(train.size() == 72);
        CHECK(test.size() == 73);
    }
    SUBCASE("145 at 0.7 gives 101/44") {
        const auto [train, test] = scs::split_indices(145, 0.7, 3);
        CHECK(train.size() == 101);
        CHECK(test.size() == 44);
    }
    SUBCASE("disjoint cover") {
        const auto [train, test] = scs::split_indices(50, 0.7, 9);
        std::set<std::size_t> all(train.begin(), train.end());
        all.insert(test.begin(), test.end());
        CHECK(all.size() == 50);
        CHECK(*all.rbegin() == 49);
    }
    SUBCASE("seed-stable") {
        const auto a = scs::split_indices(50, 0.7, 9);
        const auto b = scs::split_indices(50, 0.7, 9);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
        const auto c = scs::split_indices(50, 0.7, 10);
        CHECK(a.first != c.first);
    }
    SUBCASE("bad fraction rejected") {
        CHECK_THROWS_AS(scs::split_indices(10, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(scs::split_indices(10, 1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("take_rows selects aligned feature/target rows") {
    const scs::FeatureMatrix m = scs::build_features(tiny_dataset(), scs::combo(1));
    const scs::FeatureMatrix picked = scs::take_rows(m, {2, 0});
    REQUIRE(picked.rows == 2);
    CHECK(picked.row(0) == m.row(2));
    CHECK(picked.row(1) == m.row(0));
    CHECK(picked.target == std::vector<double>{1390.0, 620.0});
}

TEST_CASE("synthesize respects the range spec and is seed-stable") {
    const scs::Dataset ds = scs::synthesize(145, scs::reference_ranges(), 1, 0.02);
    REQUIRE(ds.size() == 145);
    CHECK(scs::validate_ranges(ds, scs::reference_ranges()).pass());
    CHECK(ds.all_have_m_fs());      // reference ranges carry m_fs
    CHECK_FALSE(ds.all_have_b());   // but no slab width
    CHECK(ds.samples[0].id == "syn-0001");
    CHECK(ds.samples[144].id == "syn-0145");
    CHECK(ds.samples[0].source == "synthetic");

    const scs::Dataset again = scs::synthesize(145, scs::reference_ranges(), 1, 0.02);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.samples[i].d == again.samples[i].d);
        CHECK(ds.samples[i].v_exp == again.samples[i].v_exp);
    }
    const scs::Dataset other = scs::synthesize(145, scs::reference_ranges(), 2, 0.02);
    CHECK(ds.samples[0].d != other.samples[0].d);
}

TEST_CASE("synthesize validates its arguments") {
    CHECK_THROWS_AS(scs::synthesize(0, scs::reference_ranges(), 1), std::invalid_argument);
    CHECK_THROWS_AS(scs::synthesize(3, scs::reference_ranges(), 1, -0.5), std::invalid_argument);
    scs::RangeSpec incomplete;
    incomplete.params = {{scs::kParamD, {64.0, 275.0, 122.0, 44.0, 0.36}}};
    CHECK_THROWS_WITH_AS(scs::synthesize(3, incomplete, 1), doctest::Contains("c_mm"),
                         std::invalid_argument);
}

TEST_CASE("synthesized target is noise-free reproducible at noise 0") {
    const scs::Dataset a = scs::synthesize(10, scs::reference_ranges(), 4, 0.0);
    const scs::Dataset b = scs::synthesize(10, scs::reference_ranges(), 4, 0.1);
    // same parameter draws (noise draw comes last), different targets
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.samples[i].d == b.samples[i].d);
        CHECK(a.samples[i].fc == b.samples[i].fc);
    }
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.samples[i].v_exp != b.samples[i].v_exp) {
            any_diff = true;
        }
    }
    CHECK(any_diff);
}
