#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "scs/codes.hpp"

namespace {

/// Specimen fixtures used throughout: slender slab S1 and the larger C1.
scs::SlabSample make_s1() {
    scs::SlabSample s;
    s.id = "S1";
    s.source = "fixture";
    s.d = 205.0;
    s.c = 255.0;
    s.av_d = 6.2;
    s.fy = 655.0;
    s.rho = 0.00085;
    s.fc = 24.25;
    s.v_exp = 620.0;
    return s;
}

} // namespace

TEST_CASE("ACI size factor clamps at 1 below the transition depth") {
    for (double d : {64.0, 100.0, 200.0, 250.0}) {
        CAPTURE(d);
        CHECK(scs::aci_size_factor(d) == 1.0);
    }
    CHECK(scs::aci_size_factor(275.0) == doctest::Approx(0.9759000729485332).epsilon(1e-12));
    CHECK(scs::aci_size_factor(275.0) == doctest::Approx(0.9759).epsilon(1e-4));

    std::vector<std::string> warnings;
    scs::aci_size_factor(100.0, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("clamped to 1") != std::string::npos);
    warnings.clear();
    scs::aci_size_factor(275.0, &warnings);
    CHECK(warnings.empty());

    CHECK_THROWS_AS(scs::aci_size_factor(0.0), std::invalid_argument);
    CHECK_THROWS_AS(scs::aci_size_factor(-10.0), std::invalid_argument);
}

TEST_CASE("ACI capacity matches the S1 fixture") {
    const scs::CodePrediction p = scs::aci_capacity(make_s1());
    CHECK(p.method == "ACI");
    CHECK(p.lambda_s == 1.0);
    CHECK(p.u_mm == doctest::Approx(1840.0).epsilon(1e-12));  // 4 (c + d)
    CHECK(p.v_kn == doctest::Approx(619.164860472915).epsilon(1e-12));
    CHECK(p.v_kn == doctest::Approx(619.2).epsilon(0.005));
    CHECK(p.v_newtons == doctest::Approx(p.v_kn * 1000.0).epsilon(1e-12));
    REQUIRE(p.warnings.size() == 1);  // raw factor 1.048... clamped
    CHECK(p.warnings[0].find("1.0482848367219182") != std::string::npos);
}

TEST_CASE("EC2 capacity matches the S1 fixture with the 2d perimeter") {
    const scs::CodePrediction p = scs::ec2_capacity(make_s1());
    CHECK(p.method == "EC2");
    CHECK(p.u_mm == doctest::Approx(3596.1059759436303).epsilon(1e-12));  // 4c + 4 pi d
    CHECK(p.rho_s == doctest::Approx(0.00085).epsilon(1e-15));
    CHECK(p.v_kn == doctest::Approx(335.6807022497583).epsilon(1e-12));
    CHECK(p.v_kn == doctest::Approx(335.7).epsilon(0.005));
    CHECK(p.warnings.empty());  // size term 1.9877 < 2, nothing to cap
}

TEST_CASE("EC2 size term cap is opt-in") {
    scs::SlabSample s = make_s1();
    s.d = 100.0;  // 1 + sqrt(200/100) = 2.414 > 2
    const scs::CodePrediction raw = scs::ec2_capacity(s, false);
    const scs::CodePrediction capped = scs::ec2_capacity(s, true);
    CHECK(raw.warnings.empty());
    REQUIRE(capped.warnings.size() == 1);
    CHECK(capped.warnings[0].find("size") != std::string::npos);
    CHECK(capped.v_kn == doctest::Approx(raw.v_kn * 2.0 / 2.414213562373095).epsilon(1e-12));
}

TEST_CASE("CFP width coefficient and width match the S1 fixture") {
    CHECK(scs::cfp_lambda(0.00085, 655.0, 24.25) ==
          doctest::Approx(1.928457625).epsilon(1e-12));
    CHECK(scs::cfp_lambda(0.00085, 655.0, 24.25) == doctest::Approx(1.9285).epsilon(1e-3));
    CHECK(scs::cfp_width(255.0, 1.928457625, 205.0) ==
          doctest::Approx(1045.66762625).epsilon(1e-12));
    CHECK(scs::cfp_width(255.0, 1.928457625, 205.0) == doctest::Approx(1045.7).epsilon(0.001));
}

TEST_CASE("CFP width coefficient clamps to zero for heavy reinforcement") {
    std::vector<std::string> warnings;
    // 6.9 % steel at fy 500, fc 40: raw 2 - 6.9 * 0.8 = -3.52
    CHECK(scs::cfp_lambda(0.069, 500.0, 40.0, &warnings) == 0.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("clamped to 0") != std::string::npos);
    CHECK_THROWS_AS(scs::cfp_lambda(0.0, 500.0, 40.0), std::invalid_argument);
}

TEST_CASE("CFP capacity composes lambda, width, and the capacity closure") {
    const scs::SlabSample s1 = make_s1();
    const scs::CodePrediction p = scs::cfp_capacity(s1);
    CHECK(p.method == "CFP");
    CHECK(p.lambda_c == doctest::Approx(1.928457625).epsilon(1e-12));
    CHECK(p.w_mm == doctest::Approx(1045.66762625).epsilon(1e-12));
    CHECK(p.u_mm == doctest::Approx(4.0 * 1045.66762625).epsilon(1e-12));
    CHECK(p.v_kn == doctest::Approx(1407.4796737133165).epsilon(1e-12));
    CHECK(p.v_newtons ==
          doctest::Approx(scs::cfp_capacity_closure(p.w_mm, s1.d, s1.fc)).epsilon(1e-12));
}

TEST_CASE("capacity closure follows the limiting-stress form") {
    // (1/3) sqrt(fc) * 4w * d on easy numbers: fc 36, w 100, d 10
    CHECK(scs::cfp_capacity_closure(100.0, 10.0, 36.0) ==
          doctest::Approx((1.0 / 3.0) * 6.0 * 400.0 * 10.0).epsilon(1e-12));
}

TEST_CASE("dispatcher is case-insensitive and rejects unknown methods") {
    const scs::SlabSample s1 = make_s1();
    CHECK(scs::predict(s1, "ACI").v_kn == scs::aci_capacity(s1).v_kn);
    CHECK(scs::predict(s1, "aci").v_kn == scs::aci_capacity(s1).v_kn);
    CHECK(scs::predict(s1, "Ec2").v_kn == scs::ec2_capacity(s1).v_kn);
    CHECK(scs::predict(s1, "cfp").v_kn == scs::cfp_capacity(s1).v_kn);
    CHECK_THROWS_WITH_AS(scs::predict(s1, "BS8110"),
                         doctest::Contains("valid methods: ACI, EC2, CFP"),
                         std::invalid_argument);
    CHECK(scs::code_methods() == std::vector<std::string>{"ACI", "EC2", "CFP"});
}

TEST_CASE("capacities validate their sample first") {
    scs::SlabSample bad = make_s1();
    bad.fc = -5.0;
    CHECK_THROWS_WITH_AS(scs::aci_capacity(bad), doctest::Contains("fc"),
                         std::invalid_argument);
    CHECK_THROWS_AS(scs::ec2_capacity(bad), std::invalid_argument);
    CHECK_THROWS_AS(scs::cfp_capacity(bad), std::invalid_argument);
}

TEST_CASE("capacities scale sensibly with their drivers") {
    const scs::SlabSample s1 = make_s1();
    scs::SlabSample stronger = s1;
    stronger.fc = 40.0;
    CHECK(scs::aci_capacity(stronger).v_kn > scs::aci_capacity(s1).v_kn);
    CHECK(scs::ec2_capacity(stronger).v_kn > scs::ec2_capacity(s1).v_kn);

    scs::SlabSample more_steel = s1;
    more_steel.rho = 0.01;
    CHECK(scs::ec2_capacity(more_steel).v_kn > scs::ec2_capacity(s1).v_kn);
    // heavier reinforcement narrows the CFP effective width
    CHECK(scs::cfp_capacity(more_steel).w_mm < scs::cfp_capacity(s1).w_mm);
}
