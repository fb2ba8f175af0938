#include "scs/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scs/io_util.hpp"

namespace scs {

double aci_size_factor(double d, std::vector<std::string>* warnings) {
    if (!(d > 0.0)) {
        throw std::invalid_argument("effective depth must be > 0, got " + format_double(d));
    }
    const double raw = std::sqrt(2.0 / (1.0 + 0.004 * d));
    if (raw > 1.0) {
        if (warnings != nullptr) {
            warnings->push_back("size factor clamped to 1 (raw " + format_double(raw) + ")");
        }
        return 1.0;
    }
    return raw;
}

CodePrediction aci_capacity(const SlabSample& s) {
    s.validate();
    CodePrediction p;
    p.method = "ACI";
    p.lambda_s = aci_size_factor(s.d, &p.warnings);
    p.u_mm = 4.0 * (s.c + s.d);
    p.v_newtons = (1.0 / 3.0) * p.lambda_s * p.u_mm * s.d * std::sqrt(s.fc);
    p.v_kn = p.v_newtons / 1000.0;
    return p;
}

CodePrediction ec2_capacity(const SlabSample& s, bool cap_size_term) {
    s.validate();
    CodePrediction p;
    p.method = "EC2";
    p.rho_s = s.rho;
    p.u_mm = 4.0 * s.c + 4.0 * std::numbers::pi * s.d;
    double size_term = 1.0 + std::sqrt(200.0 / s.d);
    if (cap_size_term && size_term > 2.0) {
        p.warnings.push_back("size term clamped to 2 (raw " + format_double(size_term) + ")");
        size_term = 2.0;
    }
    p.v_newtons = 0.18 * p.u_mm * s.d * size_term * std::cbrt(100.0 * s.fc * p.rho_s);
    p.v_kn = p.v_newtons / 1000.0;
    return p;
}

double cfp_lambda(double rho, double fy, double fc, std::vector<std::string>* warnings) {
    if (!(rho > 0.0)) {
        throw std::invalid_argument("rho must be > 0, got " + format_double(rho));
    }
    if (!(fy > 0.0)) {
        throw std::invalid_argument("fy must be > 0, got " + format_double(fy));
    }
    if (!(fc > 0.0)) {
        throw std::invalid_argument("fc must be > 0, got " + format_double(fc));
    }
    const double raw = 2.0 - (100.0 * rho * fy / 500.0) * (1.0 + 0.01 * (fc - 60.0));
    if (raw < 0.0) {
        if (warnings != nullptr) {
            warnings->push_back("width coefficient clamped to 0 (raw " + format_double(raw) +
                                ")");
        }
        return 0.0;
    }
    return raw;
}

double cfp_width(double c, double lambda_c, double d) {
    if (!(c > 0.0)) {
        throw std::invalid_argument("column side must be > 0, got " + format_double(c));
    }
    if (!(d > 0.0)) {
        throw std::invalid_argument("effective depth must be > 0, got " + format_double(d));
    }
    if (lambda_c < 0.0) {
        throw std::invalid_argument("width coefficient must be >= 0, got " +
                                    format_double(lambda_c));
    }
    return c + 2.0 * lambda_c * d;
}

double cfp_capacity_closure(double w, double d, double fc) {
    return (1.0 / 3.0) * std::sqrt(fc) * (4.0 * w) * d;
}

CodePrediction cfp_capacity(const SlabSample& s) {
    s.validate();
    CodePrediction p;
    p.method = "CFP";
    p.lambda_c = cfp_lambda(s.rho, s.fy, s.fc, &p.warnings);
    p.w_mm = cfp_width(s.c, p.lambda_c, s.d);
    p.u_mm = 4.0 * p.w_mm;
    p.v_newtons = cfp_capacity_closure(p.w_mm, s.d, s.fc);
    p.v_kn = p.v_newtons / 1000.0;
    return p;
}

const std::vector<std::string>& code_methods() {
    static const std::vector<std::string> methods = {"ACI", "EC2", "CFP"};
    return methods;
}

CodePrediction predict(const SlabSample& s, const std::string& method, bool cap_ec2_size_term) {
    std::string tag = method;
    std::transform(tag.begin(), tag.end(), tag.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (tag == "ACI") {
        return aci_capacity(s);
    }
    if (tag == "EC2") {
        return ec2_capacity(s, cap_ec2_size_term);
    }
    if (tag == "CFP") {
        return cfp_capacity(s);
    }
    throw std::invalid_argument("unknown method '" + method + "'; valid methods: ACI, EC2, CFP");
}

} // namespace scs
