#pragma once

#include <string>
#include <vector>

#include "scs/dataset.hpp"

namespace scs {

/// Closed-form punching shear capacity of one sample under one design
/// method, with the intermediate quantities the method computes.
///
/// Units: lengths mm, stresses MPa; capacity is computed in newtons
/// (`v_newtons`) and reported in kN (`v_kn` = v_newtons / 1000).
struct CodePrediction {
    std::string method;   ///< "ACI" | "EC2" | "CFP"
    double v_kn = 0.0;    ///< capacity, kN
    double v_newtons = 0.0;

    double lambda_s = 0.0;  ///< ACI size effect factor
    double u_mm = 0.0;      ///< control perimeter (ACI: 4(c+d); EC2: u1; CFP: 4w)
    double rho_s = 0.0;     ///< EC2 reinforcement ratio (isotropic: rho)
    double lambda_c = 0.0;  ///< CFP width coefficient
    double w_mm = 0.0;      ///< CFP effective width w
    std::vector<std::string> warnings;  ///< clamp events
};

/// ACI size effect factor: min(1, sqrt(2 / (1 + 0.004 d))), d in mm.
/// A clamp to 1 is appended to *warnings when the raw value exceeds 1.
/// Throws std::invalid_argument for d <= 0.
double aci_size_factor(double d, std::vector<std::string>* warnings = nullptr);

/// ACI capacity: control perimeter u = 4(c + d) at d/2 from the column;
/// V = (1/3) * lambda_s * u * d * sqrt(fc), newtons.
CodePrediction aci_capacity(const SlabSample& s);

/// Eurocode 2 capacity with the basic control perimeter at 2d from a square
/// column, u1 = 4c + 4*pi*d, and isotropic reinforcement (rho_s = rho):
/// V = 0.18 * u1 * d * (1 + sqrt(200/d)) * (100 * fc * rho_s)^(1/3), newtons.
/// The size term is not capped by default; pass cap_size_term = true to
/// apply the conventional <= 2 cap (a clamp warning is recorded).
CodePrediction ec2_capacity(const SlabSample& s, bool cap_size_term = false);

/// CFP width coefficient: max(0, 2 - [100*rho*fy/500] * [1 + 0.01(fc - 60)]).
/// rho is a fraction, so 100*rho is the ratio in percent. A clamp to 0 is
/// appended to *warnings when the raw value is negative.
/// Throws std::invalid_argument for non-positive inputs.
double cfp_lambda(double rho, double fy, double fc, std::vector<std::string>* warnings = nullptr);

/// CFP effective width at ultimate limit response: w = c + 2 * lambda_c * d.
double cfp_width(double c, double lambda_c, double d);

/// Capacity closure over the CFP width: the limiting-stress form evaluated
/// on a square perimeter of side w, V = (1/3) * sqrt(fc) * (4w) * d,
/// newtons. Kept as one replaceable function: the CFP literature defers the
/// capacity formula, and any substitute strategy belongs here.
double cfp_capacity_closure(double w, double d, double fc);

/// CFP capacity: lambda_c and w per cfp_lambda/cfp_width, capacity per
/// cfp_capacity_closure.
CodePrediction cfp_capacity(const SlabSample& s);

/// Dispatch by method tag ("ACI", "EC2", "CFP", case-insensitive).
/// Throws std::invalid_argument listing the valid tags for anything else.
CodePrediction predict(const SlabSample& s, const std::string& method,
                       bool cap_ec2_size_term = false);

/// The canonical design-method tags in display order.
const std::vector<std::string>& code_methods();

} // namespace scs
