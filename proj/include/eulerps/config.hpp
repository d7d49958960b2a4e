#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eulerps/coupled.hpp"

namespace eulerps {

// Sampling grid for profiles: either similarity coordinates directly or a
// physical x-grid at a fixed time (xi = x/t).
struct SamplingGrid {
    double xi_min = -2.0;
    double xi_max = 2.0;
    int count = 401;
    std::optional<double> time;  // set when the grid is in x at fixed t > 0
};

struct CurveSpec {
    std::string kind = "forward";  // forward | backward | branch
    double m_min = 0.1;
    double m_max = 3.0;
    int count = 200;
};

struct SweepSpec {
    double ml_min = -2.0;
    double ml_max = 2.0;
    int ml_count = 10;
    double mr_min = -2.0;
    double mr_max = 2.0;
    int mr_count = 10;
    std::vector<double> k_values{0.0};
    double rho_left = 1.0;
    double p_left = 1.0;
    double rho_right = 1.0;
    double p_right = 1.0;
    int workers = 1;
};

struct ProblemConfig {
    GasModel model;
    GasState left;
    GasState right;
    SourceCoefficients source;
    CoupledOptions solver;
    SamplingGrid sampling;
    std::optional<CurveSpec> curve;
    std::optional<SweepSpec> sweep;
};

// Parse/validate a JSON config document. ParseError carries the field path of
// malformed input, ValidationError the violated constraint.
ProblemConfig parse_config(const std::string& text);

// Serialize with all defaults filled; parse_config(emit_config(c)) == c.
std::string emit_config(const ProblemConfig& config);

bool operator==(const ProblemConfig& a, const ProblemConfig& b);

// 17-significant-digit formatting; infinities serialize as "inf"/"-inf".
std::string format_value(double v);

}  // namespace eulerps
