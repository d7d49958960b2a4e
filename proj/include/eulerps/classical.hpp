#pragma once

#include <vector>

#include "eulerps/gas.hpp"

namespace eulerps {

enum class WaveFamily { One = 1, Two = 2, Three = 3 };
enum class WaveKind { Shock, Rarefaction, Contact };

// One elementary wave of the homogeneous Euler equations. speed_lo == speed_hi
// for shocks and contacts; head/tail signal speeds for rarefaction fans.
struct ClassicalWave {
    WaveFamily family = WaveFamily::One;
    WaveKind kind = WaveKind::Contact;
    GasState left;
    GasState right;
    double speed_lo = 0.0;
    double speed_hi = 0.0;
    bool zero_strength = false;
};

struct SolveOptions {
    double root_tol = 1e-12;     // absolute+relative tolerance on p*
    int max_iter = 200;
    double sonic_tol = 1e-9;     // |M - 1| below this is treated as sonic
    double residual_tol = 1e-9;  // acceptance threshold for residual_report
};

// Solution of the classical Riemann problem: star region plus ordered waves.
struct CRPSolution {
    GasState left;
    GasState right;
    GasModel model;
    double star_p = 0.0;
    double star_u = 0.0;
    double star_rho_left = 0.0;
    double star_rho_right = 0.0;
    std::vector<ClassicalWave> waves;  // 1-wave, contact, 3-wave
};

enum class CurveSide { FromLeftState, FromRightState };

// State on the shock branch of the 1- or 3-family curve, p >= p_anchor.
GasState shock_state(WaveFamily family, double p, const GasState& anchor, const GasModel& model);

// State on the rarefaction branch, 0 < p <= p_anchor.
GasState rarefaction_state(WaveFamily family, double p, const GasState& anchor, const GasModel& model);

// Same u and p as the anchor, density replaced.
GasState contact_state(const GasState& anchor, double rho_other);

// Composite wave-curve velocity: shock branch for p >= p0, rarefaction below.
// Strictly decreasing in p from the left state, increasing from the right.
double wave_curve_velocity(CurveSide side, double p, const GasState& anchor, const GasModel& model);

// Full state on the composite curve (1-family from a left anchor,
// 3-family from a right anchor).
GasState wave_curve_state(CurveSide side, double p, const GasState& anchor, const GasModel& model);

// Shock speed from the Rankine-Hugoniot quotients; throws InconsistentStatesError
// if the component estimates disagree.
double shock_speed(WaveFamily family, const GasState& pre, const GasState& post, const GasModel& model);

// Pressure on the composite curve where the signed Mach number reaches the
// target (the Mach is strictly monotone in p on the u > 0 part of the curve).
double pressure_at_mach_on_curve(CurveSide side, const GasState& anchor, double target_mach,
                                 const GasModel& model);

CRPSolution solve_crp(const GasState& ul, const GasState& ur, const GasModel& model,
                      const SolveOptions& opts = {});

// Self-similar sample at xi = x/t.
GasState sample_crp(const CRPSolution& sol, double xi);

// One-sided sample: when xi coincides with a discontinuity, Side selects the limit.
enum class Side { Below, Above };
GasState sample_crp_sided(const CRPSolution& sol, double xi, Side side);

// Walk an ordered wave list starting from `start`; zero-strength entries are
// skipped (their right state is adopted).
GasState sample_wave_sequence(const std::vector<ClassicalWave>& waves, const GasState& start,
                              const GasModel& model, double xi, Side side);

// State inside a rarefaction fan at signal speed xi (family 1 anchored on the
// left state, family 3 on the right state).
GasState fan_state(WaveFamily family, double xi, const GasState& anchor, const GasModel& model);

// No-vacuum condition u_R - u_L < 2(a_L + a_R)/(gamma-1).
bool vacuum_forms(const GasState& ul, const GasState& ur, const GasModel& model);

}  // namespace eulerps
