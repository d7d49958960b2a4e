#include "eulerps/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eulerps {

namespace {

// Toro-style f function: velocity change across a single 1/3-family wave
// connecting the anchor to pressure p.
double curve_f(double p, const GasState& s, const GasModel& m) {
    const double g = m.gamma;
    if (p > s.p) {
        const double A = 2.0 / ((g + 1.0) * s.rho);
        const double B = (g - 1.0) / (g + 1.0) * s.p;
        return (p - s.p) * std::sqrt(A / (p + B));
    }
    const double a = sound_speed(s, m);
    return 2.0 * a / (g - 1.0) * (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
}

}  // namespace

GasState shock_state(WaveFamily family, double p, const GasState& anchor, const GasModel& model) {
    if (family == WaveFamily::Two) throw DomainError("contact family has no shock branch");
    if (!(p >= anchor.p)) throw DomainError("shock branch requires p >= anchor pressure");
    const double g = model.gamma;
    // ratio first so p = p_anchor returns the anchor bit-exactly
    const double rho = anchor.rho * (((g - 1.0) * anchor.p + (g + 1.0) * p) /
                                     ((g - 1.0) * p + (g + 1.0) * anchor.p));
    const double du = (p - anchor.p) * std::sqrt((1.0 / anchor.rho) * 2.0 / ((g + 1.0) * p + (g - 1.0) * anchor.p));
    const double u = family == WaveFamily::One ? anchor.u - du : anchor.u + du;
    return {rho, u, p};
}

GasState rarefaction_state(WaveFamily family, double p, const GasState& anchor, const GasModel& model) {
    if (family == WaveFamily::Two) throw DomainError("contact family has no rarefaction branch");
    if (!(p > 0.0)) throw DomainError("rarefaction exit pressure must be positive");
    if (!(p <= anchor.p)) throw DomainError("rarefaction branch requires p <= anchor pressure");
    const double g = model.gamma;
    const double rho = anchor.rho * std::pow(p / anchor.p, 1.0 / g);
    const double a0 = sound_speed(anchor, model);
    const double du = 2.0 * a0 / (g - 1.0) * (std::pow(p / anchor.p, (g - 1.0) / (2.0 * g)) - 1.0);
    const double u = family == WaveFamily::One ? anchor.u - du : anchor.u + du;
    return {rho, u, p};
}

GasState contact_state(const GasState& anchor, double rho_other) {
    if (!(rho_other > 0.0)) throw DomainError("contact density must be positive");
    return {rho_other, anchor.u, anchor.p};
}

double wave_curve_velocity(CurveSide side, double p, const GasState& anchor, const GasModel& model) {
    if (!(p > 0.0)) throw DomainError("curve pressure must be positive");
    const double f = curve_f(p, anchor, model);
    return side == CurveSide::FromLeftState ? anchor.u - f : anchor.u + f;
}

GasState wave_curve_state(CurveSide side, double p, const GasState& anchor, const GasModel& model) {
    const WaveFamily family = side == CurveSide::FromLeftState ? WaveFamily::One : WaveFamily::Three;
    return p >= anchor.p ? shock_state(family, p, anchor, model)
                         : rarefaction_state(family, p, anchor, model);
}

double shock_speed(WaveFamily family, const GasState& pre, const GasState& post, const GasModel& model) {
    const FluxVector fl = flux(pre, model);
    const FluxVector fr = flux(post, model);
    const ConservedVector ul = conserved_from_primitive(pre, model);
    const ConservedVector ur = conserved_from_primitive(post, model);

    const double dm = ur.mass - ul.mass;
    if (std::fabs(dm) < 1e-13 * std::max(ul.mass, ur.mass)) {
        // zero-strength limit: acoustic speed of the family
        const auto lam = eigenvalues(pre, model);
        return family == WaveFamily::One ? lam[0] : lam[2];
    }
    const double sigma = (fr.mass - fl.mass) / dm;
    // Residual-based consistency: well conditioned for weak shocks, where the
    // per-component speed quotients are not.
    const double df[3] = {fr.mass - fl.mass, fr.momentum - fl.momentum, fr.energy - fl.energy};
    const double du[3] = {dm, ur.momentum - ul.momentum, ur.energy - ul.energy};
    const double fscale[3] = {std::max(std::fabs(fl.mass), std::fabs(fr.mass)),
                              std::max(std::fabs(fl.momentum), std::fabs(fr.momentum)),
                              std::max(std::fabs(fl.energy), std::fabs(fr.energy))};
    for (int i = 0; i < 3; ++i) {
        const double scale = std::max({fscale[i], std::fabs(sigma * du[i]), 1e-300});
        if (std::fabs(df[i] - sigma * du[i]) > 1e-9 * scale) {
            throw InconsistentStatesError("states do not satisfy the Rankine-Hugoniot condition (component " +
                                          std::to_string(i) + ")");
        }
    }
    return sigma;
}

bool vacuum_forms(const GasState& ul, const GasState& ur, const GasModel& model) {
    const double g = model.gamma;
    return !(ur.u - ul.u < 2.0 * (sound_speed(ul, model) + sound_speed(ur, model)) / (g - 1.0));
}

double pressure_at_mach_on_curve(CurveSide side, const GasState& anchor, double target_mach,
                                 const GasModel& model) {
    // From a left anchor the Mach decreases with p; from a right anchor the
    // mirrored statement holds, so reuse the left-side search on the mirror.
    if (side == CurveSide::FromRightState) {
        return pressure_at_mach_on_curve(CurveSide::FromLeftState, mirror_state(anchor),
                                         -target_mach, model);
    }
    auto mach_at = [&](double p) {
        return mach_number(wave_curve_state(CurveSide::FromLeftState, p, anchor, model), model);
    };
    double lo = anchor.p, hi = anchor.p;
    while (mach_at(lo) < target_mach) {
        lo *= 0.5;
        if (lo < 1e-280) throw ConvergenceError("curve never reaches the Mach target");
    }
    while (mach_at(hi) > target_mach) {
        hi *= 2.0;
        if (hi > 1e280) throw ConvergenceError("curve never drops to the Mach target");
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * hi) break;
        if (mach_at(mid) > target_mach) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Build the wave record for one nonlinear family of the star solution.
ClassicalWave make_nonlinear_wave(WaveFamily family, const GasState& outer, const GasState& star,
                                  const GasModel& model, double sonic_tol) {
    ClassicalWave w;
    w.family = family;
    const bool left_side = family == WaveFamily::One;
    w.left = left_side ? outer : star;
    w.right = left_side ? star : outer;
    const double p0 = outer.p;
    const double ps = star.p;
    w.zero_strength = std::fabs(ps - p0) <= 1e-11 * std::max(ps, p0);
    if (ps > p0 && !w.zero_strength) {
        w.kind = WaveKind::Shock;
        const double sigma = shock_speed(family, w.left, w.right, model);
        w.speed_lo = w.speed_hi = sigma;
    } else {
        w.kind = WaveKind::Rarefaction;
        const auto lam_outer = eigenvalues(outer, model);
        const auto lam_star = eigenvalues(star, model);
        if (left_side) {
            w.speed_lo = lam_outer[0];
            w.speed_hi = lam_star[0];
        } else {
            w.speed_lo = lam_star[2];
            w.speed_hi = lam_outer[2];
        }
        if (w.speed_lo > w.speed_hi) {  // roundoff at zero strength
            w.speed_lo = w.speed_hi = 0.5 * (w.speed_lo + w.speed_hi);
        }
    }
    (void)sonic_tol;
    return w;
}

}  // namespace

CRPSolution solve_crp(const GasState& ul, const GasState& ur, const GasModel& model,
                      const SolveOptions& opts) {
    validate(ul);
    validate(ur);
    validate(model);
    if (vacuum_forms(ul, ur, model)) {
        throw VacuumError("vacuum forms between the Riemann states");
    }

    auto g_of_p = [&](double p) {
        return curve_f(p, ul, model) + curve_f(p, ur, model) + (ur.u - ul.u);
    };

    // Bracket the star pressure; g is monotone increasing.
    double p_lo = 1e-12 * std::min(ul.p, ur.p);
    double p_hi = std::max(ul.p, ur.p);
    double g_lo = g_of_p(p_lo);
    double g_hi = g_of_p(p_hi);
    int grow = 0;
    while (g_hi < 0.0 && grow++ < 200) {
        p_hi *= 2.0;
        g_hi = g_of_p(p_hi);
    }
    if (g_lo > 0.0) {
        // root below the pressure floor: the star region is numerically vacuum
        throw VacuumError("star pressure under the resolvable floor");
    }
    if (g_hi < 0.0) {
        throw ConvergenceError("failed to bracket the star pressure");
    }

    // Bracketed hybrid: secant steps alternated with bisection so the
    // interval provably halves every other iteration.
    const double g_scale = sound_speed(ul, model) + sound_speed(ur, model) + std::fabs(ur.u - ul.u);
    double p = 0.5 * (p_lo + p_hi);
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        double cand;
        if (it % 2 == 0 && g_hi != g_lo) {
            cand = p_lo - g_lo * (p_hi - p_lo) / (g_hi - g_lo);
            if (!(cand > p_lo && cand < p_hi)) cand = 0.5 * (p_lo + p_hi);
        } else {
            cand = 0.5 * (p_lo + p_hi);
        }
        const double gc = g_of_p(cand);
        if (std::fabs(gc) <= 1e-15 * g_scale || p_hi - p_lo <= opts.root_tol * (1.0 + p_hi)) {
            p = cand;
            converged = true;
            break;
        }
        if (g_lo * gc < 0.0) {
            p_hi = cand;
            g_hi = gc;
        } else {
            p_lo = cand;
            g_lo = gc;
        }
    }
    if (!converged) throw ConvergenceError("star-pressure iteration exceeded the budget");

    // a star pressure within the zero-strength tolerance of an input collapses
    // onto it, keeping degenerate waves bit-exact
    if (std::fabs(p - ul.p) <= 1e-11 * std::max(p, ul.p)) p = ul.p;
    else if (std::fabs(p - ur.p) <= 1e-11 * std::max(p, ur.p)) p = ur.p;

    CRPSolution sol;
    sol.left = ul;
    sol.right = ur;
    sol.model = model;
    sol.star_p = p;
    sol.star_u = 0.5 * (ul.u + ur.u) + 0.5 * (curve_f(p, ur, model) - curve_f(p, ul, model));

    const GasState star_l = wave_curve_state(CurveSide::FromLeftState, p, ul, model);
    const GasState star_r = wave_curve_state(CurveSide::FromRightState, p, ur, model);
    sol.star_rho_left = star_l.rho;
    sol.star_rho_right = star_r.rho;

    // Keep u consistent across the star region.
    const GasState sl{star_l.rho, sol.star_u, p};
    const GasState sr{star_r.rho, sol.star_u, p};

    sol.waves.push_back(make_nonlinear_wave(WaveFamily::One, ul, sl, model, opts.sonic_tol));
    ClassicalWave contact;
    contact.family = WaveFamily::Two;
    contact.kind = WaveKind::Contact;
    contact.left = sl;
    contact.right = sr;
    contact.speed_lo = contact.speed_hi = sol.star_u;
    contact.zero_strength = std::fabs(sl.rho - sr.rho) <= 1e-11 * std::max(sl.rho, sr.rho);
    sol.waves.push_back(contact);
    sol.waves.push_back(make_nonlinear_wave(WaveFamily::Three, ur, sr, model, opts.sonic_tol));
    return sol;
}

GasState fan_state(WaveFamily family, double xi, const GasState& anchor, const GasModel& model) {
    const double g = model.gamma;
    const double a0 = sound_speed(anchor, model);
    double u, a;
    if (family == WaveFamily::One) {
        const double j = anchor.u + 2.0 * a0 / (g - 1.0);
        u = ((g - 1.0) * j + 2.0 * xi) / (g + 1.0);
        a = u - xi;
    } else {
        const double j = anchor.u - 2.0 * a0 / (g - 1.0);
        u = ((g - 1.0) * j + 2.0 * xi) / (g + 1.0);
        a = xi - u;
    }
    const double entropy_k = isentrope_constant(anchor, model);
    const double rho = std::pow(a * a / (g * entropy_k), 1.0 / (g - 1.0));
    return {rho, u, entropy_k * std::pow(rho, g)};
}

GasState sample_wave_sequence(const std::vector<ClassicalWave>& waves, const GasState& start,
                              const GasModel& model, double xi, Side side) {
    GasState current = start;
    for (const auto& w : waves) {
        if (w.zero_strength) {
            const bool past = side == Side::Below ? xi > w.speed_hi : xi >= w.speed_hi;
            if (past) current = w.right;
            continue;
        }
        const bool before = side == Side::Below ? xi <= w.speed_lo : xi < w.speed_lo;
        if (before) return current;
        const bool after = side == Side::Below ? xi > w.speed_hi : xi >= w.speed_hi;
        if (!after) {
            if (w.kind == WaveKind::Rarefaction) {
                const GasState& anchor = w.family == WaveFamily::One ? w.left : w.right;
                return fan_state(w.family, xi, anchor, model);
            }
            // exactly on a shock/contact: convention by side
            return side == Side::Below ? w.left : w.right;
        }
        current = w.right;
    }
    return current;
}

GasState sample_crp_sided(const CRPSolution& sol, double xi, Side side) {
    return sample_wave_sequence(sol.waves, sol.left, sol.model, xi, side);
}

GasState sample_crp(const CRPSolution& sol, double xi) {
    return sample_crp_sided(sol, xi, Side::Above);
}

}  // namespace eulerps
