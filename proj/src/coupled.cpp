#include "eulerps/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eulerps {

namespace {

constexpr double kZeroGain = 1e-14;

double speed_scale_of(const GasState& a, const GasState& b, const GasModel& m) {
    return std::max(std::fabs(a.u) + sound_speed(a, m), std::fabs(b.u) + sound_speed(b, m));
}

GasState left_curve_state(const GasState& ul, double p, const GasModel& m) {
    return wave_curve_state(CurveSide::FromLeftState, p, ul, m);
}

double p_at_mach(const GasState& ul, double target, const GasModel& m) {
    return pressure_at_mach_on_curve(CurveSide::FromLeftState, ul, target, m);
}

ClassicalWave connect_wave(WaveFamily family, const GasState& outer, const GasState& inner,
                           const GasModel& m) {
    // outer is the anchor (UL for family 1, UR for family 3); inner the star-side state.
    ClassicalWave w;
    w.family = family;
    const bool left_side = family == WaveFamily::One;
    w.left = left_side ? outer : inner;
    w.right = left_side ? inner : outer;
    w.zero_strength = std::fabs(inner.p - outer.p) <= 1e-11 * std::max(inner.p, outer.p);
    if (inner.p > outer.p && !w.zero_strength) {
        w.kind = WaveKind::Shock;
        const double s = shock_speed(family, w.left, w.right, m);
        w.speed_lo = w.speed_hi = s;
    } else {
        w.kind = WaveKind::Rarefaction;
        const auto lam_outer = eigenvalues(outer, m);
        const auto lam_inner = eigenvalues(inner, m);
        if (left_side) {
            w.speed_lo = lam_outer[0];
            w.speed_hi = lam_inner[0];
        } else {
            w.speed_lo = lam_inner[2];
            w.speed_hi = lam_outer[2];
        }
        if (w.speed_lo > w.speed_hi) w.speed_lo = w.speed_hi = 0.5 * (w.speed_lo + w.speed_hi);
    }
    return w;
}

ClassicalWave make_contact(const GasState& l, const GasState& r) {
    ClassicalWave c;
    c.family = WaveFamily::Two;
    c.kind = WaveKind::Contact;
    c.left = l;
    c.right = r;
    c.speed_lo = c.speed_hi = 0.5 * (l.u + r.u);
    c.zero_strength = std::fabs(l.rho - r.rho) <= 1e-11 * std::max(l.rho, r.rho) &&
                      std::fabs(l.u - r.u) <= 1e-11 * (1.0 + std::fabs(l.u));
    return c;
}

// Right half-plane chain U+ -> (1-wave) -> U3 -> contact -> U4 -> (3-wave) -> UR,
// with the contact pressure p3 (u4 taken from the 3-curve of UR).
std::vector<ClassicalWave> build_right_side(const GasState& uplus, double p3, const GasState& ur,
                                            const GasModel& m) {
    // snap degenerate waves onto their anchors so constant regions stay exact
    if (std::fabs(p3 - uplus.p) <= 1e-11 * std::max(p3, uplus.p)) p3 = uplus.p;
    if (std::fabs(p3 - ur.p) <= 1e-11 * std::max(p3, ur.p)) p3 = ur.p;
    std::vector<ClassicalWave> out;
    const GasState u3 = wave_curve_state(CurveSide::FromLeftState, p3, uplus, m);
    const GasState u4 = wave_curve_state(CurveSide::FromRightState, p3, ur, m);
    ClassicalWave w1 = connect_wave(WaveFamily::One, uplus, u3, m);
    out.push_back(w1);
    out.push_back(make_contact(u3, u4));
    out.push_back(connect_wave(WaveFamily::Three, ur, u4, m));
    return out;
}

ClassicalWave mirror_wave(const ClassicalWave& w) {
    ClassicalWave out;
    out.family = w.family == WaveFamily::One
                     ? WaveFamily::Three
                     : (w.family == WaveFamily::Three ? WaveFamily::One : WaveFamily::Two);
    out.kind = w.kind;
    out.left = mirror_state(w.right);
    out.right = mirror_state(w.left);
    out.speed_lo = -w.speed_hi;
    out.speed_hi = -w.speed_lo;
    out.zero_strength = w.zero_strength;
    return out;
}

struct DirectedAttempt {
    std::optional<SingularSolution> sol;
    std::vector<std::string> notes;
    bool vacuum_hit = false;

    void note(const std::string& s) { notes.push_back(s); }
};

enum class TracePhase { LeftWave, Continuation };

StructureType classify_directed(const SingularSolution& sol, const GasModel& model,
                                double sonic_tol);
void check_table_ranges(StructureType t, double m_minus, double m_plus, double k,
                        const GasModel& model);

// Attempt the u > 0 regime. ul/ur/coeffs are already in the rightward frame.
DirectedAttempt attempt_rightward(const GasState& ul, const GasState& ur,
                                  const SourceCoefficients& coeffs, const GasModel& model,
                                  const CoupledOptions& opts) {
    DirectedAttempt attempt;
    const double k_raw = coeffs.composite();
    const double k = std::fabs(k_raw) <= kZeroGain ? 0.0 : k_raw;
    const CriticalMachNumbers cm = critical_machs(k, model);
    const AdmissibleSets adm = admissible_sets(k, model);
    const double stol = opts.sonic_tol;
    const double m_l = mach_number(ul, model);

    if (ul.u + 2.0 * sound_speed(ul, model) / (model.gamma - 1.0) <= 0.0) {
        attempt.note("left state cannot reach positive velocity on its wave curve");
        return attempt;
    }

    auto v_right = [&](double p) {
        return wave_curve_velocity(CurveSide::FromRightState, p, ur, model);
    };

    auto finish = [&](SingularSolution&& sol) -> bool {
        sol.left_input = ul;
        sol.right_input = ur;
        sol.coeffs = coeffs;
        sol.model = model;
        sol.diagnostics = residual_report(sol, model);
        if (sol.diagnostics.overall() > opts.residual_tol) {
            std::ostringstream oss;
            oss << "candidate rejected: residual " << sol.diagnostics.overall();
            attempt.note(oss.str());
            return false;
        }
        sol.structure = classify_directed(sol, model, stol);
        if (sol.stationary) {
            check_table_ranges(sol.structure, std::fabs(mach_number(sol.stationary->left, model)),
                               std::fabs(mach_number(sol.stationary->right, model)), k, model);
        }
        attempt.sol = std::move(sol);
        return true;
    };

    // Supersonic trial: stationary wave directly off UL, no left wave.
    const bool trial_allowed = opts.regime != RegimeOverride::SkipSupersonicTrial &&
                               opts.regime != RegimeOverride::ChokedSubsonicOnly &&
                               opts.regime != RegimeOverride::ChokedSupersonicOnly;
    if (trial_allowed && m_l > 1.0 + stol && adm.contains_upstream(m_l, stol)) {
        try {
            const auto pairs = forward_curve(ul, coeffs, model, stol);
            const StationaryWavePair& pair = pairs.back();  // supersonic branch
            CRPSolution crp = solve_crp(pair.right, ur, model, opts);
            const double scale = speed_scale_of(pair.right, ur, model);
            bool speeds_ok = true;
            for (const auto& w : crp.waves) {
                if (!w.zero_strength && w.speed_lo < -stol * scale) speeds_ok = false;
            }
            if (speeds_ok) {
                SingularSolution sol;
                sol.stationary = pair;
                sol.right_waves = crp.waves;
                if (finish(std::move(sol))) return attempt;
            } else {
                attempt.note("supersonic trial: right CRP waves enter the left half-plane");
            }
        } catch (const VacuumError& e) {
            attempt.vacuum_hit = true;
            attempt.note(std::string("supersonic trial: ") + e.what());
        } catch (const Error& e) {
            attempt.note(std::string("supersonic trial: ") + e.what());
        }
    }

    // Extended left-curve path. The left 1-wave moves M- along (0, m_cap];
    // at the choke boundary the trace continues along the 1-family curve of
    // the frozen downstream state.
    const double m_choke = k > 0.0 ? cm.m1 : 1.0;
    double m_cap = m_choke;
    if (m_l > 1.0 + stol) {
        const double sigma_cap = normal_shock_conjugate(m_l, model);  // sigma = 0 bound
        m_cap = std::min(m_cap, sigma_cap);
    }
    const bool choke_reachable = m_cap >= m_choke - stol;

    const bool left_path_allowed = opts.regime != RegimeOverride::ChokedSupersonicOnly;
    const bool continuation_allowed = opts.regime != RegimeOverride::ChokedSubsonicOnly;

    struct TracePoint {
        TracePhase phase;
        double param;
        double g;
    };

    double p_cap = 0.0, p_floorM = 0.0;
    try {
        p_cap = p_at_mach(ul, m_cap, model);
        p_floorM = p_at_mach(ul, 1e-9, model);  // u- -> 0 end
    } catch (const Error& e) {
        attempt.note(std::string("left-curve parametrization failed: ") + e.what());
        return attempt;
    }

    auto g_left = [&](double p_minus) -> double {
        const GasState u_minus = left_curve_state(ul, p_minus, model);
        const auto pairs = forward_curve(u_minus, coeffs, model, stol);
        const GasState& up = pairs.front().right;  // subsonic candidate
        return up.u - v_right(up.p);
    };

    // Choked continuation context (frozen states), set up lazily.
    bool have_continuation = false;
    GasState u_minus_choke{}, u_plus_cont{};
    double p_cont_start = 0.0;  // strongest admissible right 1-wave (sigma = 0 or zero-strength)
    if (choke_reachable && continuation_allowed) {
        try {
            u_minus_choke = left_curve_state(ul, p_cap, model);
            const auto pairs = forward_curve(u_minus_choke, coeffs, model, stol);
            // k > 0 / k = 0: single sonic candidate. k < 0: subsonic candidate is the
            // left-path endpoint; the supersonic candidate owns the continuation.
            const StationaryWavePair& cand = pairs.back();
            const double m_plus = std::fabs(mach_number(cand.right, model));
            if (m_plus > 1.0 + stol) {
                u_plus_cont = cand.right;
                const double m_conj = normal_shock_conjugate(m_plus, model);
                const StateRatios r = state_ratios(m_plus, m_conj, SourceCoefficients{}, model);
                p_cont_start = cand.right.p * r.pressure;  // standing-shock post pressure
                have_continuation = true;
            } else if (m_plus >= 1.0 - stol) {
                u_plus_cont = cand.right;
                p_cont_start = cand.right.p;  // sonic: rarefactions only
                have_continuation = true;
            }
        } catch (const Error& e) {
            attempt.note(std::string("choked continuation setup failed: ") + e.what());
        }
    }

    auto g_cont = [&](double p3) -> double {
        return wave_curve_velocity(CurveSide::FromLeftState, p3, u_plus_cont, model) - v_right(p3);
    };

    // Assemble the scan grid, strong end first: left-wave phase from the
    // u- -> 0 end down to the cap, then the choked continuation to near-vacuum.
    std::vector<TracePoint> pts;
    const int n_scan = 64;
    if (left_path_allowed) {
        for (int i = 0; i <= n_scan; ++i) {
            const double t = static_cast<double>(i) / n_scan;
            const double p = p_floorM * std::pow(p_cap / p_floorM, t);
            try {
                pts.push_back({TracePhase::LeftWave, p, g_left(p)});
            } catch (const Error&) {
                // inadmissible point (roundoff at a boundary); skip
            }
        }
    }
    if (have_continuation) {
        const double p_floor3 = 1e-10 * p_cont_start;
        for (int i = 0; i <= n_scan; ++i) {
            const double t = static_cast<double>(i) / n_scan;
            const double p = p_cont_start * std::pow(p_floor3 / p_cont_start, t);
            try {
                pts.push_back({TracePhase::Continuation, p, g_cont(p)});
            } catch (const Error&) {
            }
        }
    }
    if (pts.empty()) {
        attempt.note("rightward trace is empty");
        return attempt;
    }

    // Residual sign convention: g < 0 while the right curve is above the trace.
    // Find the first admissible crossing or a touching endpoint.
    auto bisect_on = [&](TracePhase phase, double a, double b, double ga) -> double {
        auto g = [&](double p) { return phase == TracePhase::LeftWave ? g_left(p) : g_cont(p); };
        double lo = a, hi = b, glo = ga;
        for (int it = 0; it < 260; ++it) {
            const double mid = 0.5 * (lo + hi);
            double gm;
            try {
                gm = g(mid);
            } catch (const Error&) {
                gm = glo;  // treat as same-sign: push toward the other half
            }
            if (gm == 0.0) return mid;
            if (std::fabs(hi - lo) <= 1e-15 * std::max(std::fabs(hi), 1.0)) break;
            if (glo * gm < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        return 0.5 * (lo + hi);
    };

    auto build_from_left_phase = [&](double p_minus) -> bool {
        if (std::fabs(p_minus - ul.p) <= 1e-11 * std::max(p_minus, ul.p)) p_minus = ul.p;
        const GasState u_minus = left_curve_state(ul, p_minus, model);
        const auto pairs = forward_curve(u_minus, coeffs, model, stol);
        const StationaryWavePair& pair = pairs.front();
        SingularSolution sol;
        ClassicalWave w1 = connect_wave(WaveFamily::One, ul, u_minus, model);
        sol.left_waves.push_back(w1);
        sol.stationary = pair;
        sol.right_waves = build_right_side(pair.right, pair.right.p, ur, model);
        return finish(std::move(sol));
    };

    auto build_from_continuation = [&](double p3) -> bool {
        SingularSolution sol;
        ClassicalWave w1 = connect_wave(WaveFamily::One, ul, u_minus_choke, model);
        sol.left_waves.push_back(w1);
        StationaryWavePair pair;
        pair.left = u_minus_choke;
        pair.right = u_plus_cont;
        pair.coeffs = coeffs;
        pair.choked = true;
        sol.stationary = pair;
        sol.right_waves = build_right_side(u_plus_cont, p3, ur, model);
        return finish(std::move(sol));
    };

    auto accept_at = [&](const TracePoint& pt) -> bool {
        return pt.phase == TracePhase::LeftWave ? build_from_left_phase(pt.param)
                                                : build_from_continuation(pt.param);
    };

    const double vel_scale = sound_speed(ul, model) + std::fabs(ul.u) + sound_speed(ur, model) +
                             std::fabs(ur.u);
    const double g_accept = 1e-11 * vel_scale;

    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const TracePoint& a = pts[i];
        const TracePoint& b = pts[i + 1];
        if (std::fabs(a.g) <= g_accept) {
            if (accept_at(a)) return attempt;
        }
        if (a.phase == b.phase && a.g * b.g < 0.0) {
            const double root = bisect_on(a.phase, a.param, b.param, a.g);
            TracePoint rp{a.phase, root, 0.0};
            if (accept_at(rp)) return attempt;
        }
    }
    if (std::fabs(pts.back().g) <= g_accept) {
        if (accept_at(pts.back())) return attempt;
    }

    if (pts.back().g < 0.0) {
        attempt.vacuum_hit = true;
        attempt.note("rightward trace ends below the right curve (separation toward vacuum)");
    } else if (pts.front().g > 0.0) {
        attempt.note("rightward matching requires nonpositive contact velocity");
    } else {
        attempt.note("no admissible crossing found on the rightward trace");
    }
    return attempt;
}

void append_named_residual(ResidualReport& rr, const ClassicalWave& w, const GasModel& model) {
    if (w.zero_strength) return;
    if (w.kind == WaveKind::Shock) {
        const FluxVector fl = flux(w.left, model);
        const FluxVector fr = flux(w.right, model);
        const ConservedVector cl = conserved_from_primitive(w.left, model);
        const ConservedVector cr = conserved_from_primitive(w.right, model);
        const double s = w.speed_lo;
        const double df[3] = {fr.mass - fl.mass, fr.momentum - fl.momentum, fr.energy - fl.energy};
        const double du[3] = {cr.mass - cl.mass, cr.momentum - cl.momentum, cr.energy - cl.energy};
        const double fs[3] = {std::max(std::fabs(fl.mass), std::fabs(fr.mass)),
                              std::max(std::fabs(fl.momentum), std::fabs(fr.momentum)),
                              std::max(std::fabs(fl.energy), std::fabs(fr.energy))};
        for (int i = 0; i < 3; ++i) {
            const double scale = std::max({fs[i], std::fabs(s * du[i]), 1e-300});
            rr.shock_rh = std::max(rr.shock_rh, std::fabs(df[i] - s * du[i]) / scale);
        }
    } else if (w.kind == WaveKind::Rarefaction) {
        const double g = model.gamma;
        const double sgn = w.family == WaveFamily::One ? 1.0 : -1.0;
        const double jl = w.left.u + sgn * 2.0 * sound_speed(w.left, model) / (g - 1.0);
        const double jr = w.right.u + sgn * 2.0 * sound_speed(w.right, model) / (g - 1.0);
        const double jscale = std::max({std::fabs(jl), std::fabs(jr), sound_speed(w.left, model)});
        rr.rarefaction_invariant = std::max(rr.rarefaction_invariant, std::fabs(jl - jr) / jscale);
        const double sl = isentrope_constant(w.left, model);
        const double sr = isentrope_constant(w.right, model);
        rr.rarefaction_invariant =
            std::max(rr.rarefaction_invariant, std::fabs(sl - sr) / std::max(sl, sr));
    } else {
        const double uscale = std::max({std::fabs(w.left.u), std::fabs(w.right.u),
                                        sound_speed(w.left, model)});
        rr.contact_mismatch = std::max(rr.contact_mismatch, std::fabs(w.left.u - w.right.u) / uscale);
        rr.contact_mismatch =
            std::max(rr.contact_mismatch,
                     std::fabs(w.left.p - w.right.p) / std::max(w.left.p, w.right.p));
    }
}

StructureType classify_directed(const SingularSolution& sol, const GasModel& model,
                                double sonic_tol) {
    if (!sol.stationary) return StructureType::SourceOffClassical;
    const double m_minus = std::fabs(mach_number(sol.stationary->left, model));
    const double m_plus = std::fabs(mach_number(sol.stationary->right, model));
    const bool sonic_m = std::fabs(m_minus - 1.0) <= sonic_tol;
    const bool sonic_p = std::fabs(m_plus - 1.0) <= sonic_tol;

    StructureType tag;
    if (sonic_m) {
        tag = sonic_p ? StructureType::Type7
                      : (m_plus > 1.0 ? StructureType::Type5 : StructureType::Type6);
    } else if (m_minus > 1.0) {
        if (sonic_p) {
            tag = StructureType::Type4;
        } else if (m_plus > 1.0) {
            tag = StructureType::Type2;
        } else {
            throw ClassificationConflictError("supersonic M- paired with subsonic M+");
        }
    } else {
        if (sonic_p) {
            tag = StructureType::Type3;
        } else if (m_plus < 1.0) {
            tag = StructureType::Type1;
        } else {
            throw ClassificationConflictError("subsonic M- paired with supersonic M+");
        }
    }

    // Realized wave pattern must match the tag.
    const ClassicalWave* left1 = nullptr;
    for (const auto& w : sol.left_waves)
        if (!w.zero_strength && w.family == WaveFamily::One) left1 = &w;
    const ClassicalWave* right1 = nullptr;
    for (const auto& w : sol.right_waves)
        if (!w.zero_strength && w.family == WaveFamily::One) right1 = &w;

    auto conflict = [&](const std::string& msg) {
        throw ClassificationConflictError("pattern check failed for " + std::string(to_string(tag)) +
                                          ": " + msg);
    };
    switch (tag) {
        case StructureType::Type1:
            if (right1) conflict("unexpected right 1-family wave");
            break;
        case StructureType::Type2:
            if (left1) conflict("unexpected left wave");
            break;
        case StructureType::Type3:
            if (right1 && right1->kind != WaveKind::Rarefaction)
                conflict("downstream wave of a choked state must be a rarefaction");
            break;
        case StructureType::Type4:
            if (left1) conflict("unexpected left wave");
            if (right1 && right1->kind != WaveKind::Rarefaction)
                conflict("downstream wave of a choked state must be a rarefaction");
            break;
        case StructureType::Type5:
            if (left1 && left1->kind != WaveKind::Rarefaction)
                conflict("left wave at a sonic upstream state must be a rarefaction");
            break;
        case StructureType::Type6:
            if (left1 && left1->kind != WaveKind::Rarefaction)
                conflict("left wave at a sonic upstream state must be a rarefaction");
            if (right1) conflict("unexpected right 1-family wave");
            break;
        case StructureType::Type7:
            if (left1 && left1->kind != WaveKind::Rarefaction)
                conflict("left wave at a sonic upstream state must be a rarefaction");
            if (right1 && right1->kind != WaveKind::Rarefaction)
                conflict("downstream wave of a choked state must be a rarefaction");
            break;
        default:
            break;
    }
    return tag;
}

// Mach ranges per structure and sign of k. The Type5/Type6 rows follow the
// wave patterns of the structure theorem: Type5 (five waves) carries the
// supersonic downstream branch, Type6 (four waves) the subsonic one.
void check_table_ranges(StructureType t, double m_minus, double m_plus, double k,
                        const GasModel& model) {
    const double tol = 1e-6;
    auto near_crit = [&](double a, double b) { return std::fabs(a - b) <= tol * std::max(1.0, b); };
    auto conflict = [&](const std::string& msg) {
        throw ClassificationConflictError("Mach-range check failed for " +
                                          std::string(to_string(t)) + ": " + msg);
    };
    const CriticalMachNumbers cm = critical_machs(k, model);
    if (k > 0.0) {
        switch (t) {
            case StructureType::Type1:
                if (m_minus > cm.m1 + tol || m_plus > 1.0 + tol) conflict("expected M- <= M1*, M+ <= 1");
                break;
            case StructureType::Type2:
                if (m_minus < cm.m2 - tol || m_plus < 1.0 - tol || m_plus > cm.m3 + tol)
                    conflict("expected M- >= M2*, 1 <= M+ < M3*");
                break;
            case StructureType::Type3:
                if (!near_crit(m_minus, cm.m1)) conflict("expected M- = M1*");
                break;
            case StructureType::Type4:
                if (!near_crit(m_minus, cm.m2)) conflict("expected M- = M2*");
                break;
            default:
                conflict("structure not admissible for k > 0");
        }
    } else if (k < 0.0) {
        switch (t) {
            case StructureType::Type1:
                if (m_minus > 1.0 + tol || m_plus > cm.m1 + tol) conflict("expected M- <= 1, M+ <= M1**");
                break;
            case StructureType::Type2:
                if (m_minus < 1.0 - tol || m_minus > cm.m3 + tol || m_plus < cm.m2 - tol)
                    conflict("expected 1 <= M- < M3**, M+ >= M2**");
                break;
            case StructureType::Type5:
                if (!near_crit(m_plus, cm.m2)) conflict("expected M+ = M2**");
                break;
            case StructureType::Type6:
                if (!near_crit(m_plus, cm.m1)) conflict("expected M+ = M1**");
                break;
            default:
                conflict("structure not admissible for k < 0");
        }
    } else {
        switch (t) {
            case StructureType::Type1:
                if (m_minus > 1.0 + tol || m_plus > 1.0 + tol) conflict("expected both Mach < 1");
                break;
            case StructureType::Type2:
                if (m_minus < 1.0 - tol || m_plus < 1.0 - tol) conflict("expected both Mach > 1");
                break;
            case StructureType::Type7:
                if (!near_crit(m_minus, 1.0) || !near_crit(m_plus, 1.0)) conflict("expected M- = M+ = 1");
                break;
            default:
                conflict("structure not admissible for k = 0");
        }
    }
}

}  // namespace

const char* to_string(StructureType t) {
    switch (t) {
        case StructureType::Type1: return "Type1";
        case StructureType::Type2: return "Type2";
        case StructureType::Type3: return "Type3";
        case StructureType::Type4: return "Type4";
        case StructureType::Type5: return "Type5";
        case StructureType::Type6: return "Type6";
        case StructureType::Type7: return "Type7";
        case StructureType::SourceOffClassical: return "SourceOffClassical";
    }
    return "unknown";
}

double ResidualReport::overall() const {
    return std::max({shock_rh, rarefaction_invariant, contact_mismatch, stationary_jump,
                     speed_sign_violation});
}

GasState SingularSolution::state_minus() const {
    if (stationary) return stationary->left;
    if (classical) return sample_crp_sided(*classical, 0.0, Side::Below);
    return left_input;
}

GasState SingularSolution::state_plus() const {
    if (stationary) return stationary->right;
    if (classical) return sample_crp_sided(*classical, 0.0, Side::Above);
    return right_input;
}

ResidualReport residual_report(const SingularSolution& sol, const GasModel& model) {
    ResidualReport rr;
    const double scale = speed_scale_of(sol.left_input, sol.right_input, model);
    auto scan = [&](const std::vector<ClassicalWave>& waves, bool left_side) {
        for (const auto& w : waves) {
            append_named_residual(rr, w, model);
            if (w.zero_strength) continue;
            const double excursion = left_side ? w.speed_hi : -w.speed_lo;
            rr.speed_sign_violation = std::max(rr.speed_sign_violation, excursion / scale);
        }
    };
    if (sol.classical) {
        for (const auto& w : sol.classical->waves) append_named_residual(rr, w, model);
    } else {
        scan(sol.left_waves, true);
        scan(sol.right_waves, false);
    }
    if (sol.stationary) {
        rr.stationary_jump = jump_residual(*sol.stationary, model);
    }
    rr.speed_sign_violation = std::max(rr.speed_sign_violation, 0.0);
    return rr;
}

GasState sample(const SingularSolution& sol, double xi, Side side) {
    if (sol.classical) return sample_crp_sided(*sol.classical, xi, side);
    if (xi < 0.0 || (xi == 0.0 && side == Side::Below)) {
        return sample_wave_sequence(sol.left_waves, sol.left_input, sol.model, xi, side);
    }
    return sample_wave_sequence(sol.right_waves, sol.state_plus(), sol.model, xi, side);
}

GasState sample(const SingularSolution& sol, double xi) { return sample(sol, xi, Side::Above); }

StructureType classify(const SingularSolution& sol, const GasModel& model) {
    if (sol.mirrored) {
        return classify(mirror(sol), model);
    }
    const StructureType tag = classify_directed(sol, model, 1e-9);
    if (sol.stationary) {
        const double k = sol.coeffs.composite();
        check_table_ranges(tag, std::fabs(mach_number(sol.stationary->left, model)),
                           std::fabs(mach_number(sol.stationary->right, model)),
                           std::fabs(k) <= kZeroGain ? 0.0 : k, model);
    }
    return tag;
}

SingularSolution mirror(const SingularSolution& sol) {
    SingularSolution out;
    out.structure = sol.structure;
    out.mirrored = !sol.mirrored;
    out.left_input = mirror_state(sol.right_input);
    out.right_input = mirror_state(sol.left_input);
    out.coeffs = sol.coeffs.mirrored();
    out.model = sol.model;
    for (auto it = sol.right_waves.rbegin(); it != sol.right_waves.rend(); ++it)
        out.left_waves.push_back(mirror_wave(*it));
    for (auto it = sol.left_waves.rbegin(); it != sol.left_waves.rend(); ++it)
        out.right_waves.push_back(mirror_wave(*it));
    if (sol.stationary) {
        StationaryWavePair p;
        p.left = mirror_state(sol.stationary->right);
        p.right = mirror_state(sol.stationary->left);
        p.coeffs = sol.stationary->coeffs;  // gains stay attached upstream -> downstream
        p.choked = sol.stationary->choked;
        out.stationary = p;
    }
    if (sol.classical) {
        CRPSolution c;
        c.left = mirror_state(sol.classical->right);
        c.right = mirror_state(sol.classical->left);
        c.model = sol.classical->model;
        c.star_p = sol.classical->star_p;
        c.star_u = -sol.classical->star_u;
        c.star_rho_left = sol.classical->star_rho_right;
        c.star_rho_right = sol.classical->star_rho_left;
        for (auto it = sol.classical->waves.rbegin(); it != sol.classical->waves.rend(); ++it)
            c.waves.push_back(mirror_wave(*it));
        out.classical = c;
    }
    out.diagnostics = sol.diagnostics;
    return out;
}

SingularSolution solve(const GasState& ul, const GasState& ur, const SourceCoefficients& coeffs,
                       const GasModel& model, const CoupledOptions& opts) {
    validate(ul);
    validate(ur);
    validate(model);
    validate(coeffs);

    // Source-off probe: the associate classical problem decides whether the
    // source acts at all. A nonpositive velocity product at the origin turns
    // the source off, and identically zero gains never switch it on.
    CRPSolution crp = solve_crp(ul, ur, model, opts);
    GasState s_minus = sample_crp_sided(crp, 0.0, Side::Below);
    GasState s_plus = sample_crp_sided(crp, 0.0, Side::Above);
    auto snap_u = [&](const GasState& s) {
        return std::fabs(s.u) <= opts.sonic_tol * sound_speed(s, model) ? 0.0 : s.u;
    };
    const double u0m = snap_u(s_minus);
    const double u0p = snap_u(s_plus);
    const bool zero_gains = coeffs.k1 == 0.0 && coeffs.k2 == 0.0 && coeffs.k3 == 0.0;
    if (u0m * u0p <= 0.0 || zero_gains) {
        SingularSolution sol;
        sol.structure = StructureType::SourceOffClassical;
        sol.left_input = ul;
        sol.right_input = ur;
        sol.coeffs = coeffs;
        sol.model = model;
        sol.classical = crp;
        const double scale = speed_scale_of(ul, ur, model);
        const double tol = opts.sonic_tol * scale;
        for (const auto& w : crp.waves) {
            if (w.kind == WaveKind::Rarefaction && !w.zero_strength && w.speed_lo < -tol &&
                w.speed_hi > tol) {
                // transonic fan: split at the origin so each list stays on its side
                const GasState& anchor = w.family == WaveFamily::One ? w.left : w.right;
                const GasState sonic = fan_state(w.family, 0.0, anchor, model);
                ClassicalWave a = w, b = w;
                a.right = sonic;
                a.speed_hi = 0.0;
                b.left = sonic;
                b.speed_lo = 0.0;
                sol.left_waves.push_back(a);
                sol.right_waves.push_back(b);
                continue;
            }
            const double mid = 0.5 * (w.speed_lo + w.speed_hi);
            (mid < -tol ? sol.left_waves : sol.right_waves).push_back(w);
        }
        sol.diagnostics = residual_report(sol, model);
        return sol;
    }

    std::vector<std::string> notes;
    bool vacuum_hit = false;

    DirectedAttempt right = attempt_rightward(ul, ur, coeffs, model, opts);
    if (right.sol) return *right.sol;
    for (auto& n : right.notes) notes.push_back("[rightward] " + n);
    vacuum_hit = vacuum_hit || right.vacuum_hit;

    if (coeffs.k1 < 1.0 && coeffs.k2 < 1.0 && coeffs.k3 < 1.0) {
        DirectedAttempt left = attempt_rightward(mirror_state(ur), mirror_state(ul),
                                                 coeffs.mirrored(), model, opts);
        if (left.sol) return mirror(*left.sol);
        for (auto& n : left.notes) notes.push_back("[leftward] " + n);
        vacuum_hit = vacuum_hit || left.vacuum_hit;
    } else {
        notes.push_back("[leftward] regime inadmissible: some gain >= 1 would drain the upstream flux");
    }

    std::ostringstream oss;
    oss << "no directed regime closed;";
    for (const auto& n : notes) oss << " " << n << ";";
    if (vacuum_hit) throw VacuumError(oss.str());
    throw NoAdmissibleStructureError(oss.str());
}

double verify_uniqueness_pair(const GasState& ul, const GasState& ur,
                              const SourceCoefficients& coeffs, const GasModel& model,
                              const CoupledOptions& opts) {
    {
        // branch multiplicity lives in the solving frame
        CoupledOptions probe_opts = opts;
        probe_opts.regime = RegimeOverride::Auto;
        const SingularSolution probe = solve(ul, ur, coeffs, model, probe_opts);
        if (probe.structure == StructureType::SourceOffClassical)
            throw DomainError("source is off; there is no stationary branch to compare");
        if (probe.mirrored) {
            return verify_uniqueness_pair(mirror_state(ur), mirror_state(ul), coeffs.mirrored(),
                                          model, opts);
        }
    }
    const double k = coeffs.composite();
    CoupledOptions oa = opts, ob = opts;
    if (k > kZeroGain) {
        const CriticalMachNumbers cm = critical_machs(k, model);
        const double m_l = std::fabs(mach_number(ul, model));
        if (std::fabs(m_l - cm.m2) > 1e-6 * cm.m2)
            throw DomainError("input is not a k > 0 double-branch case (M(UL) != M2*)");
        oa.regime = RegimeOverride::Auto;                // supersonic trial: M- = M2*
        ob.regime = RegimeOverride::SkipSupersonicTrial; // left normal shock: M- = M1*
    } else if (k < -kZeroGain) {
        oa.regime = RegimeOverride::ChokedSubsonicOnly;   // M+ = M1**
        ob.regime = RegimeOverride::ChokedSupersonicOnly; // M+ = M2**
    } else {
        throw DomainError("k = 0 has no double-branch stationary waves");
    }
    const SingularSolution sa = solve(ul, ur, coeffs, model, oa);
    const SingularSolution sb = solve(ul, ur, coeffs, model, ob);

    double lo = 0.0, hi = 0.0;
    auto span = [&](const SingularSolution& s) {
        for (const auto& w : s.left_waves) lo = std::min(lo, w.speed_lo);
        for (const auto& w : s.right_waves) hi = std::max(hi, w.speed_hi);
    };
    span(sa);
    span(sb);
    const double pad = 0.2 * std::max(hi - lo, 1.0);
    lo -= pad;
    hi += pad;

    double worst = 0.0;
    const int n = 100;
    for (int i = 0; i < n; ++i) {
        // offset keeps the probe off xi = 0, where the branches differ by a
        // zero-width standing wave
        const double xi = lo + (hi - lo) * (i + 0.5) / n;
        const GasState a = sample(sa, xi);
        const GasState b = sample(sb, xi);
        worst = std::max(worst, std::fabs(a.rho - b.rho) / std::max(a.rho, b.rho));
        worst = std::max(worst, std::fabs(a.p - b.p) / std::max(a.p, b.p));
        const double uscale = std::max({std::fabs(a.u), std::fabs(b.u), sound_speed(a, model)});
        worst = std::max(worst, std::fabs(a.u - b.u) / uscale);
    }
    return worst;
}

}  // namespace eulerps
