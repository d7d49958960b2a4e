#include "eulerps/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace eulerps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Composite gains this close to zero collapse to the identity regime; keeps
// roundoff in (1+k1)(1+k3)/(1+k2)^2 from opening a spurious micro-gap at M = 1.
constexpr double kZeroTol = 1e-14;

double effective_k(double k) { return std::fabs(k) <= kZeroTol ? 0.0 : k; }

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

double SourceCoefficients::composite() const {
    const double num = k1 + k3 + k1 * k3 - k2 * (2.0 + k2);
    const double den = (1.0 + k2) * (1.0 + k2);
    return num / den;
}

SourceCoefficients SourceCoefficients::inverted() const {
    return {-k1 / (1.0 + k1), -k2 / (1.0 + k2), -k3 / (1.0 + k3)};
}

SourceCoefficients SourceCoefficients::mirrored() const { return {-k1, -k2, -k3}; }

void validate(const SourceCoefficients& c) {
    if (!(c.k1 > -1.0) || !(c.k2 > -1.0) || !(c.k3 > -1.0))
        throw ValidationError("source coefficients must exceed -1");
    if (!std::isfinite(c.k1) || !std::isfinite(c.k2) || !std::isfinite(c.k3))
        throw ValidationError("source coefficients must be finite");
}

double branch_radicand(double m_minus, double k, const GasModel& model) {
    const double g = model.gamma;
    const double m2 = m_minus * m_minus;
    const double d = m2 - 1.0;
    return d * d - k * (g + 1.0) * m2 * ((g - 1.0) * m2 + 2.0);
}

double i_value(double m_minus, double k, const GasModel& model) {
    if (!(m_minus > 0.0)) throw DomainError("upstream Mach must be positive");
    const double g = model.gamma;
    double rad = branch_radicand(m_minus, k, model);
    const double denom = g * m_minus * m_minus + 1.0;
    if (rad < 0.0) {
        if (rad > -1e-14 * denom * denom) {
            rad = 0.0;  // grazing the existence boundary
        } else {
            throw NoSolutionError("stationary wave does not exist at M- = " +
                                  std::to_string(m_minus));
        }
    }
    return std::sqrt(rad) / denom;
}

double branch_mach(StationaryBranch branch, double m_minus, double k, const GasModel& model) {
    const double g = model.gamma;
    const double i = i_value(m_minus, k, model);
    if (branch == StationaryBranch::Subsonic) {
        return std::sqrt((1.0 - i) / (1.0 + g * i));
    }
    const double gi = g * i;
    if (gi > 1.0 + 1e-14) {
        throw BranchUndefinedError("supersonic branch undefined: gamma*I = " + std::to_string(gi));
    }
    if (gi >= 1.0) return kInf;
    return std::sqrt((1.0 + i) / (1.0 - gi));
}

CriticalMachNumbers critical_machs(double k, const GasModel& model) {
    validate(model);
    if (!(k > -1.0)) throw DomainError("composite gain must exceed -1");
    const double g = model.gamma;
    k = effective_k(k);
    CriticalMachNumbers cm;
    if (k == 0.0) {
        cm.m1 = 1.0;
        cm.m2 = 1.0;
        cm.m3 = kInf;
        return cm;
    }
    if (k > 0.0) {
        // m1^2 = (A - B)/C rationalizes to 1/(A + B) with A = k(gamma+1)+1,
        // B = (gamma+1) sqrt(k(k+1)), C = 1 + k - k gamma^2; the rationalized
        // form has no singularity at C = 0 and reproduces the dedicated
        // k = 1/(gamma^2-1) value sqrt((gamma-1)/(2 gamma)) exactly.
        const double a = k * (g + 1.0) + 1.0;
        const double b = (g + 1.0) * std::sqrt(k * (k + 1.0));
        const double c = 1.0 + k - k * g * g;
        cm.m1 = 1.0 / std::sqrt(a + b);
        if (c > 0.0) {
            cm.m2 = std::sqrt((a + b) / c);
            const double d = std::sqrt(1.0 - k * (g * g - 1.0));
            cm.m3 = std::sqrt((g + d) / (g * (1.0 - d)));
        } else {
            cm.m2 = kInf;
            cm.m3 = kInf;
        }
        return cm;
    }
    const double s = std::sqrt(-k);
    cm.m1 = std::sqrt((1.0 - s) / (1.0 + g * s));
    if (g * s < 1.0) {
        cm.m2 = std::sqrt((1.0 + s) / (1.0 - g * s));
        const double r1 = std::sqrt(1.0 + k);
        const double r2 = std::sqrt(1.0 + k * g * g);
        cm.m3 = std::sqrt((g * r1 + r2) / (g * (r1 - r2)));
    } else {
        cm.m2 = kInf;
        cm.m3 = 1.0;
    }
    return cm;
}

bool MachInterval::contains(double m, double tol) const {
    if (empty()) return false;
    const double lo_slack = tol * std::max(1.0, std::fabs(lo));
    const double hi_slack = std::isinf(hi) ? 0.0 : tol * std::max(1.0, std::fabs(hi));
    if (closed_lo ? m < lo - lo_slack : m <= lo + lo_slack) return false;
    if (closed_hi ? m > hi + hi_slack : m >= hi - hi_slack) return false;
    return true;
}

bool AdmissibleSets::contains_upstream(double m, double tol) const {
    return minus_subsonic.contains(m, tol) || minus_supersonic.contains(m, tol);
}

bool AdmissibleSets::contains_downstream(double m, double tol) const {
    return plus_subsonic.contains(m, tol) || plus_supersonic.contains(m, tol);
}

AdmissibleSets admissible_sets(double k, const GasModel& model) {
    const CriticalMachNumbers cm = critical_machs(k, model);
    k = effective_k(k);
    AdmissibleSets s;
    if (k > 0.0) {
        s.minus_subsonic = {0.0, cm.m1, false, true};
        s.minus_supersonic = {cm.m2, kInf, true, false};
        s.plus_subsonic = {0.0, 1.0, false, true};
        s.plus_supersonic = {1.0, cm.m3, true, false};
    } else if (k < 0.0) {
        s.minus_subsonic = {0.0, 1.0, false, true};
        s.minus_supersonic = {1.0, cm.m3, true, false};
        s.plus_subsonic = {0.0, cm.m1, false, true};
        s.plus_supersonic = {cm.m2, kInf, true, false};
    } else {
        s.minus_subsonic = {0.0, 1.0, false, true};
        s.minus_supersonic = {1.0, kInf, true, false};
        s.plus_subsonic = s.minus_subsonic;
        s.plus_supersonic = s.minus_supersonic;
    }
    return s;
}

MachSolutions downstream_mach(double m_minus, double k, const GasModel& model, double sonic_tol) {
    if (!(m_minus > 0.0)) throw DomainError("upstream Mach must be positive");
    k = effective_k(k);
    MachSolutions out;
    if (k == 0.0) {
        out.value[0] = m_minus;
        out.count = 1;
        return out;
    }
    const CriticalMachNumbers cm = critical_machs(k, model);
    const bool sonic = std::fabs(m_minus - 1.0) <= sonic_tol;
    if (sonic) {
        if (k > 0.0) {
            throw NoSolutionError("M- = 1 lies in the nonexistence gap for positive gain");
        }
        out.value[0] = cm.m1;
        out.count = 1;
        if (std::isfinite(cm.m2)) {
            out.value[1] = cm.m2;
            out.count = 2;
        }
        return out;
    }
    if (m_minus < 1.0) {
        double m = m_minus;
        if (k > 0.0) {
            if (near(m, cm.m1, sonic_tol)) m = cm.m1;
            else if (m > cm.m1)
                throw NoSolutionError("M- inside the nonexistence gap (subsonic side)");
        }
        out.value[0] = branch_mach(StationaryBranch::Subsonic, m, k, model);
        out.count = 1;
        return out;
    }
    double m = m_minus;
    if (k > 0.0) {
        if (near(m, cm.m2, sonic_tol)) m = cm.m2;
        else if (m < cm.m2)
            throw NoSolutionError("M- inside the nonexistence gap (supersonic side)");
    } else {
        if (m >= cm.m3 && !near(m, cm.m3, sonic_tol))
            throw NoSolutionError("M- beyond the supersonic existence bound");
        if (near(m, cm.m3, sonic_tol))
            throw NoSolutionError("M- at the open supersonic existence bound");
    }
    out.value[0] = branch_mach(StationaryBranch::Supersonic, m, k, model);
    out.count = 1;
    return out;
}

MachSolutions upstream_mach(double m_plus, double k, const GasModel& model, double sonic_tol) {
    // The backward map is the forward map with inverted gains.
    const double kb = effective_k(-k / (1.0 + k));
    MachSolutions got = downstream_mach(m_plus, kb, model, sonic_tol);
    // Subsonic-first ordering is inherited from downstream_mach.
    return got;
}

StateRatios state_ratios(double m_minus, double m_plus, const SourceCoefficients& coeffs,
                         const GasModel& model) {
    if (!(m_minus > 0.0) || !(m_plus > 0.0)) throw DomainError("Mach numbers must be positive");
    const double g = model.gamma;
    const double qm = g * m_minus * m_minus + 1.0;
    const double qp = g * m_plus * m_plus + 1.0;
    const double r = m_minus / m_plus;
    StateRatios out;
    out.density = r * r * (qp / qm) * (1.0 + coeffs.k1) * (1.0 + coeffs.k1) / (1.0 + coeffs.k2);
    out.velocity = (qm / qp) / (r * r) * (1.0 + coeffs.k2) / (1.0 + coeffs.k1);
    out.pressure = (qm / qp) * (1.0 + coeffs.k2);
    return out;
}

namespace {

StationaryWavePair pair_from_mach(const GasState& upstream, double m_minus, double m_plus,
                                  const SourceCoefficients& coeffs, const GasModel& model,
                                  double sonic_tol) {
    const StateRatios r = state_ratios(m_minus, m_plus, coeffs, model);
    StationaryWavePair pair;
    pair.left = upstream;
    pair.right = {upstream.rho * r.density, upstream.u * r.velocity, upstream.p * r.pressure};
    pair.coeffs = coeffs;
    pair.choked = std::fabs(m_minus - 1.0) <= sonic_tol || std::fabs(m_plus - 1.0) <= sonic_tol;
    return pair;
}

}  // namespace

std::vector<StationaryWavePair> forward_curve(const GasState& upstream,
                                              const SourceCoefficients& coeffs,
                                              const GasModel& model, double sonic_tol) {
    validate(upstream);
    validate(coeffs);
    if (!(upstream.u > 0.0))
        throw DomainError("forward stationary curve requires positive upstream velocity");
    const double k = coeffs.composite();
    const double m_minus = mach_number(upstream, model);
    const MachSolutions ms = downstream_mach(m_minus, k, model, sonic_tol);
    std::vector<StationaryWavePair> out;
    out.reserve(ms.count);
    for (int i = 0; i < ms.count; ++i) {
        out.push_back(pair_from_mach(upstream, m_minus, ms.value[i], coeffs, model, sonic_tol));
    }
    return out;
}

std::vector<StationaryWavePair> backward_curve(const GasState& downstream,
                                               const SourceCoefficients& coeffs,
                                               const GasModel& model, double sonic_tol) {
    validate(downstream);
    validate(coeffs);
    if (!(downstream.u > 0.0))
        throw DomainError("backward stationary curve requires positive downstream velocity");
    // The backward map is the forward map with inverted gains.
    std::vector<StationaryWavePair> fwd = forward_curve(downstream, coeffs.inverted(), model, sonic_tol);
    std::vector<StationaryWavePair> out;
    out.reserve(fwd.size());
    for (const auto& p : fwd) {
        StationaryWavePair q;
        q.left = p.right;  // the computed state sits upstream of the input
        q.right = downstream;
        q.coeffs = coeffs;
        q.choked = p.choked;
        out.push_back(q);
    }
    return out;
}

CriterionCheck satisfies_criterion(const GasState& left, const GasState& right,
                                   const GasModel& model) {
    CriterionCheck c;
    const auto ll = eigenvalues(left, model);
    const auto lr = eigenvalues(right, model);
    c.eigenvalue_form = true;
    for (int i = 0; i < 3; ++i) {
        c.products[i] = ll[i] * lr[i];
        if (c.products[i] < 0.0) c.eigenvalue_form = false;
    }
    const double mm = std::fabs(mach_number(left, model));
    const double mp = std::fabs(mach_number(right, model));
    c.mach_form = left.u * right.u >= 0.0 && (mm - 1.0) * (mp - 1.0) >= 0.0;
    return c;
}

bool is_choked(const StationaryWavePair& pair, const GasModel& model, double tol) {
    const auto ll = eigenvalues(pair.left, model);
    const auto lr = eigenvalues(pair.right, model);
    const double scale =
        std::max(std::fabs(pair.left.u) + sound_speed(pair.left, model),
                 std::fabs(pair.right.u) + sound_speed(pair.right, model));
    double best = kInf;
    for (int i = 0; i < 3; ++i) best = std::min(best, std::fabs(ll[i] * lr[i]));
    return best <= tol * scale * scale;
}

MachRegion region_of(double m_minus, double m_plus, double tol) {
    if (!(m_minus > 0.0) || !(m_plus > 0.0)) throw OutsideAdmissibleError("Mach numbers must be positive");
    const bool sub = m_minus <= 1.0 + tol && m_plus <= 1.0 + tol;
    const bool sup = m_minus >= 1.0 - tol && m_plus >= 1.0 - tol;
    if (!sub && !sup)
        throw OutsideAdmissibleError("(M-, M+) outside the admissible quadrants");
    if (std::fabs(m_minus - 1.0) <= tol || std::fabs(m_plus - 1.0) <= tol ||
        std::fabs(m_plus - m_minus) <= tol)
        return MachRegion::Boundary;
    if (sub) return m_plus > m_minus ? MachRegion::Omega1 : MachRegion::Omega2;
    return m_plus > m_minus ? MachRegion::Omega3 : MachRegion::Omega4;
}

std::vector<GasState> oracle_jump_solutions(const GasState& upstream,
                                            const SourceCoefficients& coeffs,
                                            const GasModel& model) {
    validate(upstream);
    if (!(upstream.u > 0.0)) throw DomainError("oracle requires positive upstream velocity");
    const double g = model.gamma;
    const double mflux = (1.0 + coeffs.k1) * upstream.rho * upstream.u;
    const double pflux = (1.0 + coeffs.k2) * (upstream.rho * upstream.u * upstream.u + upstream.p);
    const double eflux = (1.0 + coeffs.k3) * (total_energy(upstream, model) + upstream.p) * upstream.u;

    // Mass and momentum rows give rho = mflux/u and p = pflux - mflux*u; the
    // energy-row residual is scanned in u.
    auto residual = [&](double u) {
        const double p = pflux - mflux * u;
        return u * (g * p / (g - 1.0) + 0.5 * mflux * u) - eflux;
    };
    auto valid = [&](double u) { return u > 0.0 && pflux - mflux * u > 0.0; };

    const double a0 = sound_speed(upstream, model);
    const double u_max = 4.0 * std::max(upstream.u, upstream.u + 6.0 * a0);
    const int n = 40000;
    std::vector<GasState> roots;
    auto push_root = [&](double ur) {
        const double pr = pflux - mflux * ur;
        if (!(pr > 0.0)) return;
        bool dup = false;
        for (const auto& s : roots) dup = dup || std::fabs(s.u - ur) <= 1e-9 * (1.0 + ur);
        if (!dup) roots.push_back({mflux / ur, ur, pr});
    };
    double prev_u = 0.0;
    double prev_r = 0.0;
    bool have_prev = false;
    for (int i = 1; i <= n; ++i) {
        const double u = u_max * static_cast<double>(i) / n;
        if (!valid(u)) break;
        const double r = residual(u);
        if (r == 0.0) {
            push_root(u);
        } else if (have_prev && prev_r != 0.0 && prev_r * r < 0.0) {
            double lo = prev_u, hi = u, rlo = prev_r;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double rm = residual(mid);
                if (rm == 0.0 || hi - lo < 1e-12 * (1.0 + hi)) break;
                if (rlo * rm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    rlo = rm;
                }
            }
            push_root(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_r = r;
        have_prev = true;
    }
    return roots;
}

std::vector<GasState> all_jump_solutions(const GasState& upstream,
                                         const SourceCoefficients& coeffs, const GasModel& model) {
    validate(upstream);
    if (!(upstream.u > 0.0)) throw DomainError("positive upstream velocity required");
    const double k = effective_k(coeffs.composite());
    const double m = std::fabs(mach_number(upstream, model));
    std::vector<GasState> out;
    if (branch_radicand(m, k, model) < 0.0) return out;
    const double m_sub = branch_mach(StationaryBranch::Subsonic, m, k, model);
    out.push_back(pair_from_mach(upstream, m, m_sub, coeffs, model, 0.0).right);
    try {
        const double m_sup = branch_mach(StationaryBranch::Supersonic, m, k, model);
        if (std::isfinite(m_sup) && std::fabs(m_sup - m_sub) > 1e-12 * (1.0 + m_sup)) {
            out.push_back(pair_from_mach(upstream, m, m_sup, coeffs, model, 0.0).right);
        }
    } catch (const BranchUndefinedError&) {
    }
    return out;
}

double jump_residual(const StationaryWavePair& pair, const GasModel& model) {
    // Gains scale the upstream flux: the left state for rightward flow, the
    // right state for leftward flow.
    const bool rightward = pair.left.u > 0.0 || pair.right.u > 0.0;
    const GasState& up = rightward ? pair.left : pair.right;
    const GasState& down = rightward ? pair.right : pair.left;
    const FluxVector fu = flux(up, model);
    const FluxVector fd = flux(down, model);
    const double gains[3] = {1.0 + pair.coeffs.k1, 1.0 + pair.coeffs.k2, 1.0 + pair.coeffs.k3};
    const double lhs[3] = {gains[0] * fu.mass, gains[1] * fu.momentum, gains[2] * fu.energy};
    const double rhs[3] = {fd.mass, fd.momentum, fd.energy};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double scale = std::max({std::fabs(lhs[i]), std::fabs(rhs[i]), 1e-300});
        worst = std::max(worst, std::fabs(lhs[i] - rhs[i]) / scale);
    }
    return worst;
}

double normal_shock_conjugate(double m, const GasModel& model) {
    if (!(m >= 1.0)) throw DomainError("normal shock requires supersonic upstream Mach");
    const double g = model.gamma;
    return std::sqrt(((g - 1.0) * m * m + 2.0) / (2.0 * g * m * m - (g - 1.0)));
}

}  // namespace eulerps
