#pragma once

#include <array>
#include <cmath>

#include "eulerps/errors.hpp"

namespace eulerps {

// Ideal polytropic gas, p = (gamma-1) rho e.
struct GasModel {
    double gamma = 1.4;
};

// Primitive state (density, velocity, pressure). Vacuum excluded: rho > 0, p > 0.
struct GasState {
    double rho = 1.0;
    double u = 0.0;
    double p = 1.0;
};

struct ConservedVector {
    double mass = 0.0;      // rho
    double momentum = 0.0;  // rho u
    double energy = 0.0;    // E
};

struct FluxVector {
    double mass = 0.0;      // rho u
    double momentum = 0.0;  // rho u^2 + p
    double energy = 0.0;    // (E + p) u
};

inline void validate(const GasModel& model) {
    if (!(model.gamma > 1.0)) throw DomainError("gamma must exceed 1");
}

inline void validate(const GasState& s) {
    if (!(s.rho > 0.0) || !std::isfinite(s.rho)) throw DomainError("density must be positive");
    if (!(s.p > 0.0) || !std::isfinite(s.p)) throw DomainError("pressure must be positive");
    if (!std::isfinite(s.u)) throw DomainError("velocity must be finite");
}

inline double sound_speed(const GasState& s, const GasModel& m) {
    return std::sqrt(m.gamma * s.p / s.rho);
}

// Signed Mach number, sign(M) = sign(u).
inline double mach_number(const GasState& s, const GasModel& m) {
    return s.u / sound_speed(s, m);
}

inline double total_energy(const GasState& s, const GasModel& m) {
    return s.p / (m.gamma - 1.0) + 0.5 * s.rho * s.u * s.u;
}

inline FluxVector flux(const GasState& s, const GasModel& m) {
    const double e = total_energy(s, m);
    return {s.rho * s.u, s.rho * s.u * s.u + s.p, (e + s.p) * s.u};
}

// (u - a, u, u + a); strictly increasing for any valid state.
inline std::array<double, 3> eigenvalues(const GasState& s, const GasModel& m) {
    const double a = sound_speed(s, m);
    return {s.u - a, s.u, s.u + a};
}

inline ConservedVector conserved_from_primitive(const GasState& s, const GasModel& m) {
    return {s.rho, s.rho * s.u, total_energy(s, m)};
}

inline GasState primitive_from_conserved(const ConservedVector& v, const GasModel& m) {
    if (!(v.mass > 0.0)) throw NonPhysicalError("non-positive density");
    const double u = v.momentum / v.mass;
    const double p = (m.gamma - 1.0) * (v.energy - 0.5 * v.mass * u * u);
    if (!(p > 0.0)) throw NonPhysicalError("non-positive recovered pressure");
    return {v.mass, u, p};
}

// x -> -x frame: (rho, -u, p).
inline GasState mirror_state(const GasState& s) { return {s.rho, -s.u, s.p}; }

// Isentrope invariant p / rho^gamma (monotone in entropy).
inline double isentrope_constant(const GasState& s, const GasModel& m) {
    return s.p / std::pow(s.rho, m.gamma);
}

}  // namespace eulerps
