#pragma once

#include <array>
#include <vector>

#include "eulerps/gas.hpp"

namespace eulerps {

// Source gains applied to the upstream flux: F(U+) = diag(1+k1, 1+k2, 1+k3) F(U-).
// Each gain must exceed -1.
struct SourceCoefficients {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    // Composite gain k = (1+k1)(1+k3)/(1+k2)^2 - 1; its sign selects the regime.
    double composite() const;

    // Coefficients -ki/(1+ki): the forward map with these inverts the original.
    SourceCoefficients inverted() const;

    // Coefficients -ki: the x -> -x frame sees these gains.
    SourceCoefficients mirrored() const;
};

void validate(const SourceCoefficients& c);

// Boundary Mach numbers of the admissible sets. For k > 0: the sonic
// pre-images m1 < 1 < m2 and the downstream supremum m3. For k < 0: the sonic
// images m1 < 1 < m2 and the upstream supremum m3. m2 and m3 may be +inf;
// for k <= -1/gamma^2, m3 degenerates to 1 (no supersonic stationary waves).
struct CriticalMachNumbers {
    double m1 = 1.0;
    double m2 = 1.0;
    double m3 = 0.0;
};

CriticalMachNumbers critical_machs(double k, const GasModel& model);

// Half-open/closed interval of Mach numbers.
struct MachInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_lo = false;
    bool closed_hi = false;
    bool contains(double m, double tol) const;
    bool empty() const { return lo > hi || (lo == hi && !(closed_lo && closed_hi)); }
};

// The four admissible intervals keyed by branch and side (one row of the
// k-signed table each).
struct AdmissibleSets {
    MachInterval minus_subsonic;
    MachInterval minus_supersonic;
    MachInterval plus_subsonic;
    MachInterval plus_supersonic;
    bool contains_upstream(double m, double tol) const;
    bool contains_downstream(double m, double tol) const;
};

AdmissibleSets admissible_sets(double k, const GasModel& model);

// Radicand of the branch discriminant in the cancellation-free form
// (M^2-1)^2 - k (gamma+1) M^2 [(gamma-1) M^2 + 2]; nonnegative iff a
// stationary wave exists at this upstream Mach.
double branch_radicand(double m_minus, double k, const GasModel& model);

// I(M-) in [0, 1]; throws NoSolutionError when the radicand is negative.
double i_value(double m_minus, double k, const GasModel& model);

enum class StationaryBranch { Subsonic, Supersonic };

// Downstream Mach on one branch. The supersonic branch additionally requires
// gamma*I <= 1 (BranchUndefinedError otherwise).
double branch_mach(StationaryBranch branch, double m_minus, double k, const GasModel& model);

// At most two Mach numbers, subsonic candidate first.
struct MachSolutions {
    std::array<double, 2> value{};
    int count = 0;
};

// Criterion-selected downstream Mach numbers for an admissible upstream Mach.
// Exactly one except the double case (k < 0, M- = 1). Throws NoSolutionError
// outside the admissible set.
MachSolutions downstream_mach(double m_minus, double k, const GasModel& model,
                              double sonic_tol = 1e-9);

// Upstream pre-images of an admissible downstream Mach; mirror of
// downstream_mach under the gain inversion. Double case at k > 0, M+ = 1.
MachSolutions upstream_mach(double m_plus, double k, const GasModel& model,
                            double sonic_tol = 1e-9);

struct StateRatios {
    double density = 1.0;
    double velocity = 1.0;
    double pressure = 1.0;
};

// Downstream/upstream state ratios as functions of the two Mach numbers.
StateRatios state_ratios(double m_minus, double m_plus, const SourceCoefficients& coeffs,
                         const GasModel& model);

struct StationaryWavePair {
    GasState left;   // U- (upstream, u > 0)
    GasState right;  // U+ (downstream)
    SourceCoefficients coeffs;
    bool choked = false;
};

// All downstream states reachable from an upstream state with u > 0 under the
// monotonicity criterion (one, or two in the double case), subsonic first.
std::vector<StationaryWavePair> forward_curve(const GasState& upstream,
                                              const SourceCoefficients& coeffs,
                                              const GasModel& model, double sonic_tol = 1e-9);

// All upstream states that map onto a downstream state with u > 0.
std::vector<StationaryWavePair> backward_curve(const GasState& downstream,
                                               const SourceCoefficients& coeffs,
                                               const GasModel& model, double sonic_tol = 1e-9);

// Both criteria evaluated independently: eigenvalue products and the Mach
// form u-.u+ >= 0 and (|M-|-1)(|M+|-1) >= 0.
struct CriterionCheck {
    bool eigenvalue_form = false;
    bool mach_form = false;
    std::array<double, 3> products{};
};

CriterionCheck satisfies_criterion(const GasState& left, const GasState& right,
                                   const GasModel& model);

// True iff some eigenvalue product vanishes, i.e. M- = 1 or M+ = 1 within tol.
bool is_choked(const StationaryWavePair& pair, const GasModel& model, double tol = 1e-9);

enum class MachRegion { Omega1, Omega2, Omega3, Omega4, Boundary };

// Quadrant position of an admissible (M-, M+) pair relative to the diagonal.
MachRegion region_of(double m_minus, double m_plus, double tol = 1e-9);

// Independent verification oracle: all real solutions U+ of the jump
// relations, found without the Mach-branch closed forms. Density and pressure
// are eliminated through the mass and momentum rows; the energy-row residual
// is scanned over a dense velocity grid and each sign change is bisected.
// Empty result means nonexistence.
std::vector<GasState> oracle_jump_solutions(const GasState& upstream,
                                            const SourceCoefficients& coeffs,
                                            const GasModel& model);

// Closed-form counterpart of the oracle: both branch solutions where defined,
// without the criterion filter. Used by the equivalence suite.
std::vector<GasState> all_jump_solutions(const GasState& upstream,
                                         const SourceCoefficients& coeffs, const GasModel& model);

// Relative residual of the flux jump relation, componentwise maximum.
double jump_residual(const StationaryWavePair& pair, const GasModel& model);

// Downstream Mach of a standing normal shock (the k = 0 conjugate), m >= 1.
double normal_shock_conjugate(double m, const GasModel& model);

}  // namespace eulerps
