#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eulerps/classical.hpp"
#include "eulerps/stationary.hpp"

namespace eulerps {

// The seven global wave patterns plus the source-off (classical) case.
enum class StructureType {
    Type1,  // W . D . C . W      non-choked, subsonic stationary wave
    Type2,  // D . W . C . W      non-choked, supersonic stationary wave
    Type3,  // W . D . R . C . W  choked downstream (M+ = 1), k > 0
    Type4,  // D . R . C . W      choked downstream (M+ = 1), k > 0
    Type5,  // R . D . W . C . W  choked upstream (M- = 1), k < 0, M+ > 1
    Type6,  // R . D . C . W      choked upstream (M- = 1), k < 0, M+ < 1
    Type7,  // R . D . R . C . W  choked on both sides, k = 0
    SourceOffClassical,
};

const char* to_string(StructureType t);

struct ResidualReport {
    double shock_rh = 0.0;              // worst Rankine-Hugoniot component residual
    double rarefaction_invariant = 0.0; // worst Riemann-invariant drift across a fan
    double contact_mismatch = 0.0;      // worst u/p mismatch across a contact
    double stationary_jump = 0.0;       // flux jump-relation residual
    double speed_sign_violation = 0.0;  // worst excursion of a wave into the wrong half-plane
    double overall() const;
};

// Directed-regime override, used by the uniqueness verification to force one
// admissible branch in the double-solution cases.
enum class RegimeOverride {
    Auto,
    SkipSupersonicTrial,   // k > 0 double case: drive the left-shock path
    ChokedSubsonicOnly,    // k < 0 double case: accept only the M+ < 1 candidate
    ChokedSupersonicOnly,  // k < 0 double case: accept only the M+ > 1 candidate
};

struct CoupledOptions : SolveOptions {
    RegimeOverride regime = RegimeOverride::Auto;
};

// Self-similar solution of the Riemann problem with the delta source.
// Left waves carry nonpositive speeds, right waves nonnegative speeds; the
// stationary pair (when present) sits at xi = 0.
struct SingularSolution {
    StructureType structure = StructureType::SourceOffClassical;
    bool mirrored = false;  // solved in the x -> -x frame
    GasState left_input;
    GasState right_input;
    SourceCoefficients coeffs;
    GasModel model;
    std::vector<ClassicalWave> left_waves;
    std::vector<ClassicalWave> right_waves;
    std::optional<StationaryWavePair> stationary;
    std::optional<CRPSolution> classical;  // the source-off case keeps the CRP
    ResidualReport diagnostics;

    // States adjacent to the origin (equal to each other in the source-off case).
    GasState state_minus() const;
    GasState state_plus() const;
};

SingularSolution solve(const GasState& ul, const GasState& ur, const SourceCoefficients& coeffs,
                       const GasModel& model, const CoupledOptions& opts = {});

// Sample at xi = x/t; xi = 0 returns the right limit. For one-sided limits at
// discontinuities use the Side overload.
GasState sample(const SingularSolution& sol, double xi);
GasState sample(const SingularSolution& sol, double xi, Side side);

// Pattern-first classification cross-checked against the Mach-range table;
// throws ClassificationConflictError when the two disagree.
StructureType classify(const SingularSolution& sol, const GasModel& model);

ResidualReport residual_report(const SingularSolution& sol, const GasModel& model);

// Mirror transform x -> -x, u -> -u of a full solution (involution).
SingularSolution mirror(const SingularSolution& sol);

// For inputs that admit two stationary branches, builds the global solution
// along both and checks pointwise agreement of the samples. Returns the worst
// relative deviation over the probe grid.
double verify_uniqueness_pair(const GasState& ul, const GasState& ur,
                              const SourceCoefficients& coeffs, const GasModel& model,
                              const CoupledOptions& opts = {});

}  // namespace eulerps
