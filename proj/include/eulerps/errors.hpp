#pragma once

#include <stdexcept>
#include <string>

namespace eulerps {

// Exit codes used by the CLI; library errors map onto these.
enum class ExitCode : int {
    Ok = 0,
    Validation = 2,
    Vacuum = 3,
    Convergence = 4,
    ClassificationConflict = 5,
    NoAdmissibleStructure = 6,
};

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual ExitCode exit_code() const { return ExitCode::Validation; }
    virtual const char* kind() const { return "error"; }
};

// Precondition violated (pressure off the admissible branch, etc.)
struct DomainError : Error {
    using Error::Error;
    const char* kind() const override { return "domain"; }
};

// Conserved vector with non-positive density or recovered pressure.
struct NonPhysicalError : Error {
    using Error::Error;
    const char* kind() const override { return "non_physical"; }
};

// Stationary wave does not exist for the requested upstream/downstream Mach.
struct NoSolutionError : Error {
    using Error::Error;
    const char* kind() const override { return "no_solution"; }
};

// Supersonic branch requested where gamma*I > 1.
struct BranchUndefinedError : Error {
    using Error::Error;
    const char* kind() const override { return "branch_undefined"; }
};

// Rankine-Hugoniot speed estimates disagree across components.
struct InconsistentStatesError : Error {
    using Error::Error;
    const char* kind() const override { return "inconsistent_states"; }
};

// Mach pair outside the criterion quadrants.
struct OutsideAdmissibleError : Error {
    using Error::Error;
    const char* kind() const override { return "outside_admissible"; }
};

struct VacuumError : Error {
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::Vacuum; }
    const char* kind() const override { return "vacuum"; }
};

struct ConvergenceError : Error {
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::Convergence; }
    const char* kind() const override { return "convergence"; }
};

// Wave pattern and Mach-range table disagree about the structure type.
struct ClassificationConflictError : Error {
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::ClassificationConflict; }
    const char* kind() const override { return "classification_conflict"; }
};

// No directed regime produced a verifiable solution; message carries
// the per-attempt diagnostics.
struct NoAdmissibleStructureError : Error {
    using Error::Error;
    ExitCode exit_code() const override { return ExitCode::NoAdmissibleStructure; }
    const char* kind() const override { return "no_admissible_structure"; }
};

struct ParseError : Error {
    using Error::Error;
    const char* kind() const override { return "parse"; }
};

struct ValidationError : Error {
    using Error::Error;
    const char* kind() const override { return "validation"; }
};

}  // namespace eulerps
