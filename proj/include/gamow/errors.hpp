#ifndef GAMOW_ERRORS_HPP
#define GAMOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gamow {

// All failures are thrown; callers that want status codes catch at the boundary
// (the CLI maps these to exit codes).
struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Input rejected before any computation ran.
struct DomainViolation : Error {
    explicit DomainViolation(const std::string &msg) : Error(msg) {}
};

// An iterative scheme hit its budget without reaching tolerance.
struct NonConvergence : Error {
    explicit NonConvergence(const std::string &msg) : Error(msg) {}
};

// Winding number came out too far from an integer to trust.
struct Inconclusive : Error {
    explicit Inconclusive(const std::string &msg) : Error(msg) {}
};

// |f| dipped below the safety floor on a counting-region boundary.
struct BoundaryZero : Error {
    explicit BoundaryZero(const std::string &msg) : Error(msg) {}
};

// Newton hit a vanishing derivative.
struct DerivativeVanishes : Error {
    explicit DerivativeVanishes(const std::string &msg) : Error(msg) {}
};

// Root accepted by the local solver lies outside the requested region.
struct EscapedRegion : Error {
    explicit EscapedRegion(const std::string &msg) : Error(msg) {}
};

// Evaluation requested at (or too near) q = 0 where the half-line problem
// degenerates; the caller gets the flag rather than a silent series limit.
struct ThresholdLimit : Error {
    explicit ThresholdLimit(const std::string &msg) : Error(msg) {}
};

// Requested point sits on a relevant branch point (z = 0 on sheet II).
struct BranchPointError : Error {
    explicit BranchPointError(const std::string &msg) : Error(msg) {}
};

// S-matrix evaluation requested on top of a pole.
struct AtPole : Error {
    explicit AtPole(const std::string &msg) : Error(msg) {}
};

// No truncation radius keeps the pairing tail below target for this input.
struct TruncationFailure : Error {
    explicit TruncationFailure(const std::string &msg) : Error(msg) {}
};

// Contour-residue cross check disagrees with the simple-pole formula.
struct MultiplePole : Error {
    explicit MultiplePole(const std::string &msg) : Error(msg) {}
};

// Survival series never develops a single-resonance dominance window.
struct FitWindowEmpty : Error {
    explicit FitWindowEmpty(const std::string &msg) : Error(msg) {}
};

// Time-dependent amplitudes are defined for t > 0 only.
struct TZeroRejected : Error {
    explicit TZeroRejected(const std::string &msg) : Error(msg) {}
};

// Config file is not syntactically valid JSON (or the CSV/JSON reader choked).
struct ParseError : Error {
    explicit ParseError(const std::string &msg) : Error(msg) {}
};

// Config parsed but violates an invariant (unknown key, bad geometry, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

} // namespace gamow

#endif
