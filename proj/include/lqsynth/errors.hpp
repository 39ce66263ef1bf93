#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lqsynth {

// Base class for everything thrown by this library.
struct synthesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent or non-conforming shapes (odd full dimension, mismatched blocks, ...).
struct dimension_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// A matrix fails a structural requirement (not doubled-up, not Bogoliubov, not unitary, ...).
struct structure_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// A scalar parameter is out of range (negative coupling strength, bad frequency grid, ...).
struct parameter_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// An input object failed validation; the message lists the violated invariants.
struct validation_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// NeutralVector: a vector that must have nonzero indefinite norm is numerically neutral.
struct neutral_vector_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// DegenerateComplement: Gram-Schmidt ran out of usable candidates before completing a basis.
struct degenerate_complement_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// AssumptionIViolated: a triangularization step found only neutral eigenvectors, so the
// deflation cannot proceed.  `step` is the 1-based deflation step that failed.
struct assumption_violated_error : synthesis_error {
    int step;
    explicit assumption_violated_error(int step_)
        : synthesis_error("AssumptionIViolated: every eigenvector available at deflation step " +
                          std::to_string(step_) + " is J-neutral"),
          step(step_) {}
};

// NotSemisimple: the coupling Gramian has a defective eigenvalue, so no diagonalizing
// basis of eigenvectors exists.
struct not_semisimple_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// KernelMismatch: rank(N) and rank of the Gramian disagree, so the kernel cannot be
// split off cleanly.
struct kernel_mismatch_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// UnsupportedSpectrum: the Gramian spectrum cannot be matched to the supported
// canonical forms (unpaired complex eigenvalue, odd multiplicities, residual too large).
struct unsupported_spectrum_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// UnitEigenvalue: the Cayley transform of R is undefined because I - R is singular.
struct unit_eigenvalue_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// CayleySingular: the inverse Cayley transform of X is undefined because X + I is singular.
struct cayley_singular_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// AlgebraicLoop: the feedback interconnection has no well-posed solution.
struct algebraic_loop_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// PoleAt: the transfer function was requested at (numerically) a pole.
struct pole_error : synthesis_error {
    std::complex<double> location;
    pole_error(const std::string& msg, std::complex<double> s) : synthesis_error(msg), location(s) {}
};

// A frequency sample could not be evaluated even after jittering around a pole.
struct sampling_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

// Malformed input file (bad JSON, missing fields, wrong shapes).
struct parse_error : synthesis_error {
    using synthesis_error::synthesis_error;
};

}  // namespace lqsynth
