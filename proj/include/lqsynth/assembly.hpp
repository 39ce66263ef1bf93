#pragma once

#include "lqsynth/synthesis.hpp"

namespace lqsynth {

struct frequency_grid {
    double omega_min = 1e-2;
    double omega_max = 1e3;
    int count = 20;            // log-spaced points in [omega_min, omega_max]
    bool include_zero = true;  // prepend omega = 0
};

// Evaluation points s = i omega for the grid.
std::vector<cplx> sample_points(const frequency_grid& grid);

struct structural_check {
    std::string name;
    double residual;
    bool pass;
};

struct equivalence_report {
    std::vector<cplx> frequencies;  // s values actually used (after any pole jitter)
    std::vector<double> per_frequency_errors;
    double max_rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<structural_check> structural_checks;
};

// Builds the series chain pre -> cavity 0 -> ... -> cavity n-1 as one system.
general_lqss assemble_cascade(const cascade_realization& r);

// Concatenates the cavity bank, closes the interconnect loop through the gain, and
// sandwiches the result between the pre and post networks.
general_lqss assemble_feedback(const feedback_realization& r);

// Samples both transfer functions over the grid and compares them entrywise,
// relative to max(1, |G_source|_max) per frequency.  Poles are jittered by a factor
// (1 + 1e-3); persistent failures raise sampling_error.
equivalence_report verify_equivalence(const general_lqss& source,
                                      const general_lqss& realized,
                                      const frequency_grid& grid = {},
                                      double tol = 1e-6);

}  // namespace lqsynth
