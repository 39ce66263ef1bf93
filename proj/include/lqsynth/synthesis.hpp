#pragma once

#include "lqsynth/lqss.hpp"

namespace lqsynth {

// Cascade realization: a static pre network followed by a series chain of single-mode
// cavities (cavity 0 is the most upstream, directly after the pre network).
struct cascade_realization {
    bool passive = true;
    cmat pre_network;  // m x m unitary (passive) or 2m x 2m Bogoliubov full matrix
    std::vector<cavity_spec> cavities;
    doubled_matrix transform;       // mode-space transform that triangularized the drift
    std::vector<cplx> eigen_order;  // drift eigenvalues in cascade order
};

// A cavity placed on global lines.  Lines 0..m-1 are system lines, lines m..m+n-1 are
// feedback loop lines; port_lines[p] is the line port p sits on.
struct placed_cavity {
    cavity_spec spec;
    std::vector<index_t> port_lines;
};

// Two identical cavities realizing a complex conjugate Gramian pair on system lines
// (line_a, line_b).  Signal order: compensator, cavity_a, mid, cavity_b.
struct pair_block {
    index_t cavity_a = 0;  // index into feedback_realization::cavities
    index_t cavity_b = 0;
    index_t line_a = 0;
    index_t line_b = 0;
    cmat mid;          // 2 x 2 unitary between the cavities on (line_a, line_b)
    cmat compensator;  // 2 x 2 unitary before cavity_a on (line_a, line_b)
};

struct spectrum_audit {
    std::vector<double> lambda_plus, lambda_minus;
    std::vector<cplx> lambda_complex;
    std::vector<double> alphas, betas;
    index_t zero_modes = 0;
    index_t rank = 0;  // modes coupled to the system lines
};

// Feedback realization: pre network, a bank of concurrently placed cavities whose
// interconnect ports are tied together through a static gain, and a post network.
struct feedback_realization {
    bool passive = true;
    cmat pre_network;   // m x m or 2m x 2m full matrix
    cmat post_network;  // m x m or 2m x 2m full matrix
    std::vector<placed_cavity> cavities;
    std::vector<pair_block> pairs;
    cmat feedback_gain;  // n x n unitary or 2n x 2n Bogoliubov full matrix
    std::vector<double> detunings;                // free detuning choices, one per mode
    std::vector<double> interconnect_couplings;   // interconnect amplitudes, one per mode
    spectrum_audit audit;
};

struct feedback_params {
    std::vector<double> detunings;               // empty means all zero
    std::vector<double> interconnect_couplings;  // empty means all one
};

cascade_realization cascade_passive(const passive_lqss& sys,
                                    const eigen_ordering& ordering = {});
cascade_realization cascade_general(const general_lqss& sys,
                                    const eigen_ordering& ordering = {});

feedback_realization feedback_passive(const passive_lqss& sys,
                                      const feedback_params& params = {});
feedback_realization feedback_general(const general_lqss& sys,
                                      const feedback_params& params = {});
// Same construction from an externally supplied coupling factorization.
feedback_realization feedback_general_from_svd(const general_lqss& sys,
                                               const krein_svd_result& svd,
                                               const feedback_params& params = {});

// Reads one cavity's port rates and phases off a doubled 2m x 2 coupling column pair.
cavity_spec extract_cavity_params(const doubled_matrix& column_pair, double detuning);

}  // namespace lqsynth
