#pragma once

#include "lqsynth/krein.hpp"

#include <string>
#include <vector>

namespace lqsynth {

// Passive linear quantum stochastic system (S, N, M): S unitary m x m scattering,
// N m x n coupling, M Hermitian n x n interaction.
struct passive_lqss {
    index_t n_modes = 0;
    index_t n_io = 0;
    cmat s, n, m;
};

// General linear quantum stochastic system: S Bogoliubov, N doubled-up coupling,
// M Hermitian doubled-up interaction, all stored by top blocks.
struct general_lqss {
    index_t n_modes = 0;
    index_t n_io = 0;
    doubled_matrix s, n, m;

    // Static network: no internal modes, scattering only.
    static general_lqss static_network(const doubled_matrix& scattering);
};

struct validation_issue {
    std::string check;
    double residual;
};

struct validation_report {
    std::vector<validation_issue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

validation_report validate(const passive_lqss& sys, double tol = 1e-8);
validation_report validate(const general_lqss& sys, double tol = 1e-8);

// Lifts a passive system into the doubled-up representation.
general_lqss embed_passive(const passive_lqss& sys);

// Drift matrix F = -i M - N^dagger N / 2 (n x n).
cmat drift_matrix(const passive_lqss& sys);
// Drift matrix F = -i J M - N^flat N / 2 (2n x 2n, doubled-up).
cmat drift_matrix(const general_lqss& sys);

// G(s) = [I - N (sI - F)^{-1} N^dagger] S; throws pole_error at numerical poles.
cmat transfer_function(const passive_lqss& sys, cplx s);
// G(s) = [I - N (sI - F)^{-1} N^flat] S on the doubled space (2m x 2m).
cmat transfer_function(const general_lqss& sys, cplx s);

// Mode-space change of basis by a Bogoliubov V: (S, N V^{-1}, V^{-dagger} M V^{-1}).
general_lqss state_transform(const general_lqss& sys, const doubled_matrix& v);

// One optical port of a cavity: passive rate kappa with phase phi, active rate g
// with phase theta.  Coupling entries are e^{i phi} sqrt(kappa) and e^{i theta} sqrt(g).
struct cavity_port {
    double kappa = 0.0;
    double phi = 0.0;
    double g = 0.0;
    double theta = 0.0;
};

struct cavity_spec {
    double detuning = 0.0;
    std::vector<cavity_port> ports;
    int interconnect_port = -1;  // index into ports, -1 when none is reserved
};

// Single-mode cavity as a general system with one port per entry of `ports`.
general_lqss cavity_system(const cavity_spec& spec);

// Feeds every output of `upstream` into `downstream` (both with equal port counts).
general_lqss series(const general_lqss& downstream, const general_lqss& upstream);

// Side-by-side composition; ports of `a` come first.
general_lqss concatenate(const general_lqss& a, const general_lqss& b);

// Reorders ports so that new port i is old port order[i].
general_lqss permute_ports(const general_lqss& sys, const std::vector<index_t>& order);

// Closes a static Bogoliubov gain R from the outputs to the inputs of the ports in
// `loop_ports`; the remaining ports stay external.  Throws algebraic_loop_error when
// the loop is not well posed.
general_lqss close_feedback(const general_lqss& sys,
                            const std::vector<index_t>& loop_ports,
                            const doubled_matrix& r_gain);

}  // namespace lqsynth
