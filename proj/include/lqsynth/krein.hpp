#pragma once

#include "lqsynth/doubled.hpp"

#include <vector>

namespace lqsynth {

// Indefinite inner product <v, w> = v^dagger J w on a doubled space.
cplx j_inner(const cvec& v, const cvec& w);

// sqrt(|<v, v>|).
double j_norm(const cvec& v);

// Sign of <v, v>: +1, -1, or 0 when |<v, v>| <= tol * |v|^2 (neutral).
int j_sign(const cvec& v, double tol = 1e-9);

// Sigma conj(v): swaps the two halves of the conjugated vector.
cvec sigma_conjugate(const cvec& v);

struct normalized_vector {
    cvec unit;  // |<unit, unit>| == 1, positive sign
    int sign;   // sign of the original vector's J-norm
};

// Rescales v to unit J-norm, conjugate-flipping negative vectors to positive ones.
// Throws neutral_vector_error when v is neutral at tolerance tol.
normalized_vector krein_normalize(const cvec& v, double tol = 1e-9);

// J-orthonormalizes `pool` against `fixed` (assumed already J-orthonormal with
// positive norms) until `target_count` positive vectors are collected.  Neutral or
// numerically dependent candidates are skipped; negative-norm remainders are
// conjugate-flipped.  The full basis of the doubled space is {x_i} plus {Sigma conj(x_i)}.
// Throws degenerate_complement_error when the pool runs out first.
std::vector<cvec> krein_gram_schmidt(const std::vector<cvec>& fixed,
                                     const std::vector<cvec>& pool,
                                     index_t target_count,
                                     double tol = 1e-9);

enum class ordering_policy { descending_real, ascending_real, given };

struct eigen_ordering {
    ordering_policy policy = ordering_policy::descending_real;
    std::vector<cplx> targets;  // used only by ordering_policy::given

    static eigen_ordering descending() { return {}; }
    static eigen_ordering ascending() { return {ordering_policy::ascending_real, {}}; }
    static eigen_ordering given(std::vector<cplx> t) {
        return {ordering_policy::given, std::move(t)};
    }
};

struct krein_schur_result {
    doubled_matrix w;               // Bogoliubov: W W^flat = W^flat W = I
    doubled_matrix t;               // T = W^flat A W; block T1 lower triangular, T2 strictly lower
    std::vector<cplx> eigen_order;  // diagonal of T1, top to bottom
};

// Lower block triangularization of a doubled-up A by a Bogoliubov similarity.
// Throws assumption_violated_error when a deflation step has only neutral eigenvectors.
krein_schur_result krein_schur(const doubled_matrix& a,
                               const eigen_ordering& ordering = {},
                               double tol = 1e-9);

struct krein_svd_result {
    doubled_matrix v;     // 2m x 2m Bogoliubov
    doubled_matrix w;     // 2n x 2n Bogoliubov
    doubled_matrix nhat;  // 2m x 2n canonical coupling with N = V Nhat W^flat
    std::vector<double> lambda_plus;   // positive Gramian eigenvalues, descending magnitude
    std::vector<double> lambda_minus;  // negative Gramian eigenvalues, descending magnitude
    std::vector<cplx> lambda_complex;  // one per conjugate pair (positive imaginary part)
    std::vector<double> alphas, betas; // canonical pair-block amplitudes, one per complex pair
    index_t zero_modes = 0;            // dimension of the mode-space kernel of N
};

// Canonical factorization N = V Nhat W^flat of a doubled-up coupling matrix driven by
// the spectrum of the Gramian N^flat N.  Throws kernel_mismatch_error,
// not_semisimple_error, or unsupported_spectrum_error when the spectrum is inadmissible.
krein_svd_result krein_svd(const doubled_matrix& n, double tol = 1e-9);

// (I - R)^{-1} (I + R); throws unit_eigenvalue_error when I - R is numerically singular.
cmat cayley(const cmat& r);

// (X - I)(X + I)^{-1}; throws cayley_singular_error when X + I is numerically singular.
cmat inverse_cayley(const cmat& x);

}  // namespace lqsynth
