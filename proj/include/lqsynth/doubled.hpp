#pragma once

#include "lqsynth/errors.hpp"
#include "lqsynth/types.hpp"

namespace lqsynth {

// Fundamental symmetry J = diag(I_k, -I_k) on a 2k-dimensional doubled space.
cmat krein_j(index_t half_dim);

// Block swap Sigma = [[0, I_k], [I_k, 0]].
cmat sigma_swap(index_t half_dim);

// Flat adjoint of a full 2r x 2s matrix: X^flat = J_2s X^dagger J_2r.
cmat flat_adjoint(const cmat& x);

// True when Sigma X Sigma == conj(X) entrywise within tol * max(1, |X|_max).
bool is_doubled_up(const cmat& x, double tol = 1e-10);

// True when X is doubled-up and X X^flat == X^flat X == I within tol.
bool is_bogoliubov(const cmat& x, double tol = 1e-10);

// A 2r x 2s doubled-up matrix [[B1, B2], [conj(B2), conj(B1)]] stored by its top blocks.
class doubled_matrix {
public:
    doubled_matrix() = default;
    doubled_matrix(cmat b1, cmat b2);

    static doubled_matrix zero(index_t half_rows, index_t half_cols);
    static doubled_matrix identity(index_t half_dim);
    // Splits a full matrix, checking the doubled-up mirror condition first.
    static doubled_matrix from_full(const cmat& x, double tol = 1e-8);

    const cmat& block1() const { return b1_; }
    const cmat& block2() const { return b2_; }
    index_t half_rows() const { return b1_.rows(); }
    index_t half_cols() const { return b1_.cols(); }

    cmat full() const;

private:
    cmat b1_, b2_;
};

doubled_matrix operator*(const doubled_matrix& a, const doubled_matrix& b);
doubled_matrix operator+(const doubled_matrix& a, const doubled_matrix& b);
doubled_matrix operator-(const doubled_matrix& a, const doubled_matrix& b);
// Real scalars only: complex scalars would break the conjugate mirror.
doubled_matrix operator*(double c, const doubled_matrix& a);

doubled_matrix flat_adjoint(const doubled_matrix& x);
doubled_matrix direct_sum(const doubled_matrix& a, const doubled_matrix& b);
// Horizontal concatenation [A B]; both arguments need equal half row counts.
doubled_matrix hcat(const doubled_matrix& a, const doubled_matrix& b);

}  // namespace lqsynth
