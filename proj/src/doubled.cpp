#include "lqsynth/doubled.hpp"

#include <Eigen/SVD>

namespace lqsynth {

double cond_estimate(const cmat& a) {
    if (a.size() == 0) return 1.0;
    Eigen::JacobiSVD<cmat> svd(a);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

cmat krein_j(index_t k) {
    cmat j = cmat::Zero(2 * k, 2 * k);
    for (index_t i = 0; i < k; ++i) {
        j(i, i) = 1.0;
        j(k + i, k + i) = -1.0;
    }
    return j;
}

cmat sigma_swap(index_t k) {
    cmat s = cmat::Zero(2 * k, 2 * k);
    for (index_t i = 0; i < k; ++i) {
        s(i, k + i) = 1.0;
        s(k + i, i) = 1.0;
    }
    return s;
}

static void require_even(const cmat& x, const char* what) {
    if (x.rows() % 2 != 0 || x.cols() % 2 != 0)
        throw dimension_error(std::string(what) + ": full matrix dimensions must be even");
}

cmat flat_adjoint(const cmat& x) {
    require_even(x, "flat_adjoint");
    const index_t r = x.rows() / 2, s = x.cols() / 2;
    cmat a = x.adjoint();  // 2s x 2r
    a.topRightCorner(s, r) *= -1.0;
    a.bottomLeftCorner(s, r) *= -1.0;
    return a;
}

bool is_doubled_up(const cmat& x, double tol) {
    if (x.rows() % 2 != 0 || x.cols() % 2 != 0) return false;
    const index_t r = x.rows() / 2, s = x.cols() / 2;
    cmat swapped(x.rows(), x.cols());
    swapped.topLeftCorner(r, s) = x.bottomRightCorner(r, s);
    swapped.topRightCorner(r, s) = x.bottomLeftCorner(r, s);
    swapped.bottomLeftCorner(r, s) = x.topRightCorner(r, s);
    swapped.bottomRightCorner(r, s) = x.topLeftCorner(r, s);
    const double resid = max_abs(swapped - x.conjugate());
    return resid <= tol * std::max(1.0, max_abs(x));
}

bool is_bogoliubov(const cmat& x, double tol) {
    if (x.rows() != x.cols()) return false;
    if (!is_doubled_up(x, tol)) return false;
    const cmat xf = flat_adjoint(x);
    const cmat eye = cmat::Identity(x.rows(), x.cols());
    return max_abs(x * xf - eye) <= tol && max_abs(xf * x - eye) <= tol;
}

doubled_matrix::doubled_matrix(cmat b1, cmat b2) : b1_(std::move(b1)), b2_(std::move(b2)) {
    if (b1_.rows() != b2_.rows() || b1_.cols() != b2_.cols())
        throw dimension_error("doubled_matrix: the two blocks must have equal shapes");
}

doubled_matrix doubled_matrix::zero(index_t half_rows, index_t half_cols) {
    return {cmat::Zero(half_rows, half_cols), cmat::Zero(half_rows, half_cols)};
}

doubled_matrix doubled_matrix::identity(index_t half_dim) {
    return {cmat::Identity(half_dim, half_dim), cmat::Zero(half_dim, half_dim)};
}

doubled_matrix doubled_matrix::from_full(const cmat& x, double tol) {
    require_even(x, "doubled_matrix::from_full");
    if (!is_doubled_up(x, tol))
        throw structure_error("doubled_matrix::from_full: matrix is not doubled-up");
    const index_t r = x.rows() / 2, s = x.cols() / 2;
    return {x.topLeftCorner(r, s), x.topRightCorner(r, s)};
}

cmat doubled_matrix::full() const {
    const index_t r = half_rows(), s = half_cols();
    cmat x(2 * r, 2 * s);
    x.topLeftCorner(r, s) = b1_;
    x.topRightCorner(r, s) = b2_;
    x.bottomLeftCorner(r, s) = b2_.conjugate();
    x.bottomRightCorner(r, s) = b1_.conjugate();
    return x;
}

doubled_matrix operator*(const doubled_matrix& a, const doubled_matrix& b) {
    if (a.half_cols() != b.half_rows())
        throw dimension_error("doubled_matrix product: inner dimensions differ");
    return {a.block1() * b.block1() + a.block2() * b.block2().conjugate(),
            a.block1() * b.block2() + a.block2() * b.block1().conjugate()};
}

doubled_matrix operator+(const doubled_matrix& a, const doubled_matrix& b) {
    return {a.block1() + b.block1(), a.block2() + b.block2()};
}

doubled_matrix operator-(const doubled_matrix& a, const doubled_matrix& b) {
    return {a.block1() - b.block1(), a.block2() - b.block2()};
}

doubled_matrix operator*(double c, const doubled_matrix& a) {
    return {c * a.block1(), c * a.block2()};
}

doubled_matrix flat_adjoint(const doubled_matrix& x) {
    return {x.block1().adjoint(), -x.block2().transpose()};
}

doubled_matrix direct_sum(const doubled_matrix& a, const doubled_matrix& b) {
    const index_t r = a.half_rows() + b.half_rows();
    const index_t s = a.half_cols() + b.half_cols();
    cmat b1 = cmat::Zero(r, s), b2 = cmat::Zero(r, s);
    b1.topLeftCorner(a.half_rows(), a.half_cols()) = a.block1();
    b1.bottomRightCorner(b.half_rows(), b.half_cols()) = b.block1();
    b2.topLeftCorner(a.half_rows(), a.half_cols()) = a.block2();
    b2.bottomRightCorner(b.half_rows(), b.half_cols()) = b.block2();
    return {std::move(b1), std::move(b2)};
}

doubled_matrix hcat(const doubled_matrix& a, const doubled_matrix& b) {
    if (a.half_rows() != b.half_rows())
        throw dimension_error("hcat: half row counts differ");
    cmat b1(a.half_rows(), a.half_cols() + b.half_cols());
    cmat b2(a.half_rows(), a.half_cols() + b.half_cols());
    b1 << a.block1(), b.block1();
    b2 << a.block2(), b.block2();
    return {std::move(b1), std::move(b2)};
}

}  // namespace lqsynth
