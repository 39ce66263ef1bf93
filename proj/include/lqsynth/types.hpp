#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lqsynth {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;
using index_t = Eigen::Index;

inline constexpr cplx ci{0.0, 1.0};

// Largest entry magnitude; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// 2-norm condition number estimate via singular values; +inf when singular.
double cond_estimate(const cmat& a);

}  // namespace lqsynth
