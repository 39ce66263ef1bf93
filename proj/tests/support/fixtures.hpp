#pragma once

#include "lqsynth/lqss.hpp"

#include <cmath>

namespace lqsynth::fixtures {

// Three-mode, three-port passive reference system.
inline passive_lqss reference_passive() {
    passive_lqss sys;
    sys.n_modes = 3;
    sys.n_io = 3;
    sys.s = cmat::Identity(3, 3);
    sys.n = cmat(3, 3);
    sys.n << 1, 2, 1, 0, -1, 3, 2, 3, 5;
    sys.m = cmat(3, 3);
    sys.m << 5, 1, -2, 1, 3, 0, -2, 0, 4;
    return sys;
}

// Cascade order used by the reference tables for the passive system.
inline std::vector<cplx> reference_passive_diag() {
    return {{-23.1603, -3.1301}, {-1.9103, -5.5835}, {-1.9294, -3.2865}};
}

inline std::vector<double> reference_passive_detunings() { return {3.1301, 5.5835, 3.2865}; }

inline std::vector<double> reference_passive_singvals() { return {6.8092, 2.7632, 0.0}; }

// Reference singular vector matrices for the passive coupling (real, sign gauge free).
inline cmat reference_passive_v() {
    cmat v(3, 3);
    v << -0.2987, 0.4941, -0.8165, -0.3065, -0.8599, -0.4082, -0.9038, 0.1283, 0.4082;
    return v;
}

inline cmat reference_passive_w() {
    cmat w(3, 3);
    w << -0.3093, 0.2717, -0.9113, -0.4409, 0.8081, 0.3906, -0.8426, -0.5226, 0.1302;
    return w;
}

inline cmat reference_passive_mhat() {
    cmat m(3, 3);
    m << 3.1315, 0.0370, -0.7200, 0.0370, 4.4278, -2.2169, -0.7200, -2.2169, 4.4407;
    return m;
}

inline cmat reference_passive_x() {
    cmat x(3, 3);
    x << 6.2631, 0.0740, -1.4400, 0.0740, 8.8556, -4.4337, -1.4400, -4.4337, 8.8814;
    return cplx(0, 1) * x;
}

inline cmat reference_passive_r() {
    cmat re(3, 3), im(3, 3);
    re << 0.9429, -0.0145, -0.0237, -0.0145, 0.9438, -0.0467, -0.0237, -0.0467, 0.9389;
    im << 0.3245, 0.0276, 0.0637, 0.0276, 0.2918, 0.1449, 0.0637, 0.1449, 0.3010;
    return re + cplx(0, 1) * im;
}

// Two-mode, two-port general reference system (stored by doubled blocks).
inline general_lqss reference_general() {
    general_lqss sys;
    sys.n_modes = 2;
    sys.n_io = 2;
    sys.s = doubled_matrix::identity(2);
    cmat n1(2, 2), n2(2, 2);
    n1 << 0, 1, -1, 2;
    n2 << 2, 0, 1, -1;
    sys.n = doubled_matrix(n1, n2);
    cmat m1(2, 2), m2(2, 2);
    m1 << 2, 1, 1, 2;
    m2 << 0, -1, -1, 0;
    sys.m = doubled_matrix(m1, m2);
    return sys;
}

inline std::vector<cplx> reference_general_diag() {
    return {{-2.0305, -2.2667}, {2.0305, -2.6660}};
}

inline std::vector<double> reference_general_detunings() { return {2.2667, 2.6660}; }

// Magnitude of the strictly-lower entry of the T2 block after triangularization.
inline double reference_general_t2_mag() { return std::abs(cplx(2.4537, 2.2391)); }

// Transformed coupling N * W for the general cascade (full 4 x 4, per-mode phase free).
inline cmat reference_general_nhat() {
    cmat re(4, 4), im(4, 4);
    re << 0.8826, 0.3697, -0.2106, 1.9872, 2.0457, -0.6276, -0.9994, 0.6779, -0.2106, 1.9872,
        0.8826, 0.3697, -0.9994, 0.6779, 2.0457, -0.6276;
    im << -0.6207, -0.1391, 0.5005, 0.2764, -0.0830, -0.1196, -0.0385, 0.3744, -0.5005, -0.2764,
        0.6207, 0.1391, 0.0385, -0.3744, 0.0830, 0.1196;
    return re + cplx(0, 1) * im;
}

// Gramian eigenvalue of the general reference coupling (appears as +lam and -lam).
inline double reference_gramian_lambda() { return 2.8284271247461903; }

// Printed eigenvectors of the Gramian for +lam and -lam (before refinement).
inline cvec reference_gramian_zplus() {
    cvec z(4);
    z << 0.2180, -1.1061, 0.5046, -0.1275;
    return z;
}

inline cvec reference_gramian_zminus() {
    cvec z(4);
    z << -1.0987, -0.1609, 0, 0.4827;
    return z;
}

inline cmat reference_general_w() {
    cmat w(4, 4);
    w << 0.2180, -1.0987, 0.5046, 0, -1.1061, -0.1609, -0.1275, 0.4827, 0.5046, 0, 0.2180,
        -1.0987, -0.1275, 0.4827, -1.1061, -0.1609;
    return w;
}

inline cmat reference_general_v() {
    cmat v(4, 4);
    v << -0.0576, -1.0196, 0.1834, -0.0957, -1.0691, 0.0164, 0.3357, 0.1749, 0.1834, -0.0957,
        -0.0576, -1.0196, 0.3357, 0.1749, -1.0691, 0.0164;
    return v;
}

inline cmat reference_general_mhat() {
    cmat m(4, 4);
    m << 3.6444, 1.0135, 0.4429, -3.3952, 1.0135, 4.3462, -3.3952, -1.7249, 0.4429, -3.3952,
        3.6444, 1.0135, -3.3952, -1.7249, 1.0135, 4.3462;
    return m;
}

inline cmat reference_general_x() {
    cmat x(4, 4);
    x << 7.2889, 2.0271, 0.8858, -6.7904, 2.0271, 8.6924, -6.7904, -3.4497, -0.8858, 6.7904,
        -7.2889, -2.0271, 6.7904, 3.4497, -2.0271, -8.6924;
    return cplx(0, 1) * x;
}

inline cmat reference_general_r() {
    cmat re(4, 4), im(4, 4);
    re << -0.3731, 0.9082, 0, 0.0450, 0.9082, 0.3125, -0.0450, 0, 0, 0.0450, -0.3731, 0.9082,
        -0.0450, 0, 0.9082, 0.3125;
    im << 7.8624, -5.2659, 7.4743, -5.8003, -5.2659, 4.4401, -5.8003, 3.7042, -7.4743, 5.8003,
        -7.8624, 5.2659, 5.8003, -3.7042, 5.2659, -4.4401;
    return re + cplx(0, 1) * im;
}

// --- negative fixtures -------------------------------------------------------

// Doubled matrix whose only eigenvectors are J-neutral (simple real spectrum).
inline doubled_matrix neutral_drift() {
    cmat z = cmat::Zero(1, 1), two(1, 1);
    two << 2;
    return doubled_matrix(z, two);
}

// Coupling whose matrix rank and Gramian rank disagree.
inline doubled_matrix kernel_mismatch_coupling() {
    cmat one(1, 1);
    one << 1;
    return doubled_matrix(one, one);
}

// Coupling whose Gramian has a defective (non-semisimple) eigenvalue:
// N = sqrt(lam) (I + K / (2 lam)) with K doubled, K^flat = K, K^2 = 0 gives
// N^flat N = lam I + K + K^2/(4 lam) = lam I + K.
inline doubled_matrix defective_coupling() {
    const double lam = 2.0;
    cmat k1(2, 2), k2(2, 2);
    k1 << 0.8, 0, 0, -0.8;
    k2 << 0, 0.8, -0.8, 0;
    const doubled_matrix k(k1, k2);
    const doubled_matrix eye = doubled_matrix::identity(2);
    return std::sqrt(lam) * (eye + (1.0 / (2.0 * lam)) * k);
}

}  // namespace lqsynth::fixtures
