#include "lqsynth/static_decomposition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqsynth {

cmat phase_matrix(double theta) {
    cmat p(1, 1);
    p(0, 0) = std::polar(1.0, theta);
    return p;
}

cmat beam_splitter_matrix(double theta, double phi, double psi, double zeta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx mu = std::polar(1.0, (phi + psi) / 2.0);
    const cplx nu = std::polar(1.0, (psi - phi) / 2.0);
    cmat b(2, 2);
    b << mu * c, nu * s, -std::conj(nu) * s, std::conj(mu) * c;
    return std::polar(1.0, zeta) * b;
}

cmat squeezer_matrix(double x, double phi, double psi) {
    const double ch = std::cosh(x), sh = std::sinh(x);
    cmat q(2, 2);
    q << std::polar(ch, phi + psi), std::polar(sh, psi - phi),
         std::polar(sh, phi - psi), std::polar(ch, -(phi + psi));
    return q;
}

cmat elementary_matrix(const static_element& e) {
    switch (e.kind) {
        case static_element::op::phase_shift: return phase_matrix(e.theta);
        case static_element::op::beam_split: return beam_splitter_matrix(e.theta, e.phi, e.psi, e.zeta);
        case static_element::op::squeeze: default: return squeezer_matrix(e.x, e.phi, e.psi);
    }
}

// Common real orthogonal eigenbasis of the commuting real symmetric parts of a
// symmetric unitary Omega, giving the factor Z with Z Z^T = Omega.
static cmat takagi_symmetric_unitary(const cmat& omega) {
    const index_t m = omega.rows();
    const rmat x = omega.real();
    const rmat y = omega.imag();

    rmat q;
    bool found = false;
    for (double t : {0.0, 0.5, 1.0 / std::sqrt(2.0), 1.3}) {
        rmat probe = x + t * y;
        probe = 0.5 * (probe + rmat(probe.transpose()));
        Eigen::SelfAdjointEigenSolver<rmat> es(probe);
        const rvec ev = es.eigenvalues();
        double min_gap = std::numeric_limits<double>::infinity();
        for (index_t i = 0; i + 1 < m; ++i) min_gap = std::min(min_gap, ev(i + 1) - ev(i));
        if (m < 2 || min_gap > 1e-8) {
            q = es.eigenvectors();
            found = true;
            break;
        }
    }
    if (!found) {
        // Two-stage fallback: diagonalize X, then Y inside each degenerate X block.
        Eigen::SelfAdjointEigenSolver<rmat> ex(x);
        q = ex.eigenvectors();
        const rvec ev = ex.eigenvalues();
        const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        index_t start = 0;
        while (start < m) {
            index_t stop = start + 1;
            while (stop < m && std::abs(ev(stop) - ev(start)) <= 1e-8 * scale) ++stop;
            const index_t sz = stop - start;
            if (sz > 1) {
                rmat yb = q.middleCols(start, sz).transpose() * y * q.middleCols(start, sz);
                yb = 0.5 * (yb + rmat(yb.transpose()));
                Eigen::SelfAdjointEigenSolver<rmat> ey(yb);
                q.middleCols(start, sz) = q.middleCols(start, sz) * ey.eigenvectors();
            }
            start = stop;
        }
    }

    const cmat d = q.transpose().cast<cplx>() * omega * q.cast<cplx>();
    if (m > 1) {
        cmat offdiag = d;
        offdiag.diagonal().setZero();
        if (max_abs(offdiag) > 1e-6)
            throw structure_error("takagi: failed to diagonalize the symmetric unitary factor");
    }
    cmat z = q.cast<cplx>();
    for (index_t i = 0; i < m; ++i) z.col(i) *= std::polar(1.0, std::arg(d(i, i)) / 2.0);
    return z;
}

bloch_messiah_factors bloch_messiah(const doubled_matrix& r, double tol) {
    if (r.half_rows() != r.half_cols())
        throw dimension_error("bloch_messiah: matrix must be square");
    if (!is_bogoliubov(r.full(), std::max(tol, 1e-8)))
        throw structure_error("bloch_messiah: input must be a Bogoliubov matrix");
    const index_t m = r.half_rows();

    Eigen::JacobiSVD<cmat> svd(r.block1(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const cmat p = svd.matrixU();
    const cmat qd = svd.matrixV();
    const rvec c = svd.singularValues();  // cosh values, descending
    const cmat a = p.adjoint() * r.block2() * qd.conjugate();

    cmat z = cmat::Identity(m, m);
    rvec x(m);
    index_t start = 0;
    while (start < m) {
        index_t stop = start + 1;
        while (stop < m && std::abs(c(stop) - c(start)) <= 1e-8 * std::max(1.0, c(0))) ++stop;
        const index_t sz = stop - start;
        const cmat ablk = a.block(start, start, sz, sz);
        Eigen::JacobiSVD<cmat> sa(ablk);
        const double sh = sz > 0 ? sa.singularValues().mean() : 0.0;
        const double xg = std::asinh(sh);
        if (xg < 1e-10) {
            x.segment(start, sz).setZero();
        } else {
            x.segment(start, sz).setConstant(xg);
            cmat omega = ablk / sh;
            omega = 0.5 * (omega + cmat(omega.transpose()));
            z.block(start, start, sz, sz) = takagi_symmetric_unitary(omega);
        }
        start = stop;
    }

    bloch_messiah_factors out;
    out.u2 = p * z;
    out.u1 = z.adjoint() * qd.adjoint();
    out.x = x;
    if (x.maxCoeff() == 0.0) {
        // Purely passive matrix: fold everything into the output-side factor.
        out.u2 = cmat(out.u2 * out.u1);
        out.u1 = cmat::Identity(m, m);
    }

    // Defensive reconstruction check.
    cmat sq = cmat::Zero(2 * m, 2 * m);
    for (index_t i = 0; i < m; ++i) {
        sq(i, i) = std::cosh(x(i));
        sq(m + i, m + i) = std::cosh(x(i));
        sq(i, m + i) = std::sinh(x(i));
        sq(m + i, i) = std::sinh(x(i));
    }
    const cmat rebuilt = doubled_matrix(out.u2, cmat::Zero(m, m)).full() * sq *
                         doubled_matrix(out.u1, cmat::Zero(m, m)).full();
    if (max_abs(rebuilt - r.full()) > 1e-6 * std::max(1.0, max_abs(r.full())))
        throw structure_error("bloch_messiah: factorization residual too large");
    return out;
}

static_decomposition reck_decompose(const cmat& u, double tol) {
    if (u.rows() != u.cols()) throw dimension_error("reck_decompose: square matrix required");
    const index_t m = u.rows();
    const cmat eye = cmat::Identity(m, m);
    const double unit_resid =
        std::max(max_abs(u * u.adjoint() - eye), max_abs(u.adjoint() * u - eye));
    if (unit_resid > std::max(tol, 1e-8))
        throw structure_error("reck_decompose: matrix is not unitary");

    struct rot {
        index_t row;  // acts on rows (row - 1, row)
        cplx ga, gb;
    };
    std::vector<rot> rots;
    cmat a = u;
    for (index_t col = 0; col + 1 < m; ++col) {
        for (index_t row = m - 1; row > col; --row) {
            const cplx xx = a(row - 1, col);
            const cplx yy = a(row, col);
            if (std::abs(yy) < 1e-14) continue;
            const double rr = std::hypot(std::abs(xx), std::abs(yy));
            const cplx ga = xx / rr, gb = yy / rr;
            cmat g(2, 2);
            g << std::conj(ga), std::conj(gb), -gb, ga;
            a.middleRows(row - 1, 2) = g * a.middleRows(row - 1, 2);
            rots.push_back({row, ga, gb});
        }
    }

    static_decomposition dec;
    dec.passive = true;
    dec.n_channels = m;
    for (index_t k = 0; k < m; ++k) {
        const double th = std::arg(a(k, k));
        if (std::abs(th) > 1e-12) {
            static_element e;
            e.kind = static_element::op::phase_shift;
            e.channel = k;
            e.theta = th;
            dec.elements.push_back(e);
        }
    }
    // The inverse rotations apply to the signal after the phases, last-recorded first.
    for (auto it = rots.rbegin(); it != rots.rend(); ++it) {
        static_element e;
        e.kind = static_element::op::beam_split;
        e.channel = it->row - 1;
        e.channel2 = it->row;
        e.theta = 2.0 * std::atan2(std::abs(it->gb), std::abs(it->ga));
        const double mu = std::abs(it->ga) < 1e-14 ? 0.0 : std::arg(it->ga);
        const double nu = std::abs(it->gb) < 1e-14 ? 0.0 : std::numbers::pi - std::arg(it->gb);
        e.psi = mu + nu;
        e.phi = mu - nu;
        e.zeta = 0.0;
        dec.elements.push_back(e);
    }
    return dec;
}

static_decomposition decompose_static(const cmat& s, bool passive, double tol) {
    if (passive) return reck_decompose(s, tol);

    const doubled_matrix r = doubled_matrix::from_full(s, std::max(tol, 1e-8));
    const bloch_messiah_factors bm = bloch_messiah(r, tol);
    const index_t m = r.half_rows();

    static_decomposition dec;
    dec.passive = false;
    dec.n_channels = m;
    dec.u1 = bm.u1;
    dec.u2 = bm.u2;
    dec.x = bm.x;
    const static_decomposition d1 = reck_decompose(bm.u1, tol);
    dec.elements = d1.elements;
    for (index_t i = 0; i < m; ++i) {
        if (bm.x(i) > 0.0) {
            static_element e;
            e.kind = static_element::op::squeeze;
            e.channel = i;
            e.x = bm.x(i);
            dec.elements.push_back(e);
        }
    }
    const static_decomposition d2 = reck_decompose(bm.u2, tol);
    dec.elements.insert(dec.elements.end(), d2.elements.begin(), d2.elements.end());
    return dec;
}

static cmat embed_passive_element(const static_element& e, index_t m) {
    cmat f = cmat::Identity(m, m);
    switch (e.kind) {
        case static_element::op::phase_shift:
            f(e.channel, e.channel) = std::polar(1.0, e.theta);
            break;
        case static_element::op::beam_split: {
            const cmat b = beam_splitter_matrix(e.theta, e.phi, e.psi, e.zeta);
            f(e.channel, e.channel) = b(0, 0);
            f(e.channel, e.channel2) = b(0, 1);
            f(e.channel2, e.channel) = b(1, 0);
            f(e.channel2, e.channel2) = b(1, 1);
            break;
        }
        case static_element::op::squeeze:
            throw structure_error("remultiply: squeezer in a passive decomposition");
    }
    return f;
}

static cmat embed_general_element(const static_element& e, index_t m) {
    cmat f = cmat::Identity(2 * m, 2 * m);
    switch (e.kind) {
        case static_element::op::phase_shift:
            f(e.channel, e.channel) = std::polar(1.0, e.theta);
            f(m + e.channel, m + e.channel) = std::polar(1.0, -e.theta);
            break;
        case static_element::op::beam_split: {
            const cmat b = beam_splitter_matrix(e.theta, e.phi, e.psi, e.zeta);
            const index_t c1 = e.channel, c2 = e.channel2;
            f(c1, c1) = b(0, 0);
            f(c1, c2) = b(0, 1);
            f(c2, c1) = b(1, 0);
            f(c2, c2) = b(1, 1);
            f(m + c1, m + c1) = std::conj(b(0, 0));
            f(m + c1, m + c2) = std::conj(b(0, 1));
            f(m + c2, m + c1) = std::conj(b(1, 0));
            f(m + c2, m + c2) = std::conj(b(1, 1));
            break;
        }
        case static_element::op::squeeze: {
            const cmat q = squeezer_matrix(e.x, e.phi, e.psi);
            const index_t ch = e.channel;
            f(ch, ch) = q(0, 0);
            f(ch, m + ch) = q(0, 1);
            f(m + ch, ch) = q(1, 0);
            f(m + ch, m + ch) = q(1, 1);
            break;
        }
    }
    return f;
}

cmat remultiply(const static_decomposition& dec) {
    const index_t m = dec.n_channels;
    if (dec.passive) {
        cmat full = cmat::Identity(m, m);
        for (const static_element& e : dec.elements)
            full = embed_passive_element(e, m) * full;
        return full;
    }
    cmat full = cmat::Identity(2 * m, 2 * m);
    for (const static_element& e : dec.elements)
        full = embed_general_element(e, m) * full;
    return full;
}

}  // namespace lqsynth
