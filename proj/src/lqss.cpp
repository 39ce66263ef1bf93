#include "lqsynth/lqss.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numeric>
#include <limits>
#include <sstream>

namespace lqsynth {

general_lqss general_lqss::static_network(const doubled_matrix& scattering) {
    if (scattering.half_rows() != scattering.half_cols())
        throw dimension_error("static_network: scattering matrix must be square");
    general_lqss sys;
    sys.n_modes = 0;
    sys.n_io = scattering.half_rows();
    sys.s = scattering;
    sys.n = doubled_matrix::zero(sys.n_io, 0);
    sys.m = doubled_matrix::zero(0, 0);
    return sys;
}

std::string validation_report::to_string() const {
    if (issues.empty()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) os << "; ";
        os << issues[i].check << " (residual " << issues[i].residual << ")";
    }
    return os.str();
}

validation_report validate(const passive_lqss& sys, double tol) {
    validation_report rep;
    const double inf = std::numeric_limits<double>::infinity();
    bool shapes_ok = true;
    if (sys.n_modes < 0 || sys.n_io < 0 || sys.s.rows() != sys.n_io || sys.s.cols() != sys.n_io) {
        rep.issues.push_back({"scattering_shape", inf});
        shapes_ok = false;
    }
    if (sys.n.rows() != sys.n_io || sys.n.cols() != sys.n_modes) {
        rep.issues.push_back({"coupling_shape", inf});
        shapes_ok = false;
    }
    if (sys.m.rows() != sys.n_modes || sys.m.cols() != sys.n_modes) {
        rep.issues.push_back({"interaction_shape", inf});
        shapes_ok = false;
    }
    if (!shapes_ok) return rep;

    const cmat eye = cmat::Identity(sys.n_io, sys.n_io);
    const double u1 = max_abs(sys.s * sys.s.adjoint() - eye);
    const double u2 = max_abs(sys.s.adjoint() * sys.s - eye);
    if (std::max(u1, u2) > tol)
        rep.issues.push_back({"scattering_unitarity", std::max(u1, u2)});
    const double herm = max_abs(sys.m - sys.m.adjoint());
    if (herm > tol) rep.issues.push_back({"interaction_hermiticity", herm});
    return rep;
}

validation_report validate(const general_lqss& sys, double tol) {
    validation_report rep;
    const double inf = std::numeric_limits<double>::infinity();
    bool shapes_ok = true;
    if (sys.n_modes < 0 || sys.n_io < 0 || sys.s.half_rows() != sys.n_io ||
        sys.s.half_cols() != sys.n_io) {
        rep.issues.push_back({"scattering_shape", inf});
        shapes_ok = false;
    }
    if (sys.n.half_rows() != sys.n_io || sys.n.half_cols() != sys.n_modes) {
        rep.issues.push_back({"coupling_shape", inf});
        shapes_ok = false;
    }
    if (sys.m.half_rows() != sys.n_modes || sys.m.half_cols() != sys.n_modes) {
        rep.issues.push_back({"interaction_shape", inf});
        shapes_ok = false;
    }
    if (!shapes_ok) return rep;

    const cmat sf = sys.s.full();
    const cmat sfl = flat_adjoint(sf);
    const cmat eye = cmat::Identity(2 * sys.n_io, 2 * sys.n_io);
    const double b1 = max_abs(sf * sfl - eye);
    const double b2 = max_abs(sfl * sf - eye);
    if (std::max(b1, b2) > tol)
        rep.issues.push_back({"scattering_bogoliubov", std::max(b1, b2)});
    const cmat mf = sys.m.full();
    const double herm = max_abs(mf - mf.adjoint());
    if (herm > tol) rep.issues.push_back({"interaction_hermiticity", herm});
    return rep;
}

general_lqss embed_passive(const passive_lqss& sys) {
    const validation_report rep = validate(sys);
    if (!rep.ok())
        throw validation_error("embed_passive: input system is invalid: " + rep.to_string());
    general_lqss out;
    out.n_modes = sys.n_modes;
    out.n_io = sys.n_io;
    out.s = doubled_matrix(sys.s, cmat::Zero(sys.n_io, sys.n_io));
    out.n = doubled_matrix(sys.n, cmat::Zero(sys.n_io, sys.n_modes));
    out.m = doubled_matrix(sys.m, cmat::Zero(sys.n_modes, sys.n_modes));
    return out;
}

cmat drift_matrix(const passive_lqss& sys) {
    return -ci * sys.m - 0.5 * (sys.n.adjoint() * sys.n);
}

cmat drift_matrix(const general_lqss& sys) {
    const index_t n = sys.n_modes;
    const cmat nf = sys.n.full();
    return -ci * (krein_j(n) * sys.m.full()) - 0.5 * (flat_adjoint(nf) * nf);
}

static void check_not_pole(const cmat& a, cplx s) {
    if (cond_estimate(a) > 1e12) {
        std::ostringstream os;
        os << "PoleAt: transfer function evaluated at a numerical pole (s = " << s.real()
           << (s.imag() < 0 ? " - " : " + ") << std::abs(s.imag()) << "i)";
        throw pole_error(os.str(), s);
    }
}

cmat transfer_function(const passive_lqss& sys, cplx s) {
    if (sys.n_modes == 0) return sys.s;
    const cmat f = drift_matrix(sys);
    const cmat a = s * cmat::Identity(sys.n_modes, sys.n_modes) - f;
    check_not_pole(a, s);
    return sys.s - sys.n * Eigen::PartialPivLU<cmat>(a).solve(cmat(sys.n.adjoint() * sys.s));
}

cmat transfer_function(const general_lqss& sys, cplx s) {
    if (sys.n_modes == 0) return sys.s.full();
    const cmat f = drift_matrix(sys);
    const cmat a = s * cmat::Identity(2 * sys.n_modes, 2 * sys.n_modes) - f;
    check_not_pole(a, s);
    const cmat sf = sys.s.full();
    const cmat nf = sys.n.full();
    return sf - nf * Eigen::PartialPivLU<cmat>(a).solve(cmat(flat_adjoint(nf) * sf));
}

general_lqss state_transform(const general_lqss& sys, const doubled_matrix& v) {
    if (v.half_rows() != sys.n_modes || v.half_cols() != sys.n_modes)
        throw dimension_error("state_transform: transform must be square over the mode space");
    if (!is_bogoliubov(v.full(), 1e-8))
        throw structure_error("state_transform: transform must be a Bogoliubov matrix");
    const doubled_matrix vinv = flat_adjoint(v);
    const cmat vif = vinv.full();
    cmat mf = vif.adjoint() * sys.m.full() * vif;
    mf = 0.5 * (mf + cmat(mf.adjoint()));
    general_lqss out;
    out.n_modes = sys.n_modes;
    out.n_io = sys.n_io;
    out.s = sys.s;
    out.n = sys.n * vinv;
    out.m = doubled_matrix::from_full(mf, 1e-6);
    return out;
}

general_lqss cavity_system(const cavity_spec& spec) {
    const index_t m = static_cast<index_t>(spec.ports.size());
    for (const cavity_port& p : spec.ports) {
        if (p.kappa < 0.0 || p.g < 0.0)
            throw parameter_error("cavity_system: coupling rates must be nonnegative");
    }
    if (spec.interconnect_port >= static_cast<int>(m))
        throw parameter_error("cavity_system: interconnect port index out of range");
    cmat n1(m, 1), n2(m, 1);
    for (index_t i = 0; i < m; ++i) {
        const cavity_port& p = spec.ports[static_cast<size_t>(i)];
        n1(i, 0) = std::polar(std::sqrt(p.kappa), p.phi);
        n2(i, 0) = std::polar(std::sqrt(p.g), p.theta);
    }
    general_lqss sys;
    sys.n_modes = 1;
    sys.n_io = m;
    sys.s = doubled_matrix::identity(m);
    sys.n = doubled_matrix(std::move(n1), std::move(n2));
    cmat m1(1, 1);
    m1(0, 0) = spec.detuning;
    sys.m = doubled_matrix(std::move(m1), cmat::Zero(1, 1));
    return sys;
}

// Adds a 2sz x 2sz full-form interaction at mode offset `off` of a 2n x 2n full matrix.
static void embed_interaction(cmat& mfull, const cmat& small, index_t off, index_t sz,
                              index_t n) {
    mfull.block(off, off, sz, sz) += small.topLeftCorner(sz, sz);
    mfull.block(off, n + off, sz, sz) += small.topRightCorner(sz, sz);
    mfull.block(n + off, off, sz, sz) += small.bottomLeftCorner(sz, sz);
    mfull.block(n + off, n + off, sz, sz) += small.bottomRightCorner(sz, sz);
}

general_lqss series(const general_lqss& down, const general_lqss& up) {
    if (down.n_io != up.n_io)
        throw dimension_error("series: downstream and upstream port counts differ");
    const index_t nu = up.n_modes, nd = down.n_modes, n = nu + nd;

    general_lqss out;
    out.n_modes = n;
    out.n_io = up.n_io;
    out.s = down.s * up.s;
    out.n = hcat(down.s * up.n, down.n);

    cmat mfull = cmat::Zero(2 * n, 2 * n);
    if (nu > 0) embed_interaction(mfull, up.m.full(), 0, nu, n);
    if (nd > 0) embed_interaction(mfull, down.m.full(), nu, nd, n);
    if (nu > 0 && nd > 0) {
        // Field-mediated coupling between the two mode groups.
        const cmat c = flat_adjoint(down.n.full()) * down.s.full() * up.n.full();  // 2nd x 2nu
        const cmat jmc = cplx(0.0, -0.5) * c;
        cmat jmfull = cmat::Zero(2 * n, 2 * n);
        jmfull.block(nu, 0, nd, nu) = jmc.topLeftCorner(nd, nu);
        jmfull.block(nu, n, nd, nu) = jmc.topRightCorner(nd, nu);
        jmfull.block(n + nu, 0, nd, nu) = jmc.bottomLeftCorner(nd, nu);
        jmfull.block(n + nu, n, nd, nu) = jmc.bottomRightCorner(nd, nu);
        const cmat mcross = krein_j(n) * jmfull;
        mfull += mcross + cmat(mcross.adjoint());
    }
    out.m = doubled_matrix::from_full(mfull, 1e-6);
    return out;
}

general_lqss concatenate(const general_lqss& a, const general_lqss& b) {
    general_lqss out;
    out.n_modes = a.n_modes + b.n_modes;
    out.n_io = a.n_io + b.n_io;
    out.s = direct_sum(a.s, b.s);
    out.n = direct_sum(a.n, b.n);
    out.m = direct_sum(a.m, b.m);
    return out;
}

general_lqss permute_ports(const general_lqss& sys, const std::vector<index_t>& order) {
    const index_t m = sys.n_io;
    if (static_cast<index_t>(order.size()) != m)
        throw dimension_error("permute_ports: order must list every port exactly once");
    std::vector<bool> seen(static_cast<size_t>(m), false);
    for (index_t idx : order) {
        if (idx < 0 || idx >= m || seen[static_cast<size_t>(idx)])
            throw dimension_error("permute_ports: order is not a permutation");
        seen[static_cast<size_t>(idx)] = true;
    }
    cmat p = cmat::Zero(m, m);
    for (index_t i = 0; i < m; ++i) p(i, order[static_cast<size_t>(i)]) = 1.0;
    const doubled_matrix pd(std::move(p), cmat::Zero(m, m));
    general_lqss out = sys;
    out.s = pd * sys.s * flat_adjoint(pd);
    out.n = pd * sys.n;
    return out;
}

// Rows (or entries at row/col index pairs) of a full matrix at doubled index sets.
static cmat select(const cmat& a, const std::vector<index_t>& rows,
                   const std::vector<index_t>& cols) {
    cmat out(static_cast<index_t>(rows.size()), static_cast<index_t>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<index_t>(i), static_cast<index_t>(j)) = a(rows[i], cols[j]);
    return out;
}

general_lqss close_feedback(const general_lqss& sys, const std::vector<index_t>& loop_ports,
                            const doubled_matrix& r_gain) {
    const index_t m = sys.n_io, n = sys.n_modes;
    const index_t mi = static_cast<index_t>(loop_ports.size());
    std::vector<bool> in_loop(static_cast<size_t>(m), false);
    for (index_t idx : loop_ports) {
        if (idx < 0 || idx >= m || in_loop[static_cast<size_t>(idx)])
            throw dimension_error("close_feedback: loop ports must be distinct valid port indices");
        in_loop[static_cast<size_t>(idx)] = true;
    }
    if (r_gain.half_rows() != mi || r_gain.half_cols() != mi)
        throw dimension_error("close_feedback: gain size must match the loop port count");
    if (!is_bogoliubov(r_gain.full(), 1e-8))
        throw structure_error("close_feedback: gain must be a Bogoliubov matrix");

    std::vector<index_t> ext;
    for (index_t i = 0; i < m; ++i)
        if (!in_loop[static_cast<size_t>(i)]) ext.push_back(i);

    auto doubled_idx = [m](const std::vector<index_t>& v) {
        std::vector<index_t> d;
        d.reserve(2 * v.size());
        for (index_t x : v) d.push_back(x);
        for (index_t x : v) d.push_back(m + x);
        return d;
    };
    const std::vector<index_t> ie = doubled_idx(ext);
    const std::vector<index_t> il = doubled_idx(loop_ports);
    std::vector<index_t> all(static_cast<size_t>(2 * m));
    std::iota(all.begin(), all.end(), 0);

    const cmat sf = sys.s.full();
    const cmat nf = sys.n.full();
    const cmat rf = r_gain.full();

    const cmat s_ii = select(sf, il, il);
    const cmat s_ei = select(sf, ie, il);
    const cmat s_ie = select(sf, il, ie);
    const cmat s_ee = select(sf, ie, ie);
    const cmat n_i = select(nf, il, [&] {
        std::vector<index_t> c(static_cast<size_t>(2 * n));
        std::iota(c.begin(), c.end(), 0);
        return c;
    }());
    const cmat n_e = select(nf, ie, [&] {
        std::vector<index_t> c(static_cast<size_t>(2 * n));
        std::iota(c.begin(), c.end(), 0);
        return c;
    }());

    const cmat eye_i = cmat::Identity(2 * mi, 2 * mi);
    const cmat irs = eye_i - rf * s_ii;
    if (cond_estimate(irs) > 1e12)
        throw algebraic_loop_error(
            "AlgebraicLoop: the feedback interconnection is not well posed");
    const cmat lambda = Eigen::PartialPivLU<cmat>(irs).solve(rf);

    general_lqss out;
    out.n_modes = n;
    out.n_io = static_cast<index_t>(ext.size());
    out.s = doubled_matrix::from_full(s_ee + s_ei * lambda * s_ie, 1e-6);
    const cmat n_new = n_e + s_ei * lambda * n_i;
    out.n = doubled_matrix::from_full(n_new, 1e-6);

    const cmat f_old = drift_matrix(sys);
    const cmat s_cols_i = select(sf, all, il);  // 2m x 2mi
    const cmat f_new = f_old - flat_adjoint(nf) * s_cols_i * lambda * n_i;
    cmat m_new = krein_j(n) * (ci * (f_new + 0.5 * (flat_adjoint(n_new) * n_new)));
    m_new = 0.5 * (m_new + cmat(m_new.adjoint()));
    out.m = doubled_matrix::from_full(m_new, 1e-6);
    return out;
}

}  // namespace lqsynth
