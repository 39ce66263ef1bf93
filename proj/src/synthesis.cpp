#include "lqsynth/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqsynth {

cavity_spec extract_cavity_params(const doubled_matrix& column_pair, double detuning) {
    if (column_pair.half_cols() != 1)
        throw dimension_error("extract_cavity_params: expected a single doubled column");
    cavity_spec c;
    c.detuning = detuning;
    for (index_t j = 0; j < column_pair.half_rows(); ++j) {
        cavity_port p;
        const cplx e1 = column_pair.block1()(j, 0);
        const cplx e2 = column_pair.block2()(j, 0);
        p.kappa = std::norm(e1);
        p.phi = std::abs(e1) > 1e-14 ? std::arg(e1) : 0.0;
        p.g = std::norm(e2);
        p.theta = std::abs(e2) > 1e-14 ? std::arg(e2) : 0.0;
        c.ports.push_back(p);
    }
    return c;
}

// Unitary 2x2 rotation moving the eigenvalue at t(i+1, i+1) up to position i
// (standard Schur reordering step on an upper triangular block).
static void swap_adjacent_diag(cmat& t, cmat& q, index_t i) {
    const cplx v1 = t(i, i + 1);
    const cplx v2 = t(i + 1, i + 1) - t(i, i);
    const double r = std::hypot(std::abs(v1), std::abs(v2));
    if (r < 1e-300) return;  // numerically identical eigenvalues, nothing to reorder
    cmat g(2, 2);
    g << std::conj(v1) / r, std::conj(v2) / r, -v2 / r, v1 / r;
    t.middleRows(i, 2) = g * t.middleRows(i, 2);
    t.middleCols(i, 2) = t.middleCols(i, 2) * g.adjoint();
    q.middleCols(i, 2) = q.middleCols(i, 2) * g.adjoint();
    t(i + 1, i) = 0.0;
}

static std::vector<cplx> resolve_targets(std::vector<cplx> eigs, const eigen_ordering& ordering) {
    const auto n = eigs.size();
    switch (ordering.policy) {
        case ordering_policy::given:
            if (ordering.targets.size() != n)
                throw parameter_error("ordering: targets must list one eigenvalue per mode");
            return ordering.targets;
        case ordering_policy::ascending_real:
            std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
                return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag());
            });
            return eigs;
        case ordering_policy::descending_real:
        default:
            std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
                return std::pair(a.real(), a.imag()) > std::pair(b.real(), b.imag());
            });
            return eigs;
    }
}

// V with V F V^dagger lower triangular and its diagonal in the requested
// top-to-bottom order.
static std::pair<cmat, cmat> lower_schur_ordered(const cmat& f, const eigen_ordering& ordering) {
    const index_t n = f.rows();
    Eigen::ComplexSchur<cmat> schur(f);
    if (schur.info() != Eigen::Success)
        throw synthesis_error("cascade synthesis: Schur decomposition failed to converge");
    cmat t = schur.matrixT();
    cmat q = schur.matrixU();

    std::vector<cplx> eigs(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = t(i, i);
    const std::vector<cplx> desired = resolve_targets(std::move(eigs), ordering);

    // The final flip reverses the diagonal, so sort the upper form into reversed order.
    for (index_t pos = 0; pos < n; ++pos) {
        const cplx want = desired[static_cast<size_t>(n - 1 - pos)];
        index_t best = pos;
        double best_dist = std::numeric_limits<double>::infinity();
        for (index_t j = pos; j < n; ++j) {
            const double d = std::abs(t(j, j) - want);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        for (index_t j = best; j > pos; --j) swap_adjacent_diag(t, q, j - 1);
    }

    cmat p = cmat::Zero(n, n);
    for (index_t i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
    const cmat v = cmat(q * p).adjoint();
    const cmat fhat = v * f * v.adjoint();
    return {v, fhat};
}

cascade_realization cascade_passive(const passive_lqss& sys, const eigen_ordering& ordering) {
    const validation_report rep = validate(sys);
    if (!rep.ok()) throw validation_error("cascade_passive: invalid input: " + rep.to_string());
    const index_t n = sys.n_modes, m = sys.n_io;

    const cmat f = drift_matrix(sys);
    const auto [v, fhat] = lower_schur_ordered(f, ordering);
    const cmat nhat = sys.n * v.adjoint();

    cascade_realization out;
    out.passive = true;
    out.pre_network = sys.s;
    out.transform = doubled_matrix(v, cmat::Zero(n, n));
    for (index_t i = 0; i < n; ++i) {
        const doubled_matrix col(nhat.col(i), cmat::Zero(m, 1));
        out.cavities.push_back(extract_cavity_params(col, -fhat(i, i).imag()));
        out.eigen_order.push_back(fhat(i, i));
    }
    return out;
}

cascade_realization cascade_general(const general_lqss& sys, const eigen_ordering& ordering) {
    const validation_report rep = validate(sys);
    if (!rep.ok()) throw validation_error("cascade_general: invalid input: " + rep.to_string());
    const index_t n = sys.n_modes;

    const cmat f = drift_matrix(sys);
    const doubled_matrix fd = doubled_matrix::from_full(f, 1e-8);
    krein_schur_result ks = krein_schur(fd, ordering);
    const doubled_matrix nhat = sys.n * ks.w;

    cascade_realization out;
    out.passive = false;
    out.pre_network = sys.s.full();
    out.transform = flat_adjoint(ks.w);
    out.eigen_order = ks.eigen_order;
    for (index_t i = 0; i < n; ++i) {
        const doubled_matrix col(nhat.block1().col(i), nhat.block2().col(i));
        out.cavities.push_back(extract_cavity_params(col, -ks.t.block1()(i, i).imag()));
    }
    return out;
}

static rvec resolve_free_vector(const std::vector<double>& given, index_t n, double fill,
                                const char* what, bool require_positive) {
    rvec out(n);
    if (given.empty()) {
        out.setConstant(fill);
    } else {
        if (static_cast<index_t>(given.size()) != n)
            throw parameter_error(std::string(what) + ": expected one value per mode");
        for (index_t i = 0; i < n; ++i) out(i) = given[static_cast<size_t>(i)];
    }
    if (require_positive) {
        for (index_t i = 0; i < n; ++i)
            if (out(i) <= 0.0)
                throw parameter_error(std::string(what) + ": values must be positive");
    }
    return out;
}

feedback_realization feedback_passive(const passive_lqss& sys, const feedback_params& params) {
    const validation_report rep = validate(sys);
    if (!rep.ok()) throw validation_error("feedback_passive: invalid input: " + rep.to_string());
    const index_t n = sys.n_modes, m = sys.n_io;
    const rvec dvec = resolve_free_vector(params.detunings, n, 0.0, "detunings", false);
    const rvec nt =
        resolve_free_vector(params.interconnect_couplings, n, 1.0, "interconnect couplings", true);

    Eigen::JacobiSVD<cmat> svd(sys.n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const cmat vm = svd.matrixU();
    const cmat wm = svd.matrixV();
    const rvec sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    index_t r = 0;
    for (index_t i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * smax) ++r;

    const cmat mhat = wm.adjoint() * sys.m * wm;
    const cmat ntinv = nt.cwiseInverse().asDiagonal();
    cmat x = 2.0 * ci * ntinv * (mhat - cmat(dvec.cast<cplx>().asDiagonal())) * ntinv;
    x = 0.5 * (x - cmat(x.adjoint()));  // exact skew-Hermitian part

    feedback_realization out;
    out.passive = true;
    out.pre_network = vm.adjoint() * sys.s;
    out.post_network = vm;
    out.feedback_gain = inverse_cayley(x);
    for (index_t i = 0; i < n; ++i) {
        placed_cavity pc;
        pc.spec.detuning = dvec(i);
        if (i < r) {
            pc.spec.ports.push_back({sv(i) * sv(i), 0.0, 0.0, 0.0});
            pc.spec.ports.push_back({nt(i) * nt(i), 0.0, 0.0, 0.0});
            pc.spec.interconnect_port = 1;
            pc.port_lines = {i, m + i};
        } else {
            pc.spec.ports.push_back({nt(i) * nt(i), 0.0, 0.0, 0.0});
            pc.spec.interconnect_port = 0;
            pc.port_lines = {m + i};
        }
        out.cavities.push_back(std::move(pc));
        out.detunings.push_back(dvec(i));
        out.interconnect_couplings.push_back(nt(i));
    }
    out.audit.rank = r;
    out.audit.zero_modes = n - r;
    for (index_t i = 0; i < r; ++i) out.audit.lambda_plus.push_back(sv(i) * sv(i));
    return out;
}

feedback_realization feedback_general(const general_lqss& sys, const feedback_params& params) {
    return feedback_general_from_svd(sys, krein_svd(sys.n), params);
}

feedback_realization feedback_general_from_svd(const general_lqss& sys,
                                               const krein_svd_result& svd,
                                               const feedback_params& params) {
    const validation_report rep = validate(sys);
    if (!rep.ok())
        throw validation_error("feedback_general: invalid input: " + rep.to_string());
    const index_t n = sys.n_modes, m = sys.n_io;

    // Structural guards on the supplied factorization (loose enough for externally
    // provided factors quoted to a few digits).
    const cmat nfull = sys.n.full();
    const cmat vf = svd.v.full(), wf = svd.w.full();
    const double nscale = std::max(1.0, max_abs(nfull));
    if (max_abs(nfull - vf * svd.nhat.full() * flat_adjoint(wf)) / nscale > 1e-3)
        throw structure_error("feedback_general: factorization does not reproduce the coupling");
    if (!is_bogoliubov(vf, 1e-3) || !is_bogoliubov(wf, 1e-3))
        throw structure_error("feedback_general: factorization matrices are not Bogoliubov");

    const index_t r_plus = static_cast<index_t>(svd.lambda_plus.size());
    const index_t r_minus = static_cast<index_t>(svd.lambda_minus.size());
    const index_t r_c = static_cast<index_t>(svd.lambda_complex.size());
    const index_t r = r_plus + r_minus + 2 * r_c;
    if (r + svd.zero_modes != n)
        throw structure_error("feedback_general: mode classes do not cover the mode space");

    const rvec dvec = resolve_free_vector(params.detunings, n, 0.0, "detunings", false);
    const rvec nt =
        resolve_free_vector(params.interconnect_couplings, n, 1.0, "interconnect couplings", true);

    // Target interaction of the cavity bank (detunings plus the pair cross terms).
    cmat mbar2 = cmat::Zero(n, n);
    for (index_t j = 0; j < r_c; ++j) {
        const index_t p = r_plus + r_minus + 2 * j;
        const double entry = -svd.lambda_complex[static_cast<size_t>(j)].imag() / 2.0;
        mbar2(p, p + 1) = entry;
        mbar2(p + 1, p) = entry;
    }
    const cmat mbar_f = doubled_matrix(cmat(dvec.cast<cplx>().asDiagonal()), mbar2).full();

    cmat mhat_f = wf.adjoint() * sys.m.full() * wf;
    mhat_f = 0.5 * (mhat_f + cmat(mhat_f.adjoint()));

    cmat ntinv1 = cmat::Zero(n, n);
    for (index_t i = 0; i < n; ++i) ntinv1(i, i) = 1.0 / nt(i);
    const cmat ntinv_f = doubled_matrix(ntinv1, cmat::Zero(n, n)).full();
    const cmat x = 2.0 * ci * ntinv_f * krein_j(n) * (mhat_f - mbar_f) * ntinv_f;
    const cmat rgain = inverse_cayley(x);
    // X is exactly flat-skew, so any structural loss in R traces back to the
    // conditioning of X + I; surface it as the designated error instead of letting the
    // assembly reject the gain later.
    if (!is_bogoliubov(rgain, 1e-8))
        throw cayley_singular_error(
            "CayleySingular: X + I is too ill-conditioned for a reliable interconnect gain; "
            "choose different free detunings");

    feedback_realization out;
    out.passive = false;
    out.pre_network = flat_adjoint(vf) * sys.s.full();
    out.post_network = vf;
    out.feedback_gain = rgain;
    for (index_t i = 0; i < n; ++i) {
        out.detunings.push_back(dvec(i));
        out.interconnect_couplings.push_back(nt(i));
    }

    index_t mode = 0;
    for (index_t i = 0; i < r_plus; ++i) {
        placed_cavity pc;
        pc.spec.detuning = dvec(mode);
        pc.spec.ports.push_back({svd.lambda_plus[static_cast<size_t>(i)], 0.0, 0.0, 0.0});
        pc.spec.ports.push_back({nt(mode) * nt(mode), 0.0, 0.0, 0.0});
        pc.spec.interconnect_port = 1;
        pc.port_lines = {mode, m + mode};
        out.cavities.push_back(std::move(pc));
        ++mode;
    }
    for (index_t i = 0; i < r_minus; ++i) {
        placed_cavity pc;
        pc.spec.detuning = dvec(mode);
        pc.spec.ports.push_back({0.0, 0.0, -svd.lambda_minus[static_cast<size_t>(i)], 0.0});
        pc.spec.ports.push_back({nt(mode) * nt(mode), 0.0, 0.0, 0.0});
        pc.spec.interconnect_port = 1;
        pc.port_lines = {mode, m + mode};
        out.cavities.push_back(std::move(pc));
        ++mode;
    }
    for (index_t j = 0; j < r_c; ++j) {
        const double al = svd.alphas[static_cast<size_t>(j)];
        const double be = svd.betas[static_cast<size_t>(j)];
        const index_t la = mode, lb = mode + 1;
        auto make_pair_cavity = [&](double detuning, index_t int_line) {
            placed_cavity pc;
            pc.spec.detuning = detuning;
            pc.spec.ports.push_back({0.0, 0.0, be * be, std::numbers::pi / 2.0});
            pc.spec.ports.push_back({al * al, 0.0, 0.0, 0.0});
            const double ntl = int_line == m + la ? nt(la) : nt(lb);
            pc.spec.ports.push_back({ntl * ntl, 0.0, 0.0, 0.0});
            pc.spec.interconnect_port = 2;
            pc.port_lines = {la, lb, int_line};
            return pc;
        };
        const index_t ia = static_cast<index_t>(out.cavities.size());
        out.cavities.push_back(make_pair_cavity(dvec(la), m + la));
        const index_t ib = static_cast<index_t>(out.cavities.size());
        out.cavities.push_back(make_pair_cavity(dvec(lb), m + lb));
        pair_block pb;
        pb.cavity_a = ia;
        pb.cavity_b = ib;
        pb.line_a = la;
        pb.line_b = lb;
        pb.mid = cmat(2, 2);
        pb.mid << 0.0, 1.0, -1.0, 0.0;
        pb.compensator = pb.mid.transpose();
        out.pairs.push_back(std::move(pb));
        mode += 2;
    }
    for (index_t k = 0; k < svd.zero_modes; ++k) {
        placed_cavity pc;
        pc.spec.detuning = dvec(mode);
        pc.spec.ports.push_back({nt(mode) * nt(mode), 0.0, 0.0, 0.0});
        pc.spec.interconnect_port = 0;
        pc.port_lines = {m + mode};
        out.cavities.push_back(std::move(pc));
        ++mode;
    }

    out.audit.lambda_plus = svd.lambda_plus;
    out.audit.lambda_minus = svd.lambda_minus;
    out.audit.lambda_complex = svd.lambda_complex;
    out.audit.alphas = svd.alphas;
    out.audit.betas = svd.betas;
    out.audit.zero_modes = svd.zero_modes;
    out.audit.rank = r;
    return out;
}

}  // namespace lqsynth
