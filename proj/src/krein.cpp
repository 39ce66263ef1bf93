#include "lqsynth/krein.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lqsynth {

cplx j_inner(const cvec& v, const cvec& w) {
    if (v.size() != w.size() || v.size() % 2 != 0)
        throw dimension_error("j_inner: vectors must share an even dimension");
    const index_t k = v.size() / 2;
    return v.head(k).dot(w.head(k)) - v.tail(k).dot(w.tail(k));
}

double j_norm(const cvec& v) {
    return std::sqrt(std::abs(j_inner(v, v).real()));
}

int j_sign(const cvec& v, double tol) {
    const double jn = j_inner(v, v).real();
    if (std::abs(jn) <= tol * v.squaredNorm()) return 0;
    return jn > 0 ? 1 : -1;
}

cvec sigma_conjugate(const cvec& v) {
    if (v.size() % 2 != 0)
        throw dimension_error("sigma_conjugate: vector dimension must be even");
    const index_t k = v.size() / 2;
    cvec w(v.size());
    w.head(k) = v.tail(k).conjugate();
    w.tail(k) = v.head(k).conjugate();
    return w;
}

normalized_vector krein_normalize(const cvec& v, double tol) {
    const double jn = j_inner(v, v).real();
    if (std::abs(jn) <= tol * v.squaredNorm())
        throw neutral_vector_error("NeutralVector: vector has numerically zero J-norm");
    if (jn > 0) return {v / std::sqrt(jn), 1};
    return {sigma_conjugate(v) / std::sqrt(-jn), -1};
}

std::vector<cvec> krein_gram_schmidt(const std::vector<cvec>& fixed,
                                     const std::vector<cvec>& pool,
                                     index_t target_count,
                                     double tol) {
    std::vector<cvec> xs = fixed;
    std::vector<bool> spent(pool.size(), false);

    // Twice-through reorthogonalization against each x and its conjugate mirror.
    auto project_out = [&](cvec v) {
        for (int rep = 0; rep < 2; ++rep) {
            for (const cvec& x : xs) {
                const cvec s = sigma_conjugate(x);
                v -= x * j_inner(x, v);
                v += s * j_inner(s, v);
            }
        }
        return v;
    };

    // Greedy slot filling: at every step take the pool candidate whose orthogonalized
    // remainder is farthest from neutral. First-acceptable picks can land on remainders
    // with |J-norm|/|v|^2 barely above tol, and the subsequent 1/sqrt(jn) normalization
    // amplifies rounding error catastrophically.
    while (static_cast<index_t>(xs.size()) < target_count) {
        index_t best = -1;
        double best_q = tol;
        cvec best_v;
        double best_jn = 0.0;
        for (size_t c = 0; c < pool.size(); ++c) {
            if (spent[c]) continue;
            cvec v = project_out(pool[c]);
            const double nv = v.norm();
            if (nv < 1e-12 * std::max(1.0, pool[c].norm())) continue;
            const double jn = j_inner(v, v).real();
            const double q = std::abs(jn) / (nv * nv);
            if (q > best_q) {
                best_q = q;
                best = static_cast<index_t>(c);
                best_v = std::move(v);
                best_jn = jn;
            }
        }
        if (best < 0)
            throw degenerate_complement_error(
                "DegenerateComplement: candidate pool exhausted before the J-orthonormal set "
                "reached its target size");
        spent[static_cast<size_t>(best)] = true;
        cvec v = best_jn < 0 ? sigma_conjugate(best_v) : std::move(best_v);
        xs.push_back(v / std::sqrt(std::abs(best_jn)));
    }
    return xs;
}

// Rotates the global phase so the first significant entry is real positive.
static cvec phase_canon(cvec v) {
    const double nv = v.norm();
    for (index_t i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-8 * nv) {
            v *= std::abs(v(i)) / v(i);
            break;
        }
    }
    return v;
}

namespace {

struct candidate {
    cplx lambda;
    cvec vec;
};

}  // namespace

// Eigenvectors of A usable for deflation: per eigenvalue cluster, diagonalize the
// J-Gram matrix of the eigenvector batch; directions with nonzero Gram eigenvalue have
// definite sign, and negative ones are conjugate-flipped to the mirrored eigenvalue.
static std::vector<candidate> usable_candidates(const cmat& a, double tol) {
    const index_t dim = a.rows();
    Eigen::ComplexEigenSolver<cmat> es(a);
    if (es.info() != Eigen::Success)
        throw synthesis_error("usable_candidates: eigendecomposition failed to converge");
    const cvec lam = es.eigenvalues();
    const cmat vecs = es.eigenvectors();

    std::vector<index_t> order(static_cast<size_t>(dim));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](index_t i, index_t j) {
        if (lam(i).real() != lam(j).real()) return lam(i).real() < lam(j).real();
        return lam(i).imag() < lam(j).imag();
    });
    const double scale = std::max(1.0, max_abs(lam));
    std::vector<bool> used(static_cast<size_t>(dim), false);
    std::vector<std::vector<index_t>> clusters;
    for (index_t i : order) {
        if (used[static_cast<size_t>(i)]) continue;
        std::vector<index_t> grp{i};
        used[static_cast<size_t>(i)] = true;
        for (index_t j : order) {
            if (!used[static_cast<size_t>(j)] && std::abs(lam(j) - lam(i)) <= 1e-7 * scale) {
                grp.push_back(j);
                used[static_cast<size_t>(j)] = true;
            }
        }
        clusters.push_back(std::move(grp));
    }

    const cmat jmat = krein_j(dim / 2);
    std::vector<candidate> cands;
    for (const auto& grp : clusters) {
        cmat u(dim, static_cast<index_t>(grp.size()));
        for (size_t c = 0; c < grp.size(); ++c) u.col(static_cast<index_t>(c)) = vecs.col(grp[c]);
        cmat g = u.adjoint() * jmat * u;
        g = 0.5 * (g + cmat(g.adjoint()));
        Eigen::SelfAdjointEigenSolver<cmat> ges(g);
        const rvec ev = ges.eigenvalues();
        for (index_t a2 = 0; a2 < ev.size(); ++a2) {
            if (std::abs(ev(a2)) <= tol) continue;
            cvec w = u * ges.eigenvectors().col(a2);
            w.normalize();
            if (ev(a2) > 0)
                cands.push_back({lam(grp[0]), std::move(w)});
            else
                cands.push_back({std::conj(lam(grp[0])), sigma_conjugate(w)});
        }
    }
    return cands;
}

krein_schur_result krein_schur(const doubled_matrix& a, const eigen_ordering& ordering,
                               double tol) {
    if (a.half_rows() != a.half_cols())
        throw dimension_error("krein_schur: matrix must be square");
    const index_t n = a.half_rows();
    if (ordering.policy == ordering_policy::given &&
        static_cast<index_t>(ordering.targets.size()) != n)
        throw parameter_error("krein_schur: ordering must list one target eigenvalue per mode");

    cmat a1 = a.block1(), a2 = a.block2();
    cmat w1 = cmat::Identity(n, n), w2 = cmat::Zero(n, n);

    for (index_t k = n; k >= 1; --k) {
        const cmat acur = doubled_matrix(a1.topLeftCorner(k, k), a2.topLeftCorner(k, k)).full();
        std::vector<candidate> cands = usable_candidates(acur, tol);

        // Preference key: the eigenvalue that should land at the bottom of the current block.
        auto key_less = [&](const candidate& x, const candidate& y) {
            switch (ordering.policy) {
                case ordering_policy::descending_real:
                    return std::pair(x.lambda.real(), x.lambda.imag()) <
                           std::pair(y.lambda.real(), y.lambda.imag());
                case ordering_policy::ascending_real:
                    return std::pair(x.lambda.real(), x.lambda.imag()) >
                           std::pair(y.lambda.real(), y.lambda.imag());
                case ordering_policy::given:
                default: {
                    const cplx t = ordering.targets[static_cast<size_t>(k - 1)];
                    return std::abs(x.lambda - t) < std::abs(y.lambda - t);
                }
            }
        };
        std::stable_sort(cands.begin(), cands.end(), key_less);

        cvec x;
        bool found = false;
        for (const candidate& c : cands) {
            cvec v = phase_canon(c.vec);
            const double jn = j_inner(v, v).real();
            if (jn > tol * v.squaredNorm()) {
                x = v / std::sqrt(jn);
                found = true;
                break;
            }
        }
        if (!found) throw assumption_violated_error(static_cast<int>(n - k + 1));

        std::vector<cvec> pool;
        pool.reserve(static_cast<size_t>(2 * k));
        for (index_t e = 0; e < 2 * k; ++e) pool.push_back(cvec::Unit(2 * k, e));
        std::vector<cvec> xs = krein_gram_schmidt({x}, pool, k, tol);

        // The selected vector goes last so its eigenvalue lands at slot (k, k).
        cmat xmat(2 * k, k);
        for (index_t c = 0; c + 1 < k; ++c) xmat.col(c) = xs[static_cast<size_t>(c) + 1];
        xmat.col(k - 1) = xs[0];
        cmat wb(2 * k, 2 * k);
        wb.leftCols(k) = xmat;
        for (index_t c = 0; c < k; ++c) wb.col(k + c) = sigma_conjugate(cvec(xmat.col(c)));

        const cmat tloc = flat_adjoint(wb) * acur * wb;
        a1.topLeftCorner(k, k) = tloc.topLeftCorner(k, k);
        a2.topLeftCorner(k, k) = tloc.block(0, k, k, k);

        cmat e1 = cmat::Identity(n, n), e2 = cmat::Zero(n, n);
        e1.topLeftCorner(k, k) = wb.topLeftCorner(k, k);
        e2.topLeftCorner(k, k) = wb.block(0, k, k, k);
        const cmat w1n = w1 * e1 + w2 * e2.conjugate();
        const cmat w2n = w1 * e2 + w2 * e1.conjugate();
        w1 = std::move(w1n);
        w2 = std::move(w2n);
    }

    doubled_matrix w(std::move(w1), std::move(w2));
    const cmat wfull = w.full();
    const cmat tfull = flat_adjoint(wfull) * a.full() * wfull;
    doubled_matrix t = doubled_matrix::from_full(tfull, 1e-6);
    std::vector<cplx> eigen_order(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) eigen_order[static_cast<size_t>(i)] = t.block1()(i, i);
    return {std::move(w), std::move(t), std::move(eigen_order)};
}

// Bilinear symplectic form x^T (Sigma J) y used to pair complex Gramian eigenvectors.
static cplx symp_form(const cvec& x, const cvec& y) {
    const index_t k = x.size() / 2;
    return x.tail(k).cwiseProduct(y.head(k)).sum() - x.head(k).cwiseProduct(y.tail(k)).sum();
}

static double pair_alpha(cplx lam) {
    return std::sqrt((std::abs(lam) + lam.real()) / 2.0);
}

static double pair_beta(cplx lam) {
    return lam.imag() / std::sqrt(2.0 * (std::abs(lam) + lam.real()));
}

krein_svd_result krein_svd(const doubled_matrix& nd, double tol) {
    const index_t m = nd.half_rows(), n = nd.half_cols();
    const cmat nfull = nd.full();
    const cmat gram = flat_adjoint(nfull) * nfull;  // 2n x 2n, doubled-up

    Eigen::JacobiSVD<cmat> svd_n(nfull, Eigen::ComputeFullV);
    const rvec sv = svd_n.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    index_t rank_n = 0;
    for (index_t i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * smax) ++rank_n;

    Eigen::ComplexEigenSolver<cmat> ges(gram);
    if (ges.info() != Eigen::Success)
        throw synthesis_error("krein_svd: Gramian eigendecomposition failed to converge");
    const cvec lam = ges.eigenvalues();
    const cmat evec = ges.eigenvectors();
    const double scale = std::max(1.0, max_abs(lam));

    index_t rank_gram = 0;
    {
        Eigen::JacobiSVD<cmat> sg(gram);
        const rvec gs = sg.singularValues();
        const double gmax = gs.size() > 0 ? gs(0) : 0.0;
        for (index_t i = 0; i < gs.size(); ++i)
            if (gs(i) > 1e-9 * gmax && gmax > 0.0) ++rank_gram;
    }
    if (rank_n != rank_gram)
        throw kernel_mismatch_error(
            "KernelMismatch: rank of the coupling (" + std::to_string(rank_n) +
            ") differs from the rank of its Gramian (" + std::to_string(rank_gram) +
            "); the kernel cannot be split off");

    // Cluster the Gramian spectrum.
    std::vector<index_t> order(static_cast<size_t>(2 * n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](index_t i, index_t j) {
        if (lam(i).real() != lam(j).real()) return lam(i).real() < lam(j).real();
        return lam(i).imag() < lam(j).imag();
    });
    std::vector<bool> used(static_cast<size_t>(2 * n), false);
    struct cluster_info {
        cplx lam;
        std::vector<index_t> idx;
    };
    std::vector<cluster_info> clusters;
    for (index_t i : order) {
        if (used[static_cast<size_t>(i)]) continue;
        cluster_info c;
        c.idx.push_back(i);
        used[static_cast<size_t>(i)] = true;
        for (index_t j : order) {
            if (!used[static_cast<size_t>(j)] && std::abs(lam(j) - lam(i)) <= 1e-6 * scale) {
                c.idx.push_back(j);
                used[static_cast<size_t>(j)] = true;
            }
        }
        cplx mean = 0.0;
        for (index_t j : c.idx) mean += lam(j);
        c.lam = mean / static_cast<double>(c.idx.size());
        clusters.push_back(std::move(c));
    }

    // Every eigenvalue must be semisimple: the rank of (Gramian - lambda I) has to drop
    // by the full cluster multiplicity.
    const cmat eye2n = cmat::Identity(2 * n, 2 * n);
    for (const auto& c : clusters) {
        Eigen::JacobiSVD<cmat> ss(cmat(gram - c.lam * eye2n));
        const rvec s2 = ss.singularValues();
        index_t rk = 0;
        for (index_t i = 0; i < s2.size(); ++i)
            if (s2(i) > 1e-8 * scale) ++rk;
        if (rk != 2 * n - static_cast<index_t>(c.idx.size()))
            throw not_semisimple_error(
                "NotSemisimple: Gramian eigenvalue near (" + std::to_string(c.lam.real()) + ", " +
                std::to_string(c.lam.imag()) + "i) is defective");
    }

    std::vector<cluster_info> pos, neg, cpx;
    for (const auto& c : clusters) {
        if (std::abs(c.lam) <= 1e-9 * scale) continue;  // kernel handled separately
        if (std::abs(c.lam.imag()) <= 1e-9 * scale) {
            (c.lam.real() > 0 ? pos : neg).push_back(c);
        } else if (c.lam.imag() > 0) {
            cpx.push_back(c);
        }
        // Negative-imaginary clusters are the conjugate mirrors; skipped.
    }
    std::sort(pos.begin(), pos.end(),
              [](const cluster_info& a, const cluster_info& b) { return a.lam.real() > b.lam.real(); });
    std::sort(neg.begin(), neg.end(),
              [](const cluster_info& a, const cluster_info& b) { return a.lam.real() < b.lam.real(); });
    std::sort(cpx.begin(), cpx.end(),
              [](const cluster_info& a, const cluster_info& b) { return std::abs(a.lam) > std::abs(b.lam); });

    krein_svd_result res;
    std::vector<cvec> wcols;
    struct mode_class {
        char kind;  // '+', '-', 'c' (pair start), 'p' (pair partner), '0'
        cplx lambda;
    };
    std::vector<mode_class> classes;

    auto real_block = [&](const cluster_info& c, char kind) {
        if (c.idx.size() % 2 != 0)
            throw unsupported_spectrum_error(
                "UnsupportedSpectrum: real Gramian eigenvalue with odd multiplicity");
        std::vector<cvec> pool;
        for (index_t j : c.idx) pool.push_back(evec.col(j));
        std::vector<cvec> xs;
        try {
            xs = krein_gram_schmidt({}, pool, static_cast<index_t>(c.idx.size() / 2), tol);
        } catch (const degenerate_complement_error&) {
            throw unsupported_spectrum_error(
                "UnsupportedSpectrum: eigenspace of a real Gramian eigenvalue has no "
                "J-orthonormal basis of the expected size");
        }
        for (cvec& x : xs) {
            wcols.push_back(std::move(x));
            classes.push_back({kind, c.lam});
            if (kind == '+')
                res.lambda_plus.push_back(c.lam.real());
            else
                res.lambda_minus.push_back(c.lam.real());
        }
    };
    for (const auto& c : pos) real_block(c, '+');
    for (const auto& c : neg) real_block(c, '-');

    for (const auto& c : cpx) {
        std::vector<cvec> basis;
        for (index_t j : c.idx) basis.push_back(evec.col(j));
        while (!basis.empty()) {
            cvec p = basis.front();
            basis.erase(basis.begin());
            p.normalize();
            p = phase_canon(std::move(p));
            index_t best = -1;
            double best_val = 0.0;
            for (size_t i = 0; i < basis.size(); ++i) {
                const double val =
                    std::abs(symp_form(p, basis[i])) / std::max(basis[i].norm(), 1e-300);
                if (val > best_val) {
                    best_val = val;
                    best = static_cast<index_t>(i);
                }
            }
            if (best < 0 || best_val <= 1e-10)
                throw unsupported_spectrum_error(
                    "UnsupportedSpectrum: complex Gramian eigenvalue without a symplectic "
                    "partner vector");
            cvec q = basis[static_cast<size_t>(best)];
            basis.erase(basis.begin() + best);
            q /= (-2.0 * symp_form(p, q));
            for (cvec& b : basis)
                b = cvec(b - 2.0 * symp_form(q, b) * p + 2.0 * symp_form(p, b) * q);
            cvec wa = p + sigma_conjugate(q);
            cvec wb = -q + sigma_conjugate(p);
            wcols.push_back(std::move(wa));
            classes.push_back({'c', c.lam});
            wcols.push_back(std::move(wb));
            classes.push_back({'p', c.lam});
            res.lambda_complex.push_back(c.lam);
            res.alphas.push_back(pair_alpha(c.lam));
            res.betas.push_back(pair_beta(c.lam));
        }
    }

    const index_t kernel_dim = 2 * n - rank_n;
    if (kernel_dim % 2 != 0)
        throw unsupported_spectrum_error("UnsupportedSpectrum: coupling kernel has odd dimension");
    const index_t kernel_modes = kernel_dim / 2;
    if (kernel_modes > 0) {
        std::vector<cvec> pool;
        const cmat& vright = svd_n.matrixV();
        for (index_t c = rank_n; c < 2 * n; ++c) pool.push_back(vright.col(c));
        std::vector<cvec> xs;
        try {
            xs = krein_gram_schmidt({}, pool, kernel_modes, tol);
        } catch (const degenerate_complement_error&) {
            throw unsupported_spectrum_error(
                "UnsupportedSpectrum: coupling kernel has no J-orthonormal basis of the "
                "expected size");
        }
        for (cvec& x : xs) {
            wcols.push_back(std::move(x));
            classes.push_back({'0', 0.0});
        }
    }
    res.zero_modes = kernel_modes;

    if (static_cast<index_t>(wcols.size()) != n)
        throw unsupported_spectrum_error(
            "UnsupportedSpectrum: classified mode count (" + std::to_string(wcols.size()) +
            ") does not match the mode space dimension (" + std::to_string(n) + ")");

    cmat wx(2 * n, n);
    for (index_t c = 0; c < n; ++c) wx.col(c) = wcols[static_cast<size_t>(c)];
    doubled_matrix w(wx.topRows(n), wx.bottomRows(n).conjugate());
    const cmat wfull = w.full();

    // Canonical coupling template.
    cmat nh1 = cmat::Zero(m, n), nh2 = cmat::Zero(m, n);
    index_t col = 0;
    for (const mode_class& mc : classes) {
        if (mc.kind != 'p' && mc.kind != '0' && col >= m)
            throw unsupported_spectrum_error(
                "UnsupportedSpectrum: more coupled modes than optical ports");
        switch (mc.kind) {
            case '+': nh1(col, col) = std::sqrt(mc.lambda.real()); break;
            case '-': nh2(col, col) = std::sqrt(-mc.lambda.real()); break;
            case 'c': {
                const double al = pair_alpha(mc.lambda), be = pair_beta(mc.lambda);
                nh1(col, col) = al;
                nh1(col + 1, col + 1) = al;
                nh2(col, col + 1) = ci * be;
                nh2(col + 1, col) = -ci * be;
                break;
            }
            default: break;  // 'p' handled with 'c'; '0' leaves zero columns
        }
        ++col;
    }
    doubled_matrix nhat(std::move(nh1), std::move(nh2));

    // Fixed columns of V implied by N = V Nhat W^flat on the coupled modes.
    std::vector<std::pair<index_t, cvec>> fixed_slots;
    col = 0;
    for (const mode_class& mc : classes) {
        switch (mc.kind) {
            case '+': {
                cvec u = nfull * wfull.col(col) / std::sqrt(mc.lambda.real());
                fixed_slots.emplace_back(col, std::move(u));
                break;
            }
            case '-': {
                const cvec t = nfull * wfull.col(col) / std::sqrt(-mc.lambda.real());
                fixed_slots.emplace_back(col, sigma_conjugate(t));
                break;
            }
            case 'c': {
                const double al = pair_alpha(mc.lambda), be = pair_beta(mc.lambda);
                const double labs = std::abs(mc.lambda);
                const cvec na = nfull * wfull.col(col);
                const cvec nb = nfull * wfull.col(col + 1);
                cvec ua = (al * na - ci * be * sigma_conjugate(nb)) / labs;
                cvec ub = (al * nb + ci * be * sigma_conjugate(na)) / labs;
                fixed_slots.emplace_back(col, std::move(ua));
                fixed_slots.emplace_back(col + 1, std::move(ub));
                break;
            }
            default: break;
        }
        ++col;
    }

    std::vector<cvec> fixed_vecs;
    fixed_vecs.reserve(fixed_slots.size());
    for (const auto& fs : fixed_slots) fixed_vecs.push_back(fs.second);
    std::vector<cvec> pool_std;
    for (index_t e = 0; e < 2 * m; ++e) pool_std.push_back(cvec::Unit(2 * m, e));
    std::vector<cvec> vcols;
    try {
        vcols = krein_gram_schmidt(fixed_vecs, pool_std, m, tol);
    } catch (const degenerate_complement_error&) {
        throw unsupported_spectrum_error(
            "UnsupportedSpectrum: port-side basis completion failed");
    }

    cmat vx(2 * m, m);
    std::vector<bool> slot_taken(static_cast<size_t>(m), false);
    for (size_t i = 0; i < fixed_slots.size(); ++i) {
        vx.col(fixed_slots[i].first) = vcols[i];
        slot_taken[static_cast<size_t>(fixed_slots[i].first)] = true;
    }
    size_t next = fixed_slots.size();
    for (index_t s2 = 0; s2 < m; ++s2) {
        if (!slot_taken[static_cast<size_t>(s2)]) vx.col(s2) = vcols[next++];
    }
    doubled_matrix v(vx.topRows(m), vx.bottomRows(m).conjugate());

    // Construction-time guards.
    const cmat vf = v.full();
    const double nscale = std::max(1.0, max_abs(nfull));
    const double rec = max_abs(nfull - vf * nhat.full() * flat_adjoint(wfull)) / nscale;
    const cmat eye_m = cmat::Identity(2 * m, 2 * m);
    const double bog_v = std::max(max_abs(vf * flat_adjoint(vf) - eye_m),
                                  max_abs(flat_adjoint(vf) * vf - eye_m));
    const double bog_w = std::max(max_abs(wfull * flat_adjoint(wfull) - eye2n),
                                  max_abs(flat_adjoint(wfull) * wfull - eye2n));
    if (rec > 1e-8 || bog_v > 1e-8 || bog_w > 1e-8)
        throw unsupported_spectrum_error(
            "UnsupportedSpectrum: canonical factorization residual too large "
            "(reconstruction " + std::to_string(rec) + ")");

    res.v = std::move(v);
    res.w = std::move(w);
    res.nhat = std::move(nhat);
    return res;
}

cmat cayley(const cmat& r) {
    if (r.rows() != r.cols()) throw dimension_error("cayley: square matrix required");
    const cmat eye = cmat::Identity(r.rows(), r.cols());
    const cmat ir = eye - r;
    if (cond_estimate(ir) > 1e12)
        throw unit_eigenvalue_error(
            "UnitEigenvalue: I - R is numerically singular, the Cayley transform is undefined");
    return Eigen::PartialPivLU<cmat>(ir).solve(cmat(eye + r));
}

cmat inverse_cayley(const cmat& x) {
    if (x.rows() != x.cols()) throw dimension_error("inverse_cayley: square matrix required");
    const cmat eye = cmat::Identity(x.rows(), x.cols());
    const cmat xp = x + eye;
    if (cond_estimate(xp) > 1e12)
        throw cayley_singular_error(
            "CayleySingular: X + I is numerically singular; choose different free detunings");
    return cmat(x - eye) * Eigen::PartialPivLU<cmat>(xp).inverse();
}

}  // namespace lqsynth
