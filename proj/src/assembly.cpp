#include "lqsynth/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lqsynth {

std::vector<cplx> sample_points(const frequency_grid& grid) {
    if (grid.count < 1 || grid.omega_min <= 0.0 || grid.omega_max < grid.omega_min)
        throw parameter_error(
            "frequency grid: need 0 < omega_min <= omega_max and at least one point");
    std::vector<cplx> pts;
    if (grid.include_zero) pts.push_back(0.0);
    if (grid.count == 1) {
        pts.push_back(ci * grid.omega_min);
    } else {
        for (int k = 0; k < grid.count; ++k) {
            const double w = grid.omega_min *
                             std::pow(grid.omega_max / grid.omega_min,
                                      static_cast<double>(k) / (grid.count - 1));
            pts.push_back(ci * w);
        }
    }
    return pts;
}

static doubled_matrix static_block(const cmat& full_or_plain, bool passive, const char* what) {
    if (passive) {
        if (full_or_plain.rows() != full_or_plain.cols())
            throw structure_error(std::string(what) + ": static block must be square");
        return {full_or_plain, cmat::Zero(full_or_plain.rows(), full_or_plain.cols())};
    }
    return doubled_matrix::from_full(full_or_plain, 1e-6);
}

general_lqss assemble_cascade(const cascade_realization& r) {
    const doubled_matrix s0 = static_block(r.pre_network, r.passive, "assemble_cascade");
    const index_t m = s0.half_rows();
    general_lqss chain = general_lqss::static_network(s0);
    for (const cavity_spec& c : r.cavities) {
        if (static_cast<index_t>(c.ports.size()) != m)
            throw structure_error(
                "assemble_cascade: every cavity must have one port per optical line");
        chain = series(cavity_system(c), chain);
    }
    return chain;
}

// A cavity widened onto `total` lines: its ports land on the listed lines, every other
// line passes through untouched (zero coupling).
static general_lqss lift_cavity(const placed_cavity& pc, index_t total) {
    cavity_spec wide;
    wide.detuning = pc.spec.detuning;
    wide.ports.assign(static_cast<size_t>(total), cavity_port{});
    for (size_t p = 0; p < pc.spec.ports.size(); ++p)
        wide.ports[static_cast<size_t>(pc.port_lines[p])] = pc.spec.ports[p];
    return cavity_system(wide);
}

static general_lqss lift_static2(const cmat& u, index_t la, index_t lb, index_t total) {
    if (u.rows() != 2 || u.cols() != 2)
        throw structure_error("assemble_feedback: pair couplers must be 2 x 2");
    cmat s1 = cmat::Identity(total, total);
    s1(la, la) = u(0, 0);
    s1(la, lb) = u(0, 1);
    s1(lb, la) = u(1, 0);
    s1(lb, lb) = u(1, 1);
    return general_lqss::static_network(doubled_matrix(std::move(s1), cmat::Zero(total, total)));
}

general_lqss assemble_feedback(const feedback_realization& r) {
    const doubled_matrix pre = static_block(r.pre_network, r.passive, "assemble_feedback");
    const doubled_matrix post = static_block(r.post_network, r.passive, "assemble_feedback");
    const index_t m = pre.half_rows();
    const index_t n = static_cast<index_t>(r.cavities.size());
    const index_t total = m + n;

    std::vector<bool> loop_line_used(static_cast<size_t>(n), false);
    for (const placed_cavity& pc : r.cavities) {
        if (pc.port_lines.size() != pc.spec.ports.size())
            throw structure_error("assemble_feedback: port_lines must list one line per port");
        if (pc.spec.interconnect_port < 0 ||
            pc.spec.interconnect_port >= static_cast<int>(pc.spec.ports.size()))
            throw structure_error("assemble_feedback: every cavity needs an interconnect port");
        for (size_t p = 0; p < pc.port_lines.size(); ++p) {
            const index_t line = pc.port_lines[p];
            const bool is_loop = line >= m;
            if (line < 0 || line >= total)
                throw structure_error("assemble_feedback: port line out of range");
            if (static_cast<int>(p) == pc.spec.interconnect_port) {
                if (!is_loop)
                    throw structure_error(
                        "assemble_feedback: interconnect port placed on a system line");
                if (loop_line_used[static_cast<size_t>(line - m)])
                    throw structure_error("assemble_feedback: loop line used twice");
                loop_line_used[static_cast<size_t>(line - m)] = true;
            } else if (is_loop) {
                throw structure_error("assemble_feedback: non-interconnect port on a loop line");
            }
        }
    }
    for (bool used : loop_line_used)
        if (!used) throw structure_error("assemble_feedback: uncovered loop line");

    std::set<index_t> pair_b_members;
    std::vector<index_t> pair_of_a(static_cast<size_t>(n), -1);
    for (size_t pi = 0; pi < r.pairs.size(); ++pi) {
        const pair_block& pb = r.pairs[pi];
        if (pb.cavity_a < 0 || pb.cavity_a >= n || pb.cavity_b < 0 || pb.cavity_b >= n)
            throw structure_error("assemble_feedback: pair block cavity index out of range");
        pair_of_a[static_cast<size_t>(pb.cavity_a)] = static_cast<index_t>(pi);
        pair_b_members.insert(pb.cavity_b);
    }

    general_lqss bank = general_lqss::static_network(doubled_matrix::identity(total));
    for (index_t i = 0; i < n; ++i) {
        if (pair_b_members.count(i) > 0) continue;  // emitted together with its partner
        const index_t pi = pair_of_a[static_cast<size_t>(i)];
        if (pi >= 0) {
            const pair_block& pb = r.pairs[static_cast<size_t>(pi)];
            bank = series(lift_static2(pb.compensator, pb.line_a, pb.line_b, total), bank);
            bank = series(lift_cavity(r.cavities[static_cast<size_t>(pb.cavity_a)], total), bank);
            bank = series(lift_static2(pb.mid, pb.line_a, pb.line_b, total), bank);
            bank = series(lift_cavity(r.cavities[static_cast<size_t>(pb.cavity_b)], total), bank);
        } else {
            bank = series(lift_cavity(r.cavities[static_cast<size_t>(i)], total), bank);
        }
    }

    const doubled_matrix rg = static_block(r.feedback_gain, r.passive, "assemble_feedback");
    if (rg.half_rows() != n)
        throw structure_error("assemble_feedback: gain size must match the cavity count");
    std::vector<index_t> loop_lines;
    for (index_t l = m; l < total; ++l) loop_lines.push_back(l);
    const general_lqss closed = close_feedback(bank, loop_lines, rg);

    return series(general_lqss::static_network(post),
                  series(closed, general_lqss::static_network(pre)));
}

static cplx jitter(cplx s, const frequency_grid& grid) {
    if (std::abs(s) == 0.0) return ci * (1e-3 * grid.omega_min);
    return s * (1.0 + 1e-3);
}

equivalence_report verify_equivalence(const general_lqss& source, const general_lqss& realized,
                                      const frequency_grid& grid, double tol) {
    equivalence_report rep;
    rep.tolerance = tol;
    auto add_check = [&rep](const std::string& name, double residual, bool pass) {
        rep.structural_checks.push_back({name, residual, pass});
    };

    const bool ports_match = source.n_io == realized.n_io;
    add_check("port_count", std::abs(static_cast<double>(source.n_io - realized.n_io)),
              ports_match);
    auto worst_issue = [](const validation_report& vr) {
        double w = 0.0;
        for (const validation_issue& is : vr.issues) w = std::max(w, is.residual);
        return w;
    };
    const validation_report vs = validate(source);
    add_check("source_valid", worst_issue(vs), vs.ok());
    const validation_report vr = validate(realized);
    add_check("realized_valid", worst_issue(vr), vr.ok());

    if (!ports_match) {
        rep.pass = false;
        return rep;
    }

    const cmat eye = cmat::Identity(2 * realized.n_io, 2 * realized.n_io);
    double worst = 0.0, worst_unit = 0.0;
    for (const cplx s0 : sample_points(grid)) {
        cplx s = s0;
        cmat ga, gb;
        int tries = 0;
        for (;;) {
            try {
                ga = transfer_function(source, s);
                gb = transfer_function(realized, s);
                break;
            } catch (const pole_error&) {
                if (++tries > 3) {
                    std::ostringstream os;
                    os << "sampling: persistent pole near s = " << s0.real() << " + "
                       << s0.imag() << "i";
                    throw sampling_error(os.str());
                }
                s = jitter(s, grid);
            }
        }
        const double scale = std::max(1.0, max_abs(ga));
        const double err = max_abs(ga - gb) / scale;
        rep.frequencies.push_back(s);
        rep.per_frequency_errors.push_back(err);
        worst = std::max(worst, err);
        worst_unit = std::max(worst_unit, max_abs(flat_adjoint(gb) * gb - eye));
    }
    rep.max_rel_error = worst;
    add_check("realized_axis_j_unitarity", worst_unit, worst_unit <= 1e-8);

    bool all_checks = true;
    for (const structural_check& c : rep.structural_checks) all_checks = all_checks && c.pass;
    rep.pass = all_checks && worst <= tol;
    return rep;
}

}  // namespace lqsynth
