#include "lqsynth/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace lqsynth {

static json complex_to_json(cplx z) {
    return json::array({z.real(), z.imag()});
}

static cplx complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw parse_error(field + ": expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const cmat& a) {
    json rows = json::array();
    for (index_t i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (index_t j2 = 0; j2 < a.cols(); ++j2) row.push_back(complex_to_json(a(i, j2)));
        rows.push_back(std::move(row));
    }
    return rows;
}

cmat matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw parse_error(field + ": expected an array of rows");
    const index_t rows = static_cast<index_t>(j.size());
    index_t cols = 0;
    if (rows > 0) {
        if (!j[0].is_array()) throw parse_error(field + ": expected rows to be arrays");
        cols = static_cast<index_t>(j[0].size());
    }
    cmat out(rows, cols);
    for (index_t i = 0; i < rows; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<index_t>(row.size()) != cols)
            throw parse_error(field + ": rows have inconsistent lengths");
        for (index_t k = 0; k < cols; ++k)
            out(i, k) = complex_from_json(row[static_cast<size_t>(k)], field);
    }
    return out;
}

static const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw parse_error(std::string("missing field: ") + key);
    return j.at(key);
}

static double need_num(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number()) throw parse_error(std::string(key) + ": expected a number");
    return v.get<double>();
}

static index_t need_int(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer()) throw parse_error(std::string(key) + ": expected an integer");
    return v.get<index_t>();
}

static std::string need_str(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_string()) throw parse_error(std::string(key) + ": expected a string");
    return v.get<std::string>();
}

static bool need_bool(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_boolean()) throw parse_error(std::string(key) + ": expected a boolean");
    return v.get<bool>();
}

static cmat matrix_sized(const json& j, const char* key, index_t rows, index_t cols) {
    cmat m = matrix_from_json(need(j, key), key);
    if (m.rows() == 0 && rows == 0) return cmat(0, cols);
    if (m.rows() != rows || m.cols() != cols)
        throw parse_error(std::string(key) + ": expected a " + std::to_string(rows) + " x " +
                          std::to_string(cols) + " matrix");
    return m;
}

static std::vector<double> real_vector_from_json(const json& j, const char* key) {
    if (!j.is_array()) throw parse_error(std::string(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& v : j) {
        if (!v.is_number()) throw parse_error(std::string(key) + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

static json real_vector_to_json(const std::vector<double>& v) {
    return json(v);
}

// ---------------------------------------------------------------------------
// Systems

json system_to_json(const system_variant& sys) {
    json j;
    j["format_version"] = 1;
    if (std::holds_alternative<passive_lqss>(sys)) {
        const passive_lqss& p = std::get<passive_lqss>(sys);
        j["mode"] = "passive";
        j["n_modes"] = p.n_modes;
        j["n_io"] = p.n_io;
        j["S"] = matrix_to_json(p.s);
        j["N"] = matrix_to_json(p.n);
        j["M"] = matrix_to_json(p.m);
    } else {
        const general_lqss& g = std::get<general_lqss>(sys);
        j["mode"] = "general";
        j["n_modes"] = g.n_modes;
        j["n_io"] = g.n_io;
        j["S1"] = matrix_to_json(g.s.block1());
        j["S2"] = matrix_to_json(g.s.block2());
        j["N1"] = matrix_to_json(g.n.block1());
        j["N2"] = matrix_to_json(g.n.block2());
        j["M1"] = matrix_to_json(g.m.block1());
        j["M2"] = matrix_to_json(g.m.block2());
    }
    return j;
}

system_variant system_from_json(const json& j) {
    if (need_int(j, "format_version") != 1)
        throw parse_error("format_version: only version 1 is supported");
    const std::string mode = need_str(j, "mode");
    const index_t n = need_int(j, "n_modes");
    const index_t m = need_int(j, "n_io");
    if (n < 0 || m < 0) throw parse_error("n_modes/n_io: must be nonnegative");
    if (mode == "passive") {
        passive_lqss p;
        p.n_modes = n;
        p.n_io = m;
        p.s = matrix_sized(j, "S", m, m);
        p.n = matrix_sized(j, "N", m, n);
        p.m = matrix_sized(j, "M", n, n);
        return p;
    }
    if (mode == "general") {
        general_lqss g;
        g.n_modes = n;
        g.n_io = m;
        g.s = doubled_matrix(matrix_sized(j, "S1", m, m), matrix_sized(j, "S2", m, m));
        g.n = doubled_matrix(matrix_sized(j, "N1", m, n), matrix_sized(j, "N2", m, n));
        g.m = doubled_matrix(matrix_sized(j, "M1", n, n), matrix_sized(j, "M2", n, n));
        return g;
    }
    throw parse_error("mode: expected \"passive\" or \"general\"");
}

static json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw parse_error("invalid JSON in file: " + path.string());
    return j;
}

system_variant load_system(const std::filesystem::path& path) {
    return system_from_json(parse_file(path));
}

void save_system(const system_variant& sys, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path.string());
    out << system_to_json(sys).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Reports

static json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json(nullptr);
}

static double num_or_infinity(const json& j, const char* key) {
    const json& v = need(j, key);
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw parse_error(std::string(key) + ": expected a number or null");
    return v.get<double>();
}

json report_to_json(const equivalence_report& rep) {
    json j;
    json freqs = json::array();
    for (cplx s : rep.frequencies) freqs.push_back(complex_to_json(s));
    j["frequencies"] = std::move(freqs);
    j["per_frequency_errors"] = real_vector_to_json(rep.per_frequency_errors);
    j["max_rel_error"] = rep.max_rel_error;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    json checks = json::array();
    for (const structural_check& c : rep.structural_checks) {
        json cj;
        cj["name"] = c.name;
        cj["residual"] = finite_or_null(c.residual);
        cj["pass"] = c.pass;
        checks.push_back(std::move(cj));
    }
    j["structural_checks"] = std::move(checks);
    return j;
}

equivalence_report report_from_json(const json& j) {
    equivalence_report rep;
    const json& freqs = need(j, "frequencies");
    if (!freqs.is_array()) throw parse_error("frequencies: expected an array");
    for (const json& f : freqs) rep.frequencies.push_back(complex_from_json(f, "frequencies"));
    rep.per_frequency_errors = real_vector_from_json(need(j, "per_frequency_errors"),
                                                     "per_frequency_errors");
    rep.max_rel_error = need_num(j, "max_rel_error");
    rep.tolerance = need_num(j, "tolerance");
    rep.pass = need_bool(j, "pass");
    const json& checks = need(j, "structural_checks");
    if (!checks.is_array()) throw parse_error("structural_checks: expected an array");
    for (const json& cj : checks) {
        structural_check c;
        c.name = need_str(cj, "name");
        c.residual = num_or_infinity(cj, "residual");
        c.pass = need_bool(cj, "pass");
        rep.structural_checks.push_back(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Netlists

static json cavity_to_json(const cavity_spec& c) {
    json j;
    j["detuning"] = c.detuning;
    json ports = json::array();
    for (const cavity_port& p : c.ports) {
        json pj;
        pj["kappa"] = p.kappa;
        pj["phi"] = p.phi;
        pj["g"] = p.g;
        pj["theta"] = p.theta;
        ports.push_back(std::move(pj));
    }
    j["ports"] = std::move(ports);
    j["interconnect_port"] = c.interconnect_port;
    return j;
}

static cavity_spec cavity_from_json(const json& j) {
    cavity_spec c;
    c.detuning = need_num(j, "detuning");
    const json& ports = need(j, "ports");
    if (!ports.is_array()) throw parse_error("ports: expected an array");
    for (const json& pj : ports) {
        cavity_port p;
        p.kappa = need_num(pj, "kappa");
        p.phi = need_num(pj, "phi");
        p.g = need_num(pj, "g");
        p.theta = need_num(pj, "theta");
        c.ports.push_back(p);
    }
    c.interconnect_port = static_cast<int>(need_int(j, "interconnect_port"));
    if (c.interconnect_port < -1 || c.interconnect_port >= static_cast<int>(c.ports.size()))
        throw parse_error("interconnect_port: index out of range");
    return c;
}

static json element_to_json(const static_element& e) {
    json j;
    switch (e.kind) {
        case static_element::op::phase_shift:
            j["op"] = "phase_shift";
            j["channel"] = e.channel;
            j["theta"] = e.theta;
            break;
        case static_element::op::beam_split:
            j["op"] = "beam_split";
            j["channel"] = e.channel;
            j["channel2"] = e.channel2;
            j["theta"] = e.theta;
            j["phi"] = e.phi;
            j["psi"] = e.psi;
            j["zeta"] = e.zeta;
            break;
        case static_element::op::squeeze:
            j["op"] = "squeeze";
            j["channel"] = e.channel;
            j["x"] = e.x;
            j["phi"] = e.phi;
            j["psi"] = e.psi;
            break;
    }
    return j;
}

static static_element element_from_json(const json& j) {
    static_element e;
    const std::string op = need_str(j, "op");
    e.channel = need_int(j, "channel");
    if (op == "phase_shift") {
        e.kind = static_element::op::phase_shift;
        e.theta = need_num(j, "theta");
    } else if (op == "beam_split") {
        e.kind = static_element::op::beam_split;
        e.channel2 = need_int(j, "channel2");
        e.theta = need_num(j, "theta");
        e.phi = need_num(j, "phi");
        e.psi = need_num(j, "psi");
        e.zeta = need_num(j, "zeta");
    } else if (op == "squeeze") {
        e.kind = static_element::op::squeeze;
        e.x = need_num(j, "x");
        e.phi = need_num(j, "phi");
        e.psi = need_num(j, "psi");
    } else {
        throw parse_error("op: unknown static element kind \"" + op + "\"");
    }
    return e;
}

json decomposition_to_json(const static_decomposition& d) {
    json j;
    j["kind"] = d.passive ? "passive" : "general";
    j["n_channels"] = d.n_channels;
    json els = json::array();
    for (const static_element& e : d.elements) els.push_back(element_to_json(e));
    j["elements"] = std::move(els);
    if (!d.passive) {
        json f;
        f["u1"] = matrix_to_json(d.u1);
        f["u2"] = matrix_to_json(d.u2);
        std::vector<double> xv(d.x.data(), d.x.data() + d.x.size());
        f["x"] = real_vector_to_json(xv);
        j["factors"] = std::move(f);
    }
    return j;
}

static_decomposition decomposition_from_json(const json& j) {
    static_decomposition d;
    const std::string kind = need_str(j, "kind");
    if (kind != "passive" && kind != "general")
        throw parse_error("kind: expected \"passive\" or \"general\"");
    d.passive = kind == "passive";
    d.n_channels = need_int(j, "n_channels");
    const json& els = need(j, "elements");
    if (!els.is_array()) throw parse_error("elements: expected an array");
    for (const json& ej : els) d.elements.push_back(element_from_json(ej));
    if (!d.passive) {
        const json& f = need(j, "factors");
        d.u1 = matrix_sized(f, "u1", d.n_channels, d.n_channels);
        d.u2 = matrix_sized(f, "u2", d.n_channels, d.n_channels);
        const std::vector<double> xv = real_vector_from_json(need(f, "x"), "x");
        d.x = Eigen::Map<const rvec>(xv.data(), static_cast<index_t>(xv.size()));
    }
    return d;
}

static json complex_vector_to_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (cplx z : v) out.push_back(complex_to_json(z));
    return out;
}

static std::vector<cplx> complex_vector_from_json(const json& j, const char* key) {
    if (!j.is_array()) throw parse_error(std::string(key) + ": expected an array");
    std::vector<cplx> out;
    for (const json& z : j) out.push_back(complex_from_json(z, key));
    return out;
}

json netlist_to_json(const netlist_file& nf) {
    json j;
    j["format_version"] = nf.format_version;
    if (std::holds_alternative<cascade_realization>(nf.realization)) {
        const auto& c = std::get<cascade_realization>(nf.realization);
        const index_t m = c.passive ? c.pre_network.rows() : c.pre_network.rows() / 2;
        j["kind"] = "cascade";
        j["mode"] = c.passive ? "passive" : "general";
        j["n_io"] = m;
        j["n_modes"] = static_cast<index_t>(c.cavities.size());
        j["pre_network"] = matrix_to_json(c.pre_network);
        json tr;
        tr["block1"] = matrix_to_json(c.transform.block1());
        tr["block2"] = matrix_to_json(c.transform.block2());
        j["transform"] = std::move(tr);
        j["eigen_order"] = complex_vector_to_json(c.eigen_order);
        json cavs = json::array();
        for (const cavity_spec& cav : c.cavities) cavs.push_back(cavity_to_json(cav));
        j["cavities"] = std::move(cavs);
    } else {
        const auto& f = std::get<feedback_realization>(nf.realization);
        const index_t m = f.passive ? f.pre_network.rows() : f.pre_network.rows() / 2;
        j["kind"] = "feedback";
        j["mode"] = f.passive ? "passive" : "general";
        j["n_io"] = m;
        j["n_modes"] = static_cast<index_t>(f.cavities.size());
        j["pre_network"] = matrix_to_json(f.pre_network);
        j["post_network"] = matrix_to_json(f.post_network);
        j["feedback_gain"] = matrix_to_json(f.feedback_gain);
        json cavs = json::array();
        for (const placed_cavity& pc : f.cavities) {
            json cj = cavity_to_json(pc.spec);
            cj["port_lines"] = json(pc.port_lines);
            cavs.push_back(std::move(cj));
        }
        j["cavities"] = std::move(cavs);
        json pairs = json::array();
        for (const pair_block& pb : f.pairs) {
            json pj;
            pj["cavity_a"] = pb.cavity_a;
            pj["cavity_b"] = pb.cavity_b;
            pj["line_a"] = pb.line_a;
            pj["line_b"] = pb.line_b;
            pj["mid"] = matrix_to_json(pb.mid);
            pj["compensator"] = matrix_to_json(pb.compensator);
            pairs.push_back(std::move(pj));
        }
        j["pair_blocks"] = std::move(pairs);
        json fp;
        fp["detunings"] = real_vector_to_json(f.detunings);
        fp["interconnect_couplings"] = real_vector_to_json(f.interconnect_couplings);
        j["free_params"] = std::move(fp);
        json au;
        au["lambda_plus"] = real_vector_to_json(f.audit.lambda_plus);
        au["lambda_minus"] = real_vector_to_json(f.audit.lambda_minus);
        au["lambda_complex"] = complex_vector_to_json(f.audit.lambda_complex);
        au["alphas"] = real_vector_to_json(f.audit.alphas);
        au["betas"] = real_vector_to_json(f.audit.betas);
        au["zero_modes"] = f.audit.zero_modes;
        au["rank"] = f.audit.rank;
        j["audit"] = std::move(au);
    }
    if (!nf.static_elements.empty()) {
        json se;
        for (const auto& [role, dec] : nf.static_elements) se[role] = decomposition_to_json(dec);
        j["static_elements"] = std::move(se);
    }
    if (nf.verification.has_value()) j["verification"] = report_to_json(*nf.verification);
    return j;
}

netlist_file netlist_from_json(const json& j) {
    netlist_file nf;
    nf.format_version = static_cast<int>(need_int(j, "format_version"));
    if (nf.format_version != 1) throw parse_error("format_version: only version 1 is supported");
    const std::string kind = need_str(j, "kind");
    const std::string mode = need_str(j, "mode");
    if (mode != "passive" && mode != "general")
        throw parse_error("mode: expected \"passive\" or \"general\"");
    const bool passive = mode == "passive";
    const index_t m = need_int(j, "n_io");
    const index_t n = need_int(j, "n_modes");
    if (m < 0 || n < 0) throw parse_error("n_io/n_modes: must be nonnegative");
    const index_t sdim = passive ? m : 2 * m;

    if (kind == "cascade") {
        cascade_realization c;
        c.passive = passive;
        c.pre_network = matrix_sized(j, "pre_network", sdim, sdim);
        const json& tr = need(j, "transform");
        c.transform = doubled_matrix(matrix_sized(tr, "block1", n, n),
                                     matrix_sized(tr, "block2", n, n));
        c.eigen_order = complex_vector_from_json(need(j, "eigen_order"), "eigen_order");
        if (static_cast<index_t>(c.eigen_order.size()) != n)
            throw parse_error("eigen_order: expected one entry per mode");
        const json& cavs = need(j, "cavities");
        if (!cavs.is_array() || static_cast<index_t>(cavs.size()) != n)
            throw parse_error("cavities: expected one entry per mode");
        for (const json& cj : cavs) {
            cavity_spec cs = cavity_from_json(cj);
            if (static_cast<index_t>(cs.ports.size()) != m)
                throw parse_error("cavities: each cascade cavity needs one port per line");
            c.cavities.push_back(std::move(cs));
        }
        nf.realization = std::move(c);
    } else if (kind == "feedback") {
        feedback_realization f;
        f.passive = passive;
        f.pre_network = matrix_sized(j, "pre_network", sdim, sdim);
        f.post_network = matrix_sized(j, "post_network", sdim, sdim);
        f.feedback_gain = matrix_sized(j, "feedback_gain", passive ? n : 2 * n, passive ? n : 2 * n);
        const json& cavs = need(j, "cavities");
        if (!cavs.is_array() || static_cast<index_t>(cavs.size()) != n)
            throw parse_error("cavities: expected one entry per mode");
        for (const json& cj : cavs) {
            placed_cavity pc;
            pc.spec = cavity_from_json(cj);
            const json& pl = need(cj, "port_lines");
            if (!pl.is_array() || pl.size() != pc.spec.ports.size())
                throw parse_error("port_lines: expected one line per port");
            for (const json& v : pl) {
                if (!v.is_number_integer()) throw parse_error("port_lines: expected integers");
                pc.port_lines.push_back(v.get<index_t>());
            }
            f.cavities.push_back(std::move(pc));
        }
        const json& pairs = need(j, "pair_blocks");
        if (!pairs.is_array()) throw parse_error("pair_blocks: expected an array");
        for (const json& pj : pairs) {
            pair_block pb;
            pb.cavity_a = need_int(pj, "cavity_a");
            pb.cavity_b = need_int(pj, "cavity_b");
            pb.line_a = need_int(pj, "line_a");
            pb.line_b = need_int(pj, "line_b");
            pb.mid = matrix_sized(pj, "mid", 2, 2);
            pb.compensator = matrix_sized(pj, "compensator", 2, 2);
            f.pairs.push_back(std::move(pb));
        }
        const json& fp = need(j, "free_params");
        f.detunings = real_vector_from_json(need(fp, "detunings"), "detunings");
        f.interconnect_couplings =
            real_vector_from_json(need(fp, "interconnect_couplings"), "interconnect_couplings");
        const json& au = need(j, "audit");
        f.audit.lambda_plus = real_vector_from_json(need(au, "lambda_plus"), "lambda_plus");
        f.audit.lambda_minus = real_vector_from_json(need(au, "lambda_minus"), "lambda_minus");
        f.audit.lambda_complex =
            complex_vector_from_json(need(au, "lambda_complex"), "lambda_complex");
        f.audit.alphas = real_vector_from_json(need(au, "alphas"), "alphas");
        f.audit.betas = real_vector_from_json(need(au, "betas"), "betas");
        f.audit.zero_modes = need_int(au, "zero_modes");
        f.audit.rank = need_int(au, "rank");
        nf.realization = std::move(f);
    } else {
        throw parse_error("kind: expected \"cascade\" or \"feedback\"");
    }

    if (j.contains("static_elements")) {
        const json& se = j.at("static_elements");
        if (!se.is_object()) throw parse_error("static_elements: expected an object");
        for (const auto& [role, dj] : se.items())
            nf.static_elements.emplace(role, decomposition_from_json(dj));
    }
    if (j.contains("verification")) nf.verification = report_from_json(j.at("verification"));
    return nf;
}

netlist_file load_netlist(const std::filesystem::path& path) {
    return netlist_from_json(parse_file(path));
}

void save_netlist(const netlist_file& nf, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path.string());
    out << netlist_to_json(nf).dump(2) << '\n';
}

}  // namespace lqsynth
