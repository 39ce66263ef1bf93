#include "lqsynth/cli.hpp"

#include "lqsynth/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace lqsynth {

namespace {

struct synth_options {
    std::string input;
    std::string method = "cascade";
    std::string ordering = "descending";
    std::string targets;
    std::vector<double> detunings;
    std::vector<double> couplings;
    double tol = 1e-6;
    double freq_min = 1e-2;
    double freq_max = 1e3;
    int freq_count = 20;
    std::string output;
    std::string report_path;
    bool decompose = false;
};

struct verify_options {
    std::string system_path;
    std::string netlist_path;
    double tol = 1e-6;
    double freq_min = 1e-2;
    double freq_max = 1e3;
    int freq_count = 20;
    std::string report_path;
};

struct transfer_options {
    std::string input;
    std::vector<std::string> points;
    double freq_min = 1e-2;
    double freq_max = 1e3;
    int freq_count = 20;
    std::string output;
};

struct decompose_options {
    std::string input;
    std::string output;
};

std::vector<cplx> parse_target_list(const std::string& text) {
    std::string cleaned;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ') cleaned.push_back(c);
    std::vector<cplx> out;
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw parse_error("targets: expected \"re,im\" pairs separated by ';'");
        try {
            out.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
        } catch (const std::exception&) {
            throw parse_error("targets: could not parse \"" + item + "\" as re,im");
        }
    }
    if (out.empty()) throw parse_error("targets: no points given");
    return out;
}

cplx parse_point(const std::string& text) {
    const size_t comma = text.find(',');
    try {
        if (comma == std::string::npos) return cplx(0.0, std::stod(text));
        return cplx(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw parse_error("point: could not parse \"" + text + "\" as re,im");
    }
}

eigen_ordering make_ordering(const synth_options& opt) {
    if (opt.ordering == "descending") return eigen_ordering::descending();
    if (opt.ordering == "ascending") return eigen_ordering::ascending();
    if (opt.ordering == "given") {
        if (opt.targets.empty())
            throw parse_error("--ordering given requires --targets \"re,im;re,im;...\"");
        return eigen_ordering::given(parse_target_list(opt.targets));
    }
    throw parse_error("--ordering: expected descending, ascending, or given");
}

frequency_grid make_grid(double fmin, double fmax, int count) {
    frequency_grid grid;
    grid.omega_min = fmin;
    grid.omega_max = fmax;
    grid.count = count;
    return grid;
}

int check_valid(const system_variant& sys, std::ostream& err) {
    validation_report rep = std::holds_alternative<passive_lqss>(sys)
                                ? validate(std::get<passive_lqss>(sys))
                                : validate(std::get<general_lqss>(sys));
    if (rep.ok()) return exit_ok;
    err << "input system failed validation:\n" << rep.to_string();
    return exit_validation;
}

general_lqss as_general(const system_variant& sys) {
    if (std::holds_alternative<general_lqss>(sys)) return std::get<general_lqss>(sys);
    return embed_passive(std::get<passive_lqss>(sys));
}

void attach_static_elements(netlist_file& nf) {
    if (std::holds_alternative<cascade_realization>(nf.realization)) {
        const auto& c = std::get<cascade_realization>(nf.realization);
        nf.static_elements.emplace("pre_network", decompose_static(c.pre_network, c.passive));
    } else {
        const auto& f = std::get<feedback_realization>(nf.realization);
        nf.static_elements.emplace("pre_network", decompose_static(f.pre_network, f.passive));
        nf.static_elements.emplace("post_network", decompose_static(f.post_network, f.passive));
        nf.static_elements.emplace("feedback_gain", decompose_static(f.feedback_gain, f.passive));
    }
}

void print_report(const equivalence_report& rep, std::ostream& out) {
    out << "verification: " << (rep.pass ? "PASS" : "FAIL")
        << "  (max relative error " << rep.max_rel_error << ", tolerance " << rep.tolerance
        << ", " << rep.frequencies.size() << " samples)\n";
    for (const structural_check& c : rep.structural_checks)
        out << "  " << (c.pass ? "ok " : "BAD") << "  " << c.name << "  residual " << c.residual
            << '\n';
}

void write_or_print(const json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << '\n';
        return;
    }
    std::ofstream file(path);
    if (!file) throw parse_error("cannot write file: " + path);
    file << j.dump(2) << '\n';
}

int run_synthesize(const synth_options& opt, std::ostream& out, std::ostream& err) {
    const system_variant sys = load_system(opt.input);
    if (int rc = check_valid(sys, err); rc != exit_ok) return rc;

    feedback_params params;
    params.detunings = opt.detunings;
    params.interconnect_couplings = opt.couplings;

    netlist_file nf;
    if (std::holds_alternative<passive_lqss>(sys)) {
        const passive_lqss& p = std::get<passive_lqss>(sys);
        if (opt.method == "cascade")
            nf.realization = cascade_passive(p, make_ordering(opt));
        else
            nf.realization = feedback_passive(p, params);
    } else {
        const general_lqss& g = std::get<general_lqss>(sys);
        if (opt.method == "cascade")
            nf.realization = cascade_general(g, make_ordering(opt));
        else
            nf.realization = feedback_general(g, params);
    }

    const general_lqss realized =
        std::holds_alternative<cascade_realization>(nf.realization)
            ? assemble_cascade(std::get<cascade_realization>(nf.realization))
            : assemble_feedback(std::get<feedback_realization>(nf.realization));
    const equivalence_report report = verify_equivalence(
        as_general(sys), realized, make_grid(opt.freq_min, opt.freq_max, opt.freq_count),
        opt.tol);
    nf.verification = report;
    if (opt.decompose) attach_static_elements(nf);

    if (!opt.output.empty()) {
        save_netlist(nf, opt.output);
        out << "netlist written to " << opt.output << '\n';
    } else {
        out << netlist_to_json(nf).dump(2) << '\n';
    }
    if (!opt.report_path.empty()) write_or_print(report_to_json(report), opt.report_path, out);
    print_report(report, out);
    if (!report.pass) {
        err << "realized network does not match the source system\n";
        return exit_verification;
    }
    return exit_ok;
}

int run_verify(const verify_options& opt, std::ostream& out, std::ostream& err) {
    const system_variant sys = load_system(opt.system_path);
    if (int rc = check_valid(sys, err); rc != exit_ok) return rc;
    const netlist_file nf = load_netlist(opt.netlist_path);
    const general_lqss realized =
        std::holds_alternative<cascade_realization>(nf.realization)
            ? assemble_cascade(std::get<cascade_realization>(nf.realization))
            : assemble_feedback(std::get<feedback_realization>(nf.realization));
    const equivalence_report report =
        verify_equivalence(as_general(sys), realized,
                           make_grid(opt.freq_min, opt.freq_max, opt.freq_count), opt.tol);
    if (!opt.report_path.empty()) write_or_print(report_to_json(report), opt.report_path, out);
    print_report(report, out);
    if (!report.pass) {
        err << "netlist does not match the source system\n";
        return exit_verification;
    }
    return exit_ok;
}

int run_transfer(const transfer_options& opt, std::ostream& out, std::ostream& err) {
    const system_variant sys = load_system(opt.input);
    if (int rc = check_valid(sys, err); rc != exit_ok) return rc;

    std::vector<cplx> points;
    if (!opt.points.empty())
        for (const std::string& p : opt.points) points.push_back(parse_point(p));
    else
        points = sample_points(make_grid(opt.freq_min, opt.freq_max, opt.freq_count));

    json rows = json::array();
    for (cplx s : points) {
        const cmat g = std::holds_alternative<passive_lqss>(sys)
                           ? transfer_function(std::get<passive_lqss>(sys), s)
                           : transfer_function(std::get<general_lqss>(sys), s);
        json row;
        row["s"] = json::array({s.real(), s.imag()});
        row["transfer"] = matrix_to_json(g);
        rows.push_back(std::move(row));
    }
    json j;
    j["points"] = std::move(rows);
    write_or_print(j, opt.output, out);
    return exit_ok;
}

int run_decompose(const decompose_options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    std::ifstream in(opt.input);
    if (!in) throw parse_error("cannot open file: " + opt.input);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw parse_error("invalid JSON in file: " + opt.input);
    if (!j.is_object() || !j.contains("mode"))
        throw parse_error("expected an object with a \"mode\" field");
    const std::string mode = j.at("mode").get<std::string>();
    cmat s;
    bool passive = false;
    if (mode == "passive") {
        passive = true;
        s = matrix_from_json(j.contains("matrix") ? j.at("matrix") : json(), "matrix");
    } else if (mode == "general") {
        if (j.contains("matrix")) {
            s = matrix_from_json(j.at("matrix"), "matrix");
        } else {
            const cmat b1 = matrix_from_json(j.contains("S1") ? j.at("S1") : json(), "S1");
            const cmat b2 = matrix_from_json(j.contains("S2") ? j.at("S2") : json(), "S2");
            s = doubled_matrix(b1, b2).full();
        }
    } else {
        throw parse_error("mode: expected \"passive\" or \"general\"");
    }
    const static_decomposition dec = decompose_static(s, passive);
    write_or_print(decomposition_to_json(dec), opt.output, out);
    return exit_ok;
}

void add_grid_options(CLI::App* cmd, double& fmin, double& fmax, int& count) {
    cmd->add_option("--freq-min", fmin, "Smallest sampled angular frequency");
    cmd->add_option("--freq-max", fmax, "Largest sampled angular frequency");
    cmd->add_option("--freq-count", count, "Number of log-spaced samples (zero is added)");
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthesis of linear quantum stochastic systems as optical networks"};
    app.require_subcommand(1);

    synth_options sopt;
    CLI::App* synth = app.add_subcommand("synthesize",
                                         "Synthesize a cavity network realizing a system");
    synth->add_option("input", sopt.input, "System JSON file")->required();
    synth->add_option("--method", sopt.method, "Network topology")
        ->check(CLI::IsMember({"cascade", "feedback"}));
    synth->add_option("--ordering", sopt.ordering, "Cascade eigenvalue ordering")
        ->check(CLI::IsMember({"descending", "ascending", "given"}));
    synth->add_option("--targets", sopt.targets,
                      "Eigenvalue targets \"re,im;re,im;...\" for --ordering given");
    synth->add_option("--detuning", sopt.detunings,
                      "Free cavity detunings for the feedback method");
    synth->add_option("--interconnect-coupling", sopt.couplings,
                      "Free interconnect coupling amplitudes for the feedback method");
    synth->add_option("--tol", sopt.tol, "Verification tolerance");
    add_grid_options(synth, sopt.freq_min, sopt.freq_max, sopt.freq_count);
    synth->add_option("--output,-o", sopt.output, "Netlist output path (default: stdout)");
    synth->add_option("--json-report", sopt.report_path, "Write the verification report here");
    synth->add_flag("--decompose-static", sopt.decompose,
                    "Also decompose static blocks into elementary devices");

    verify_options vopt;
    CLI::App* verify = app.add_subcommand("verify", "Re-verify a saved netlist against a system");
    verify->add_option("system", vopt.system_path, "System JSON file")->required();
    verify->add_option("netlist", vopt.netlist_path, "Netlist JSON file")->required();
    verify->add_option("--tol", vopt.tol, "Verification tolerance");
    add_grid_options(verify, vopt.freq_min, vopt.freq_max, vopt.freq_count);
    verify->add_option("--json-report", vopt.report_path, "Write the verification report here");

    transfer_options topt;
    CLI::App* transfer = app.add_subcommand("transfer", "Evaluate a system's transfer function");
    transfer->add_option("input", topt.input, "System JSON file")->required();
    transfer->add_option("--s", topt.points,
                         "Evaluation point \"re,im\" (repeatable; default: frequency grid)");
    add_grid_options(transfer, topt.freq_min, topt.freq_max, topt.freq_count);
    transfer->add_option("--output,-o", topt.output, "Output path (default: stdout)");

    decompose_options dopt;
    CLI::App* decompose = app.add_subcommand(
        "decompose-static", "Decompose a static network into elementary devices");
    decompose->add_option("input", dopt.input,
                          "JSON file {mode, matrix} or {mode, S1, S2}")->required();
    decompose->add_option("--output,-o", dopt.output, "Output path (default: stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("lqsynth");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (synth->parsed()) return run_synthesize(sopt, out, err);
        if (verify->parsed()) return run_verify(vopt, out, err);
        if (transfer->parsed()) return run_transfer(topt, out, err);
        if (decompose->parsed()) return run_decompose(dopt, out, err);
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const structure_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const parameter_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const dimension_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const synthesis_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_synthesis;
    }
    return exit_usage;
}

}  // namespace lqsynth
