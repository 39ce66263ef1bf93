#include <doctest.h>

#include "lqsynth/io.hpp"

#include "support/fixtures.hpp"
#include "support/test_utils.hpp"

#include <filesystem>
#include <limits>

using namespace lqsynth;
using namespace lqsynth::testing;

TEST_CASE("matrix json round trip preserves entries") {
    auto rng = make_rng(601);
    const cmat a = randn_cmat(rng, 3, 2);
    const cmat back = matrix_from_json(matrix_to_json(a), "a");
    CHECK(max_abs(back - a) == 0.0);

    CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2]]"), "x"), parse_error);
    CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,2]],[[1,2],[3,4]]]"), "x"), parse_error);
    CHECK_THROWS_AS(matrix_from_json(json::parse("{}"), "x"), parse_error);
}

TEST_CASE("system json round trip is stable for both kinds") {
    const system_variant p = fixtures::reference_passive();
    const json jp = system_to_json(p);
    const system_variant p2 = system_from_json(jp);
    CHECK(jp.dump(2) == system_to_json(p2).dump(2));
    CHECK(std::get<passive_lqss>(p2).n_modes == 3);

    const system_variant g = fixtures::reference_general();
    const json jg = system_to_json(g);
    const system_variant g2 = system_from_json(jg);
    CHECK(jg.dump(2) == system_to_json(g2).dump(2));
    CHECK(max_abs(std::get<general_lqss>(g2).n.full() -
                  fixtures::reference_general().n.full()) == 0.0);
}

TEST_CASE("system_from_json rejects malformed input") {
    json j = system_to_json(system_variant{fixtures::reference_passive()});
    j.erase("N");
    CHECK_THROWS_AS(system_from_json(j), parse_error);

    j = system_to_json(system_variant{fixtures::reference_passive()});
    j["format_version"] = 2;
    CHECK_THROWS_AS(system_from_json(j), parse_error);

    j = system_to_json(system_variant{fixtures::reference_passive()});
    j["mode"] = "hybrid";
    CHECK_THROWS_AS(system_from_json(j), parse_error);

    j = system_to_json(system_variant{fixtures::reference_passive()});
    j["n_modes"] = 2;  // shape mismatch against the stored 3x3 blocks
    CHECK_THROWS_AS(system_from_json(j), parse_error);
}

TEST_CASE("system files save and load through the filesystem") {
    const auto path = std::filesystem::temp_directory_path() / "lqsynth_io_system.json";
    save_system(fixtures::reference_general(), path);
    const system_variant back = load_system(path);
    CHECK(std::holds_alternative<general_lqss>(back));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_system(path), parse_error);
}

TEST_CASE("cascade netlists round trip byte-identically") {
    const passive_lqss sys = fixtures::reference_passive();
    netlist_file nf;
    nf.realization = cascade_passive(sys);
    nf.verification = verify_equivalence(embed_passive(sys),
                                         assemble_cascade(std::get<cascade_realization>(nf.realization)));
    const json j = netlist_to_json(nf);
    const netlist_file back = netlist_from_json(j);
    CHECK(j.dump(2) == netlist_to_json(back).dump(2));
    CHECK(std::get<cascade_realization>(back.realization).cavities.size() == 3);
    CHECK(back.verification.has_value());
    CHECK(back.verification->pass);
}

TEST_CASE("feedback netlists with static elements round trip byte-identically") {
    const general_lqss sys = fixtures::reference_general();
    netlist_file nf;
    nf.realization = feedback_general(sys);
    const auto& real = std::get<feedback_realization>(nf.realization);
    nf.static_elements.emplace("pre_network", decompose_static(real.pre_network, false));
    nf.static_elements.emplace("post_network", decompose_static(real.post_network, false));
    nf.static_elements.emplace("feedback_gain", decompose_static(real.feedback_gain, false));
    nf.verification = verify_equivalence(sys, assemble_feedback(real));

    const json j = netlist_to_json(nf);
    const netlist_file back = netlist_from_json(j);
    CHECK(j.dump(2) == netlist_to_json(back).dump(2));
    CHECK(back.static_elements.size() == 3);
    const auto& fb = std::get<feedback_realization>(back.realization);
    CHECK(fb.audit.lambda_plus.size() == 1);
    CHECK(fb.cavities.size() == 2);
    REQUIRE(fb.cavities[0].port_lines.size() == fb.cavities[0].spec.ports.size());

    const auto path = std::filesystem::temp_directory_path() / "lqsynth_io_netlist.json";
    save_netlist(nf, path);
    const netlist_file loaded = load_netlist(path);
    CHECK(netlist_to_json(loaded).dump(2) == j.dump(2));
    std::filesystem::remove(path);
}

TEST_CASE("netlist_from_json rejects inconsistent structure") {
    const passive_lqss sys = fixtures::reference_passive();
    netlist_file nf;
    nf.realization = cascade_passive(sys);
    json j = netlist_to_json(nf);
    j["kind"] = "ladder";
    CHECK_THROWS_AS(netlist_from_json(j), parse_error);

    j = netlist_to_json(nf);
    j["cavities"].erase(0);
    CHECK_THROWS_AS(netlist_from_json(j), parse_error);

    j = netlist_to_json(nf);
    j["eigen_order"] = json::array();
    CHECK_THROWS_AS(netlist_from_json(j), parse_error);
}

TEST_CASE("reports serialize non-finite residuals as null") {
    equivalence_report rep;
    rep.tolerance = 1e-6;
    rep.pass = false;
    rep.structural_checks.push_back(
        {"port_count", std::numeric_limits<double>::infinity(), false});
    const json j = report_to_json(rep);
    CHECK(j["structural_checks"][0]["residual"].is_null());
    const equivalence_report back = report_from_json(j);
    CHECK(std::isinf(back.structural_checks[0].residual));
    CHECK(j.dump(2) == report_to_json(back).dump(2));
}

TEST_CASE("static decompositions round trip with factors") {
    auto rng = make_rng(607);
    const doubled_matrix r = random_bogoliubov(rng, 2);
    const static_decomposition dec = decompose_static(r.full(), false);
    const json j = decomposition_to_json(dec);
    const static_decomposition back = decomposition_from_json(j);
    CHECK(j.dump(2) == decomposition_to_json(back).dump(2));
    CHECK(max_abs(remultiply(back) - remultiply(dec)) == 0.0);
}
