#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "napde/config.hpp"
#include "napde/presets.hpp"
#include "napde/runner.hpp"

using namespace napde;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("parse_config_text: defaults from a minimal file") {
    const Config cfg = parse_config_text("[problem]\npreset = heat-dirichlet\n");
    CHECK(cfg.preset_name == "heat-dirichlet");
    CHECK(cfg.N == 100);
    CHECK(cfg.tau == doctest::Approx(1e-3));
    CHECK(cfg.T == doctest::Approx(1.0));
    CHECK(cfg.suite == Suite::Solve);
}

TEST_CASE("parse_config_text: rejections") {
    CHECK_THROWS_AS(parse_config_text("[problem]\nN = 0\n"), SemanticError);
    CHECK_THROWS_AS(parse_config_text("[problem]\nbogus = 1\n"), SemanticError);
    CHECK_THROWS_AS(parse_config_text("[nope]\n"), SemanticError);
    CHECK_THROWS_AS(parse_config_text("key = 1\n"), SemanticError); // outside sections
    CHECK_THROWS_AS(parse_config_text("[problem\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[problem]\njust text\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[problem]\nN = abc\n"), ParseError);
    try {
        parse_config_text("[problem]\n\nN = abc\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("parse/serialize round trip is identity") {
    const std::string text =
        "[run]\nsuite = converge\nseed = 7\nlevels = 5\n"
        "[problem]\npreset = heat-robin\nT = 0.5\nN = 24\nscheme = crank-nicolson\n"
        "tau = 0.005\n[coefficients]\nS = const 2\n";
    const Config a = parse_config_text(text);
    const Config b = parse_config_text(serialize_config(a));
    CHECK(b.suite == a.suite);
    CHECK(b.seed == a.seed);
    CHECK(b.levels == a.levels);
    CHECK(b.preset_name == a.preset_name);
    CHECK(b.T == a.T);
    CHECK(b.N == a.N);
    CHECK(b.scheme == a.scheme);
    CHECK(b.tau == a.tau);
    CHECK(b.coefficient_overrides == a.coefficient_overrides);
}

TEST_CASE("parse_field: expression grammar") {
    const MatrixField c = parse_field("const 1 2 3 4", 2, 2);
    CHECK(c(0.0, 0.0)(0, 1).real() == doctest::Approx(2.0));

    const MatrixField pt = parse_field("polyt 1 | 2", 1, 1); // 1 + 2t
    CHECK(pt(0.5, 0.0)(0, 0).real() == doctest::Approx(2.0));

    const MatrixField pz = parse_field("polyz 0 | 0 | 1", 1, 1); // zeta^2
    CHECK(pz(0.0, 0.5)(0, 0).real() == doctest::Approx(0.25));
    CHECK(pz.dz(0.0, 0.5)(0, 0).real() == doctest::Approx(1.0));

    // piecewise in t: 1 on [0, 0.5), 2 + (t - 0.5) on [0.5, 1]
    const MatrixField pw = parse_field("pwt 0 0.5 1 ; 1 ; 2 | 1", 1, 1);
    CHECK(pw(0.25, 0.0)(0, 0).real() == doctest::Approx(1.0));
    CHECK(pw(0.75, 0.0)(0, 0).real() == doctest::Approx(2.25));
    REQUIRE(pw.t_breakpoints.size() == 1);
    CHECK(pw.t_breakpoints[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(parse_field("const 1 2", 2, 2), ParseError);
    CHECK_THROWS_AS(parse_field("mystery 1", 1, 1), ParseError);
}

TEST_CASE("every preset passes validate_spec") {
    for (const std::string& name : preset_names()) {
        const ValidationReport rep = validate_spec(preset(name));
        CHECK_MESSAGE(rep.pass, name, ": ", rep.first_failure);
    }
    CHECK_THROWS_AS(preset("heat-hexagonal"), UnknownPreset);
}

TEST_CASE("preset boundary catalogue") {
    const ProblemSpec free = preset("damped-wave-free");
    CHECK(free.r == 2);
    CHECK((free.F - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(free.W_R(0.0, 0.0).norm() == 0.0);

    const ProblemSpec robin = preset("heat-robin");
    CHECK((robin.W_R(0.0, 0.0) - Matrix::Identity(2, 2)).norm() < 1e-14);

    const ProblemSpec dir = preset("heat-dirichlet");
    CHECK(dir.r == 0);
    CHECK((dir.F * dir.F.adjoint()).norm() == 0.0); // FF* = 0
}

TEST_CASE("build_problem: time-dependent damped-wave coefficients validate") {
    // rho(t) = 2 + sin(t) approximated by a piecewise-linear table in H = diag(1/rho, E)
    Config cfg;
    cfg.preset_name = "damped-wave-free";
    cfg.coefficient_overrides["H"] =
        "pwt 0 0.5 1 ; 0.5 0 0 1 | -0.055 0 0 0 ; 0.4725 0 0 1 | -0.04 0 0 0";
    const ProblemSpec spec = build_problem(cfg);
    const ValidationReport rep = validate_spec(spec);
    CHECK_MESSAGE(rep.pass, rep.first_failure);
    CHECK(spec.H(0.25, 0.0)(0, 0).real() == doctest::Approx(0.5 - 0.055 * 0.25));
}

TEST_CASE("run: solve writes a trajectory with a monotone energy column") {
    Config cfg;
    cfg.suite = Suite::Solve;
    cfg.out_dir = (std::filesystem::temp_directory_path() / "napde_cli_solve").string();
    cfg.N = 32;
    cfg.tau = 1e-2;
    cfg.T = 0.2;
    const cli::RunResult res = cli::run(cfg);
    CHECK(res.exit_code == 0);

    std::ifstream in(cfg.out_dir + "/trajectory.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,norm_h,norm_v,E");
    double prev = std::numeric_limits<double>::infinity();
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto last = line.rfind(',');
        const double e = std::stod(line.substr(last + 1));
        CHECK(e <= prev * (1 + 1e-10));
        prev = e;
        ++rows;
    }
    CHECK(rows == 21);
}

TEST_CASE("run: verify and opcheck suites pass end to end") {
    Config cfg;
    cfg.suite = Suite::Verify;
    cfg.preset_name = "damped-wave-free";
    cfg.out_dir = (std::filesystem::temp_directory_path() / "napde_cli_verify").string();
    const cli::RunResult vr = cli::run(cfg);
    CHECK_MESSAGE(vr.exit_code == 0, vr.summary);
    CHECK(std::filesystem::exists(cfg.out_dir + "/report.csv"));
    CHECK(std::filesystem::exists(cfg.out_dir + "/summary.txt"));

    cfg.suite = Suite::Opcheck;
    cfg.out_dir = (std::filesystem::temp_directory_path() / "napde_cli_opcheck").string();
    const cli::RunResult orr = cli::run(cfg);
    CHECK_MESSAGE(orr.exit_code == 0, orr.summary);
}

TEST_CASE("run: failing check yields nonzero exit and names the check") {
    Config cfg;
    cfg.suite = Suite::Verify;
    cfg.preset_name = "heat-dirichlet";
    cfg.coefficient_overrides["S"] = "const -1"; // destroys positivity
    cfg.out_dir = (std::filesystem::temp_directory_path() / "napde_cli_fail").string();
    const cli::RunResult res = cli::run(cfg);
    CHECK(res.exit_code != 0);
    CHECK_FALSE(res.first_failure.empty());
    CHECK(res.summary.find("first failing check") != std::string::npos);
}

TEST_CASE("run: identical configs produce byte-identical CSV output") {
    Config cfg;
    cfg.suite = Suite::Solve;
    cfg.N = 24;
    cfg.tau = 1e-2;
    cfg.T = 0.1;
    cfg.snapshot_times = {0.05, 0.1};
    const auto base = std::filesystem::temp_directory_path();
    cfg.out_dir = (base / "napde_det_a").string();
    cli::run(cfg);
    Config cfg2 = cfg;
    cfg2.out_dir = (base / "napde_det_b").string();
    cli::run(cfg2);
    for (const char* name :
         {"trajectory.csv", "report.csv", "snapshot_0.csv", "snapshot_1.csv"})
        CHECK(slurp(std::filesystem::path(cfg.out_dir) / name) ==
              slurp(std::filesystem::path(cfg2.out_dir) / name));
}
