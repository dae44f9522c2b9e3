#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

using ojson = nlohmann::ordered_json;

std::string env_or_fail(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, name << " must be set by ctest");
    return v;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    const std::string tmp = "/tmp/deltapi_cli_test_" + std::to_string(getpid()) + "_" +
                            std::to_string(counter++) + ".out";
    std::ostringstream cmd;
    cmd << "'" << env_or_fail("DELTAPI_CLI") << "'";
    for (const auto& a : args) cmd << " '" << a << "'";
    cmd << " > " << tmp << " 2>/dev/null";
    const int status = std::system(cmd.str().c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(tmp, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    std::remove(tmp.c_str());
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("golden files reproduce byte-exactly across two runs") {
    const std::string golden = env_or_fail("DELTAPI_GOLDEN_DIR");
    const std::string data = env_or_fail("DELTAPI_DATA_DIR");
    ojson manifest = ojson::parse(read_file(golden + "/manifest.json"));
    REQUIRE(manifest.size() >= 20);
    for (const auto& entry : manifest) {
        std::vector<std::string> args;
        for (const auto& a : entry.at("args")) {
            std::string s = a.get<std::string>();
            const auto pos = s.find("{DATA}");
            if (pos != std::string::npos) s = s.substr(0, pos) + data + s.substr(pos + 6);
            args.push_back(s);
        }
        CAPTURE(entry.at("file").get<std::string>());
        auto first = run_cli(args);
        auto second = run_cli(args);
        CHECK(first.exit_code == 0);
        CHECK(first.out == second.out);
        CHECK(first.out == read_file(golden + "/" + entry.at("file").get<std::string>()));
    }
}

TEST_CASE("registry: every operation reachable from exactly one subcommand") {
    auto res = run_cli({"--registry"});
    REQUIRE(res.exit_code == 0);
    ojson j = ojson::parse(res.out);

    const std::set<std::string> spec_subcommands = {
        "delta",      "phi",        "psi-gm",    "formal-log", "jet-log",
        "val-bound",  "teichmuller", "conjugates", "serre-check", "bernoulli",
        "eisenstein", "f-inverse",  "ap",        "hensel-root", "sharp"};

    const std::set<std::string> spec_ops = {
        "padic_core.frobenius",       "padic_core.delta_pi",
        "padic_core.c_pi",            "padic_core.arith",
        "jet_series.phi_series",      "jet_series.delta_series",
        "jet_series.apply_phi_poly",  "jet_series.series_arith",
        "gm_character.psi_gm",        "gm_character.psi_gm_on_series",
        "formal_group.formal_group_law", "formal_group.jet_log",
        "formal_group.eval_jet_log",  "formal_group.valuation_bound_check",
        "char_arith.teichmuller",     "char_arith.conjugates",
        "char_arith.check_serre_compat", "qexp_tools.bernoulli",
        "qexp_tools.eisenstein_qexp", "qexp_tools.f_inverse",
        "qexp_tools.ap_point_count",  "qexp_tools.hensel_lift_root",
        "sharp_builder.assemble_sharp", "sharp_builder.integrality_exponent",
        "sharp_builder.nonzero_check"};

    std::map<std::string, int> seen;
    for (const auto& e : j.at("ops")) {
        const std::string op = e.at("op").get<std::string>();
        const std::string sub = e.at("subcommand").get<std::string>();
        ++seen[op];
        CHECK_MESSAGE(spec_subcommands.count(sub) == 1, "unknown subcommand " << sub);
    }
    for (const auto& op : spec_ops) {
        CAPTURE(op);
        CHECK(seen[op] == 1);
    }
    CHECK(seen.size() == spec_ops.size());

    std::set<std::string> declared;
    for (const auto& s : j.at("subcommands")) declared.insert(s.get<std::string>());
    CHECK(declared == spec_subcommands);
}

TEST_CASE("error contract: precondition violations exit 2 with a machine-readable object") {
    auto res = run_cli({"psi-gm", "--x", "5"});
    CHECK(res.exit_code == 2);
    ojson j = ojson::parse(res.out);
    CHECK(j.at("code") == "NotAUnit");
    CHECK(j.at("module") == "gm_character");
    CHECK(j.contains("message"));

    auto degenerate = run_cli({"conjugates", "--p", "5", "--kappa", "6"});
    CHECK(degenerate.exit_code == 2);
    CHECK(ojson::parse(degenerate.out).at("code") == "DegenerateWeight");

    auto bad_reduction = run_cli({"ap", "--ell", "11"});
    CHECK(bad_reduction.exit_code == 2);
    CHECK(ojson::parse(bad_reduction.out).at("code") == "BadReduction");
}

TEST_CASE("usage errors exit 64") {
    auto res = run_cli({"--no-such-flag"});
    CHECK(res.exit_code == 64);
    auto none = run_cli({});
    CHECK(none.exit_code == 64);
    auto missing = run_cli({"hensel-root"});
    CHECK(missing.exit_code == 64);
}

TEST_CASE("DELTA_PI_PREC environment override") {
    // run through a shell wrapper to set the environment variable
    const std::string cli = env_or_fail("DELTAPI_CLI");
    const std::string tmp = "/tmp/deltapi_env_test.out";
    const std::string cmd =
        "DELTA_PI_PREC=4 '" + cli + "' delta --x 2 > " + tmp + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    ojson j = ojson::parse(read_file(tmp));
    std::remove(tmp.c_str());
    CHECK(j.at("ctx").at("prec_M") == 4);
    // explicit flag wins over the environment
    const std::string cmd2 =
        "DELTA_PI_PREC=4 '" + cli + "' delta --x 2 --prec 6 > " + tmp + " 2>/dev/null";
    REQUIRE(std::system(cmd2.c_str()) == 0);
    ojson j2 = ojson::parse(read_file(tmp));
    std::remove(tmp.c_str());
    CHECK(j2.at("ctx").at("prec_M") == 6);
}

TEST_CASE("config file supplies defaults, flags override") {
    const std::string cfg = "/tmp/deltapi_config_test.json";
    {
        std::ofstream out(cfg);
        out << R"({"p":7,"prec_M":5})";
    }
    auto res = run_cli({"conjugates", "--kappa", "3", "--config", cfg});
    REQUIRE(res.exit_code == 0);
    ojson j = ojson::parse(res.out);
    CHECK(j.at("p") == 7);

    auto res2 = run_cli({"conjugates", "--kappa", "3", "--config", cfg, "--p", "11"});
    REQUIRE(res2.exit_code == 0);
    CHECK(ojson::parse(res2.out).at("p") == 11);
    std::remove(cfg.c_str());
}
