#include "abel/cli.hpp"
#include "abel/domain.hpp"
#include "abel/synthesis.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace abel;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream o, e;
    int c = run_cli(args, o, e);
    return {c, o.str(), e.str()};
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("abel_cli_" + name)).string();
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("table subcommand")
{
    auto r = run({"table", "--which", "Z1", "--m", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "theta1 in (0,pi)U(pi,2pi): 5\ntheta1 = pi: 3\ntheta1 = 2pi: 2\n");
    auto h = run({"table", "--which", "H", "--m", "1", "--parity", "odd", "--pq-positive"});
    CHECK(h.out.find("theta1 = 2pi: >= 3") != std::string::npos);
}

TEST_CASE("exit codes")
{
    auto bad = temp_path("bad.json");
    {
        std::ofstream f(bad);
        f << "{\n  \"p\": -1,\n  \"q\": 2,,\n}";
    }
    auto r = run({"m1", "--eq", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 3") != std::string::npos);

    CHECK(run({"m1", "--eq", temp_path("missing.json")}).code == 2);
    CHECK(run({"table", "--which", "Z7", "--m", "1"}).code == 2);
    CHECK(run({"synth", "--m", "1", "--window", "-1:1", "--out", temp_path("x.json")}).code == 2);

    auto eq = temp_path("p0.json");
    {
        std::ofstream f(eq);
        f << R"({"p": 0, "q": 2, "m": 0, "theta1": "2pi"})";
    }
    CHECK(run({"m1", "--eq", eq}).code == 2);
}

TEST_CASE("synth output is deterministic and re-readable")
{
    auto a = run({"synth", "--m", "1", "--case", "2pi"});
    auto b = run({"synth", "--m", "1", "--case", "2pi", "--jobs", "2"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto rec = realization_from_json_text(a.out);
    CHECK(rec.achieved == 2);

    auto eqp = temp_path("eq.json");
    auto s = run({"synth", "--m", "1", "--case", "lower", "--equation-out", eqp, "--amplitude", "1e-4"});
    REQUIRE(s.code == 0);
    auto eq = load_equation(eqp);
    CHECK(eq.m == 1);
    CHECK(equation_to_json_text(equation_from_json_text(slurp(eqp))) == equation_to_json_text(eq));

    auto csv = temp_path("m1.csv");
    auto m = run({"m1", "--eq", eqp, "--window", "0.3:6", "--grid", "32", "--out", csv});
    REQUIRE(m.code == 0);
    auto text = slurp(csv);
    CHECK(text.rfind("rho,m1\n0.29999999999999999,", 0) == 0);
    auto report = slurp(csv + ".zeros.json");
    CHECK(report.find("\"count\": 5") != std::string::npos);
}

TEST_CASE("m2 needs the center conditions")
{
    auto eqp = temp_path("eq2.json");
    {
        std::ofstream f(eqp);
        f << equation_to_json_text(sample_center_equation(1, kPi / 2, -1, 2, 5));
    }
    auto r = run({"m2", "--eq", eqp, "--both", "--grid", "16"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("rho,m2_structured,m2_direct\n", 0) == 0);
    CHECK(r.err.find("fit_residual") != std::string::npos);

    auto nc = temp_path("eq3.json");
    {
        std::ofstream f(nc);
        f << R"({"p": -1, "q": 2, "m": 0, "theta1": "2pi", "P1": {"plus": [[0, 1]]}})";
    }
    CHECK(run({"m2", "--eq", nc}).code == 2);
}
