#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kwgraph/commands.hpp"
#include "kwgraph/errors.hpp"
#include "kwgraph/problem_io.hpp"
#include "support.hpp"

using namespace kwg;
namespace fs = std::filesystem;

namespace {

const char* kSample = R"(# sample
vertex a 1
vertex b 1
edge a b 1
kappa a -1
kappa b -2
K a 0
K b -1
)";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("kwgraph_cli_" + std::to_string(std::rand()) + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string error_of(const std::string& text, ErrorCode expected) {
    try {
        parse_problem(std::string_view(text));
    } catch (const KwError& e) {
        CHECK(e.code() == expected);
        return e.what();
    }
    FAIL("parse succeeded");
    return "";
}

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse: sample") {
    const auto pf = parse_problem(std::string_view(kSample));
    const auto& p = pf.problem;
    CHECK(integrate(p.graph(), p.kappa()) == -3.0);
    CHECK(p.max_K() == 0.0);
    CHECK(p.strict());
    CHECK(p.lambda() == 0.0);
    CHECK(pf.vertex_line.at("b") == 3);
    CHECK(pf.K_line.at("b") == 8);
}

TEST_CASE("parse: errors carry line numbers") {
    const std::string base = "vertex a 1\nvertex b 1\nedge a b 1\nkappa a -1\nkappa b -2\n";
    auto msg = error_of(base + "K a 0\n", ErrorCode::ValidationError);
    CHECK(msg.find("K not total") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
    msg = error_of(base + "K a 0.5\nK b -1\n", ErrorCode::ValidationError);
    CHECK(msg.find("max K must be 0") != std::string::npos);
    CHECK(msg.find("line 6") != std::string::npos);
    msg = error_of(base + "K a 0\nK b -1\nbogus 1\n", ErrorCode::ParseError);
    CHECK(msg.find("line 8") != std::string::npos);
    msg = error_of(base + "K a 0\nK b x\n", ErrorCode::ParseError);
    CHECK(msg.find("line 7") != std::string::npos);
    msg = error_of(base + "K a 0\nK b -1\nedge a c 1\n", ErrorCode::ValidationError);
    CHECK(msg.find("line 8") != std::string::npos);
    msg = error_of("vertex a 1\nvertex b -1\nedge a b 1\nkappa a -1\nkappa b -1\nK a 0\nK b -1\n", ErrorCode::ValidationError);
    CHECK(msg.find("line 2") != std::string::npos);
    msg = error_of(base + "K a 0\nK b -1\nmode loose\n", ErrorCode::ParseError);
    CHECK(msg.find("line 8") != std::string::npos);
    CHECK_NOTHROW(parse_problem(std::string_view(base + "K a 0.5\nK b -1\nmode relaxed\n")));
}

TEST_CASE("parse/emit/parse round trip is field exact") {
    const auto a = parse_problem(std::string_view(kSample)).problem;
    const auto b = parse_problem(std::string_view(emit_problem(a))).problem;
    CHECK(identical(a, b));
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = kwg::testing::random_graph(rng);
        const auto p = kwg::testing::random_strict_problem(rng, g, 0.123456789012345678);
        const auto q = parse_problem(std::string_view(emit_problem(p))).problem;
        CHECK(identical(p, q));
        CHECK_FALSE(identical(p, q.with_lambda(0.5)));
    }
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0:1:0.25");
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(parse_grid("0:1"), KwError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), KwError);
    CHECK_THROWS_AS(parse_grid("a:1:0.1"), KwError);
}

TEST_CASE("solve: exit codes and output") {
    TempDir dir;
    const auto file = dir.write("sample.kw", kSample);
    CommandOptions opt;
    std::ostringstream out, err;

    opt.lambda = 0.0;
    CHECK(cmd_solve(file, opt, out, err) == kExitOk);
    CHECK(out.str().find("[solution 1]") != std::string::npos);
    CHECK(out.str().find("[solution 2]") == std::string::npos);
    CHECK(out.str().find("class=local_min") != std::string::npos);

    for (double lambda : {1.0, 1.5, 10.0}) {
        opt.lambda = lambda;
        std::ostringstream o, e;
        CHECK(cmd_solve(file, opt, o, e) == kExitInfeasible);
        CHECK(o.str().empty());
        CHECK_FALSE(e.str().empty());
    }

    opt.lambda = 0.5;
    std::ostringstream o3, e3;
    CHECK(cmd_solve(file, opt, o3, e3) == kExitSolver);

    opt.lambda = 0.003;
    opt.both = true;
    opt.emit = dir.file("both.csv");
    std::ostringstream o4, e4;
    CHECK(cmd_solve(file, opt, o4, e4) == kExitOk);
    CHECK(o4.str().find("[solution 2]") != std::string::npos);
    CHECK(o4.str().find("class=saddle") != std::string::npos);

    std::ostringstream o5, e5;
    CHECK(cmd_solve(dir.file("missing.kw"), {}, o5, e5) == kExitFailure);
}

TEST_CASE("verify: round trip, perturbation, analytic file") {
    TempDir dir;
    const auto file = dir.write("sample.kw", kSample);
    CommandOptions opt;
    opt.lambda = 0.003;
    opt.both = true;
    opt.emit = dir.file("sol.csv");
    std::ostringstream sink;
    REQUIRE(cmd_solve(file, opt, sink, sink) == kExitOk);

    CommandOptions vopt;
    std::ostringstream out, err;
    CHECK(cmd_verify(file, *opt.emit, vopt, out, err) == kExitOk);
    CHECK(out.str().find("column=u_mp") != std::string::npos);

    // +0.1 at one vertex
    const auto table_text = read(*opt.emit);
    std::stringstream in(table_text);
    auto table = read_solution_table(in, parse_problem(std::string_view(kSample)).problem.graph());
    table.values[0][0] += 0.1;
    std::ofstream bad(dir.file("bad.csv"));
    write_solution_table(bad, parse_problem(std::string_view(kSample)).problem.graph(), table);
    bad.close();
    std::ostringstream o2, e2;
    CHECK(cmd_verify(file, dir.file("bad.csv"), vopt, o2, e2) == kExitFailure);
    CHECK(e2.str().find("residual") != std::string::npos);

    // kappa = K so u = 0 solves exactly
    const auto exact = dir.write("exact.kw", "vertex a 1\nvertex b 1\nedge a b 1\nkappa a 0\nkappa b -1\nK a 0\nK b -1\n");
    const auto zero = dir.write("zero.csv", "vertex,u\na,0\nb,0\n");
    std::ostringstream o3, e3;
    CHECK(cmd_verify(exact, zero, vopt, o3, e3) == kExitOk);

    std::ostringstream o4, e4;
    const auto broken = dir.write("broken.csv", "vertex,u\na,0\n");
    CHECK(cmd_verify(exact, broken, vopt, o4, e4) == kExitFailure);
}

TEST_CASE("lambda-star: bracket, emit, hypotheses") {
    TempDir dir;
    const auto file = dir.write("sample.kw", kSample);
    CommandOptions opt;
    opt.emit = dir.file("lo.csv");
    std::ostringstream out, err;
    CHECK(cmd_lambda_star(file, opt, out, err) == kExitOk);
    CHECK(out.str().rfind("lambda_star in [", 0) == 0);
    CHECK(out.str().find("evidence_hi=") != std::string::npos);
    std::ostringstream o2, e2;
    CHECK(cmd_verify(file, *opt.emit, {}, o2, e2) == kExitOk);

    const auto relaxed = dir.write("relaxed.kw", std::string(kSample) + "mode relaxed\n");
    std::ostringstream o3, e3;
    CHECK(cmd_lambda_star(relaxed, {}, o3, e3) == kExitSolver);
    const auto bad = dir.write("bad.kw", "vertex a 1\nvertex b 1\nedge a b 1\nkappa a -1\nkappa b -2\nK a 0.5\nK b -1\n");
    std::ostringstream o4, e4;
    CHECK(cmd_lambda_star(bad, {}, o4, e4) == kExitSolver);
}

TEST_CASE("sweep: header, grid order, certificate rows, consistency with solve") {
    TempDir dir;
    const auto file = dir.write("sample.kw", kSample);
    CommandOptions opt;
    opt.grid = "0:1.2:0.001";
    opt.both = true;
    std::ostringstream out, err;
    CHECK(cmd_sweep(file, opt, out, err) == kExitOk);
    std::stringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "lambda,energy,sup_norm,hessian_min_eig,classification,residual_sup,status");
    double prev = -1.0;
    int ok_rows = 0;
    std::string first_row;
    while (std::getline(lines, line)) {
        if (first_row.empty()) first_row = line;
        const double lambda = std::stod(line.substr(0, line.find(',')));
        CHECK(lambda >= prev);
        prev = lambda;
        const auto status = line.substr(line.rfind(',') + 1);
        if (lambda >= 1.0) CHECK(status == "certified_infeasible");
        if (status == "ok") ++ok_rows;
    }
    CHECK(ok_rows == 1 + 2 * 7);  // lambda = 0, then both branches for 0.001 .. 0.007

    const auto p = parse_problem(std::string_view(kSample)).problem;
    const auto s = minimal_solution(p, 0.0, opt.solver_config());
    CHECK(first_row.find(format_number(s.energy)) != std::string::npos);
}

}  // TEST_SUITE
