#include <iostream>

#include <CLI11.hpp>

#include "kwgraph/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Kazdan-Warner equation on finite weighted graphs"};
    app.require_subcommand(1);

    kwg::CommandOptions opt;
    std::string file;
    std::string solution;
    double lambda = 0.0;
    double width_tol = 0.0;
    std::string grid;
    std::string emit;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", file, "problem file")->required();
        sub->add_option("--tol", opt.tol, "residual tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--emit", emit, "output path");
    };

    auto* solve = app.add_subcommand("solve", "solve at one lambda");
    common(solve);
    auto* solve_lambda = solve->add_option("--lambda", lambda, "override the file's lambda");
    solve->add_flag("--both", opt.both, "also compute the mountain-pass solution when lambda > 0");

    auto* star = app.add_subcommand("lambda-star", "bracket the existence threshold");
    common(star);
    auto* star_width = star->add_option("--width-tol", width_tol, "bracket width")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "solution branches over a lambda grid, as CSV");
    common(sweep);
    sweep->add_option("--grid", grid, "lo:hi:step");
    sweep->add_flag("--both", opt.both, "also follow the mountain-pass branch");

    auto* verify = app.add_subcommand("verify", "check a saved solution");
    verify->add_option("file", file, "problem file")->required();
    verify->add_option("solution", solution, "solution CSV written by --emit")->required();
    verify->add_option("--tol", opt.tol, "residual tolerance")->check(CLI::PositiveNumber);
    auto* verify_lambda = verify->add_option("--lambda", lambda, "override the lambda of the solution file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kwg::kExitOk : kwg::kExitFailure;
    }
    if (!emit.empty()) opt.emit = emit;
    if (!grid.empty()) opt.grid = grid;
    if (*solve_lambda || *verify_lambda) opt.lambda = lambda;
    if (*star_width) opt.width_tol = width_tol;

    if (*solve) return kwg::cmd_solve(file, opt, std::cout, std::cerr);
    if (*star) return kwg::cmd_lambda_star(file, opt, std::cout, std::cerr);
    if (*sweep) return kwg::cmd_sweep(file, opt, std::cout, std::cerr);
    return kwg::cmd_verify(file, solution, opt, std::cout, std::cerr);
}
