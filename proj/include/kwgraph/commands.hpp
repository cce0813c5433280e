#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kwgraph/solvers.hpp"

namespace kwg {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     ///< bad input, failed verification
inline constexpr int kExitInfeasible = 2;  ///< the infeasibility certificate fired
inline constexpr int kExitSolver = 3;      ///< solver did not converge, or hypotheses violated

struct CommandOptions {
    std::optional<double> lambda;     ///< overrides the file's lambda
    bool both = false;                ///< also look for the mountain-pass solution
    double tol = 1e-10;               ///< residual tolerance
    std::optional<double> width_tol;  ///< default 1e-3 * (-min K)
    std::optional<std::string> grid;  ///< lo:hi:step
    std::optional<std::string> emit;  ///< output path
    std::uint64_t seed = 0;

    SolverConfig solver_config() const;
};

/// lo, lo + step, ... up to hi inclusive (within 1e-9 step). Throws ParseError on bad syntax.
std::vector<double> parse_grid(const std::string& spec);

/// Minimal-branch solution at lambda: the convex solver when K + lambda <= 0, continuation otherwise.
/// Throws CertifiedInfeasible when the certificate fires.
SolutionCandidate minimal_solution(const KWProblem& p, double lambda, const SolverConfig& cfg);

struct SweepRow {
    double lambda = 0.0;
    std::string branch;  ///< "min" or "mp"
    std::optional<SolutionCandidate> solution;
    std::string status;  ///< "ok", "certified_infeasible" or an error name
};

/// Evaluates the grid points concurrently; rows come back in grid order, minimal branch first.
std::vector<SweepRow> sweep(const KWProblem& p, const std::vector<double>& grid, bool both, const SolverConfig& cfg,
                            unsigned threads = 0);

/// Writes the sweep CSV (header included).
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

int cmd_solve(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_lambda_star(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& file, const std::string& solution, const CommandOptions& opt, std::ostream& out,
               std::ostream& err);

}  // namespace kwg
