#include "kwgraph/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "kwgraph/errors.hpp"
#include "kwgraph/problem_io.hpp"

namespace kwg {

SolverConfig CommandOptions::solver_config() const {
    SolverConfig cfg;
    cfg.residual_tol = tol;
    cfg.rng_seed = seed;
    return cfg;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    for (std::string field; std::getline(ss, field, ':');) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != field.size() || !std::isfinite(v)) {
            throw KwError(ErrorCode::ParseError, "grid field '" + field + "' is not a number");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) throw KwError(ErrorCode::ParseError, "grid must be lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo) throw KwError(ErrorCode::ParseError, "grid needs lo <= hi and step > 0");
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 1000000) throw KwError(ErrorCode::ParseError, "grid has more than a million points");
    for (long k = 0; k <= n; ++k) grid.push_back(lo + static_cast<double>(k) * step);
    return grid;
}

SolutionCandidate minimal_solution(const KWProblem& p, double lambda, const SolverConfig& cfg) {
    return continuation_solve(p, lambda, cfg);
}

std::vector<SweepRow> sweep(const KWProblem& p, const std::vector<double>& grid, bool both, const SolverConfig& cfg,
                            unsigned threads) {
    std::vector<std::vector<SweepRow>> slots(grid.size());
    auto work = [&](std::size_t k) {
        const double lambda = grid[k];
        auto& rows = slots[k];
        SweepRow row{lambda, "min", std::nullopt, "ok"};
        if (infeasibility_certificate(p.with_lambda(lambda))) {
            row.status = "certified_infeasible";
            rows.push_back(std::move(row));
            return;
        }
        try {
            row.solution = minimal_solution(p, lambda, cfg);
        } catch (const KwError& e) {
            row.status = std::string(to_string(e.code()));
        }
        rows.push_back(row);
        if (!both || lambda <= 0.0 || !row.solution) return;
        SweepRow mp{lambda, "mp", std::nullopt, "ok"};
        try {
            mp.solution = mountain_pass_solve(p.with_lambda(lambda), *row.solution, cfg).second_solution;
        } catch (const KwError& e) {
            mp.status = std::string(to_string(e.code()));
        }
        rows.push_back(std::move(mp));
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, grid.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < grid.size(); k = next++) work(k);
        });
    }
    for (auto& t : pool) t.join();

    std::vector<SweepRow> out;
    for (auto& rows : slots) {
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "lambda,energy,sup_norm,hessian_min_eig,classification,residual_sup,status\n";
    for (const auto& r : rows) {
        out << format_number(r.lambda) << ',';
        if (r.solution) {
            const auto& s = *r.solution;
            out << format_number(s.energy) << ',' << format_number(s.u.values().cwiseAbs().maxCoeff()) << ','
                << format_number(s.hessian_min_eig) << ',' << to_string(s.classification) << ','
                << format_number(s.residual_sup) << ',';
        } else {
            out << ",,,,,";
        }
        out << r.status << '\n';
    }
}

namespace {

bool is_hypotheses_failure(const KwError& e) {
    return e.code() == ErrorCode::HypothesesViolated ||
           std::string(e.what()).find(to_string(ErrorCode::HypothesesViolated)) != std::string::npos;
}

void print_block(std::ostream& out, int index, const KWProblem& p, const SolutionCandidate& s) {
    const auto& g = p.graph();
    const auto r = residual(p, s.u);
    out << "[solution " << index << "]\n";
    out << "vertex,u,residual\n";
    for (std::size_t x = 0; x < g.size(); ++x) {
        out << g.id(x) << ',' << format_number(s.u[x]) << ',' << format_number(r[x]) << '\n';
    }
    out << "energy=" << format_number(s.energy) << " hessian_min_eig=" << format_number(s.hessian_min_eig)
        << " class=" << to_string(s.classification) << '\n';
}

bool write_table(const std::string& path, const WeightedGraph& g, const SolutionTable& table, std::ostream& err) {
    std::ofstream f(path);
    if (!f) {
        err << "cannot write '" << path << "'\n";
        return false;
    }
    write_solution_table(f, g, table);
    return static_cast<bool>(f);
}

}  // namespace

int cmd_solve(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    std::optional<ProblemFile> pf;
    try {
        pf = load_problem(file);
    } catch (const KwError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    const double lambda = opt.lambda.value_or(pf->problem.lambda());
    const auto p = pf->problem.with_lambda(lambda);
    if (infeasibility_certificate(p)) {
        err << "no solution: K + lambda >= 0 everywhere while the integral of kappa is negative\n";
        return kExitInfeasible;
    }
    const auto cfg = opt.solver_config();
    std::vector<SolutionCandidate> found;
    try {
        found.push_back(minimal_solution(pf->problem, lambda, cfg));
        if (opt.both && lambda > 0.0) found.push_back(mountain_pass_solve(p, found.front(), cfg).second_solution);
    } catch (const KwError& e) {
        if (e.code() == ErrorCode::CertifiedInfeasible) {
            err << e.what() << '\n';
            return kExitInfeasible;
        }
        for (std::size_t i = 0; i < found.size(); ++i) print_block(out, static_cast<int>(i + 1), p, found[i]);
        err << e.what() << '\n';
        return kExitSolver;
    }
    for (std::size_t i = 0; i < found.size(); ++i) print_block(out, static_cast<int>(i + 1), p, found[i]);
    if (opt.emit) {
        SolutionTable table{lambda, {"u"}, {found[0].u}};
        if (found.size() > 1) {
            table.columns.push_back("u_mp");
            table.values.push_back(found[1].u);
        }
        if (!write_table(*opt.emit, p.graph(), table, err)) return kExitFailure;
    }
    return kExitOk;
}

int cmd_lambda_star(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    std::optional<ProblemFile> pf;
    try {
        pf = load_problem(file);
    } catch (const KwError& e) {
        err << e.what() << '\n';
        return is_hypotheses_failure(e) ? kExitSolver : kExitFailure;
    }
    const auto& p = pf->problem;
    try {
        const double width = opt.width_tol.value_or(1e-3 * -p.min_K());
        const auto b = estimate_lambda_star(p, width, opt.solver_config());
        out << "lambda_star in [" << format_number(b.lambda_lo) << ", " << format_number(b.lambda_hi) << "]\n";
        out << "evidence_lo=solved residual_sup=" << format_number(b.evidence_lo.residual_sup)
            << " evidence_hi=" << to_string(b.evidence_hi) << " trials=" << b.trials << '\n';
        if (opt.emit) {
            SolutionTable table{b.lambda_lo, {"u"}, {b.evidence_lo.u}};
            if (!write_table(*opt.emit, p.graph(), table, err)) return kExitFailure;
        }
    } catch (const KwError& e) {
        err << e.what() << '\n';
        if (e.code() == ErrorCode::InvalidConfig) return kExitFailure;
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& file, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    std::optional<ProblemFile> pf;
    std::vector<double> grid;
    try {
        pf = load_problem(file);
        grid = parse_grid(opt.grid.value_or("0:" + format_number(-pf->problem.min_K()) + ":" +
                                             format_number(-pf->problem.min_K() / 20.0)));
    } catch (const KwError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    const auto rows = sweep(pf->problem, grid, opt.both, opt.solver_config());
    if (opt.emit) {
        std::ofstream f(*opt.emit);
        if (!f) {
            err << "cannot write '" << *opt.emit << "'\n";
            return kExitFailure;
        }
        write_sweep_csv(f, rows);
    } else {
        write_sweep_csv(out, rows);
    }
    return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& solution, const CommandOptions& opt, std::ostream& out,
               std::ostream& err) {
    std::optional<ProblemFile> pf;
    std::optional<SolutionTable> table;
    try {
        pf = load_problem(file);
        std::ifstream in(solution);
        if (!in) throw KwError(ErrorCode::ParseError, "cannot open '" + solution + "'");
        table = read_solution_table(in, pf->problem.graph());
    } catch (const KwError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    const double lambda = opt.lambda ? *opt.lambda : table->lambda.value_or(pf->problem.lambda());
    const auto p = pf->problem.with_lambda(lambda);
    const auto& g = p.graph();
    const double tol = opt.tol;

    auto fail = [&](const std::string& column, const std::string& check, const std::string& detail) {
        err << "check failed: " << check << " (column " << column << "): " << detail << '\n';
        return kExitFailure;
    };

    for (std::size_t c = 0; c < table->columns.size(); ++c) {
        const auto& name = table->columns[c];
        const auto& u = table->values[c];
        if (2.0 * u.values().maxCoeff() > kMaxExponent) return fail(name, "residual", "e^{2u} overflows");
        const auto r = residual(p, u);
        const double rsup = r.values().cwiseAbs().maxCoeff();
        if (!(rsup <= tol)) return fail(name, "residual", format_number(rsup) + " > " + format_number(tol));
        const double e = energy(p, u);
        if (!std::isfinite(e)) return fail(name, "energy", "not finite");
        const double gap = solution_identity_gap(p, u);
        const double gap_tol = 10.0 * tol * g.total_measure();
        if (!(gap <= gap_tol)) return fail(name, "identity", format_number(gap) + " > " + format_number(gap_tol));
        const auto spectrum = hessian_spectrum(p, u);
        const double scale = spectrum.cwiseAbs().maxCoeff();
        double iterative = 0.0;
        try {
            iterative = hessian_min_eigenvalue(p, u, EigenMethod::InverseIteration);
        } catch (const KwError& ex) {
            return fail(name, "hessian", ex.what());
        }
        const double disagreement = std::abs(iterative - spectrum[0]);
        if (!(disagreement <= 1e-8 * std::max(1.0, scale))) {
            return fail(name, "hessian", "dense " + format_number(spectrum[0]) + " vs inverse iteration " +
                                             format_number(iterative));
        }
        out << "column=" << name << " lambda=" << format_number(lambda) << " residual_sup=" << format_number(rsup)
            << " energy=" << format_number(e) << " identity_gap=" << format_number(gap)
            << " hessian_min_eig=" << format_number(spectrum[0])
            << " class=" << to_string(classify(spectrum[0], scale)) << '\n';
    }
    return kExitOk;
}

}  // namespace kwg
