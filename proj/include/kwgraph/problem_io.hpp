#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kwgraph/model.hpp"

namespace kwg {

/// A parsed problem plus the line each datum came from.
///
/// Format, one directive per line, `#` starts a comment, fields separated by whitespace:
///
///     vertex <id> <mu>
///     edge <id> <id> <weight>
///     kappa <id> <value>
///     K <id> <value>
///     lambda <value>
///     mode strict|relaxed
///
/// lambda defaults to 0 and mode to strict.
struct ProblemFile {
    KWProblem problem;
    std::map<std::string, int> vertex_line;
    std::map<std::string, int> kappa_line;
    std::map<std::string, int> K_line;
    std::vector<int> edge_lines;
    std::optional<int> lambda_line;
    std::optional<int> mode_line;
};

/// Throws KwError(ParseError) for malformed lines and KwError(ValidationError) when the data
/// violate a graph or problem invariant; both messages start with "line N:" when a line applies.
ProblemFile parse_problem(std::string_view text);
ProblemFile parse_problem(std::istream& in);
ProblemFile load_problem(const std::string& path);

/// Writes the problem back in the format parse_problem reads; parse(emit(p)) is field-exact.
std::string emit_problem(const KWProblem& p);

/// Field-exact equality: vertex order, measures, edge weights, coefficients, lambda and mode.
bool identical(const KWProblem& a, const KWProblem& b);

/// 17 significant digits, enough for an exact double round trip.
std::string format_number(double v);

/// Named columns of vertex values, as written by --emit.
///
///     # lambda=<value>          (optional)
///     vertex,<name>[,<name>...]
///     <id>,<value>[,<value>...]
struct SolutionTable {
    std::optional<double> lambda;
    std::vector<std::string> columns;
    std::vector<VertexFunction> values;  ///< one per column, in graph vertex order
};

void write_solution_table(std::ostream& out, const WeightedGraph& g, const SolutionTable& table);
SolutionTable read_solution_table(std::istream& in, const WeightedGraph& g);

}  // namespace kwg
