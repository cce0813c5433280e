#include "kwgraph/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "kwgraph/errors.hpp"

namespace kwg {

namespace {

[[noreturn]] void parse_error(int line, const std::string& reason) {
    throw KwError(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason);
}

[[noreturn]] void validation_error(std::optional<int> line, const std::string& reason) {
    if (line) throw KwError(ErrorCode::ValidationError, "line " + std::to_string(*line) + ": " + reason);
    throw KwError(ErrorCode::ValidationError, reason);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

double number(int line, std::string_view tok, std::string_view what) {
    auto v = to_double(tok);
    if (!v) parse_error(line, "invalid " + std::string(what) + " '" + std::string(tok) + "'");
    return *v;
}

struct Raw {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
    std::map<std::string, double> kappa;
    std::map<std::string, double> K;
    double lambda = 0.0;
    Mode mode = Mode::Strict;
};

}  // namespace

ProblemFile parse_problem(std::string_view text) {
    Raw raw;
    std::map<std::string, int> vertex_line;
    std::map<std::string, int> kappa_line;
    std::map<std::string, int> K_line;
    std::vector<int> edge_lines;
    std::optional<int> lambda_line;
    std::optional<int> mode_line;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = split_ws(line);
        if (tok.empty()) continue;

        const auto key = tok[0];
        auto expect = [&](std::size_t count, const char* usage) {
            if (tok.size() != count) parse_error(line_no, std::string("expected '") + usage + "'");
        };
        if (key == "vertex") {
            expect(3, "vertex <id> <mu>");
            std::string id(tok[1]);
            if (vertex_line.count(id)) parse_error(line_no, "vertex '" + id + "' already declared on line " + std::to_string(vertex_line[id]));
            raw.vertices.push_back({id, number(line_no, tok[2], "measure")});
            vertex_line[id] = line_no;
        } else if (key == "edge") {
            expect(4, "edge <id> <id> <weight>");
            raw.edges.push_back({std::string(tok[1]), std::string(tok[2]), number(line_no, tok[3], "weight")});
            edge_lines.push_back(line_no);
        } else if (key == "kappa" || key == "K") {
            expect(3, key == "kappa" ? "kappa <id> <value>" : "K <id> <value>");
            auto& values = key == "kappa" ? raw.kappa : raw.K;
            auto& lines = key == "kappa" ? kappa_line : K_line;
            std::string id(tok[1]);
            if (lines.count(id)) parse_error(line_no, std::string(key) + " for '" + id + "' already given on line " + std::to_string(lines[id]));
            values[id] = number(line_no, tok[2], "value");
            lines[id] = line_no;
        } else if (key == "lambda") {
            expect(2, "lambda <value>");
            if (lambda_line) parse_error(line_no, "lambda already given on line " + std::to_string(*lambda_line));
            raw.lambda = number(line_no, tok[1], "lambda");
            lambda_line = line_no;
        } else if (key == "mode") {
            expect(2, "mode strict|relaxed");
            if (mode_line) parse_error(line_no, "mode already given on line " + std::to_string(*mode_line));
            if (tok[1] == "strict") {
                raw.mode = Mode::Strict;
            } else if (tok[1] == "relaxed") {
                raw.mode = Mode::Relaxed;
            } else {
                parse_error(line_no, "mode must be 'strict' or 'relaxed'");
            }
            mode_line = line_no;
        } else {
            parse_error(line_no, "unknown directive '" + std::string(key) + "'");
        }
    }

    // references
    for (std::size_t i = 0; i < raw.edges.size(); ++i) {
        for (const auto* id : {&raw.edges[i].from, &raw.edges[i].to}) {
            if (!vertex_line.count(*id)) validation_error(edge_lines[i], "edge references undeclared vertex '" + *id + "'");
        }
    }
    for (const auto& [values, lines, name] : {std::tuple{&raw.kappa, &kappa_line, "kappa"}, std::tuple{&raw.K, &K_line, "K"}}) {
        for (const auto& [id, _] : *values) {
            if (!vertex_line.count(id)) validation_error((*lines)[id], std::string(name) + " given for undeclared vertex '" + id + "'");
        }
        for (const auto& v : raw.vertices) {
            if (!values->count(v.id)) validation_error(vertex_line[v.id], std::string(name) + " not total: no value for vertex '" + v.id + "'");
        }
    }

    std::optional<WeightedGraph> graph;
    try {
        graph = WeightedGraph::build(raw.vertices, raw.edges);
    } catch (const KwError& e) {
        std::optional<int> where;
        const std::string msg = e.what();
        for (const auto& [id, line] : vertex_line) {
            if (msg.find("'" + id + "'") != std::string::npos) {
                where = line;
                break;
            }
        }
        if (e.code() == ErrorCode::NonPositiveWeight || e.code() == ErrorCode::DuplicateEdge || e.code() == ErrorCode::SelfLoop) {
            for (std::size_t i = 0; i < raw.edges.size(); ++i) {
                const auto& ed = raw.edges[i];
                if (msg.find("(" + ed.from + ", " + ed.to + ")") != std::string::npos || (ed.from == ed.to && e.code() == ErrorCode::SelfLoop)) {
                    where = edge_lines[i];
                }
            }
        }
        validation_error(where, msg);
    }

    auto kappa = VertexFunction::from_map(*graph, raw.kappa);
    auto K = VertexFunction::from_map(*graph, raw.K);
    try {
        KWProblem problem(*graph, kappa, K, raw.lambda, raw.mode);
        return ProblemFile{std::move(problem), std::move(vertex_line), std::move(kappa_line), std::move(K_line),
                           std::move(edge_lines), lambda_line, mode_line};
    } catch (const KwError& e) {
        std::optional<int> where;
        const std::string msg = e.what();
        if (msg.find("max K") != std::string::npos) {
            Eigen::Index arg = 0;
            K.values().maxCoeff(&arg);
            where = K_line[graph->id(static_cast<std::size_t>(arg))];
        } else if (msg.find("K must be non-constant") != std::string::npos) {
            where = K_line[graph->id(0)];
        } else if (msg.find("kappa") != std::string::npos) {
            where = kappa_line[graph->id(0)];
        }
        validation_error(where, msg);
    }
}

ProblemFile parse_problem(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_problem(std::string_view(text));
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KwError(ErrorCode::ParseError, "cannot open '" + path + "'");
    return parse_problem(in);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string emit_problem(const KWProblem& p) {
    const auto& g = p.graph();
    std::ostringstream os;
    for (std::size_t x = 0; x < g.size(); ++x) os << "vertex " << g.id(x) << ' ' << format_number(g.measure(x)) << '\n';
    for (const auto& e : g.edges()) os << "edge " << g.id(e.a) << ' ' << g.id(e.b) << ' ' << format_number(e.weight) << '\n';
    for (std::size_t x = 0; x < g.size(); ++x) os << "kappa " << g.id(x) << ' ' << format_number(p.kappa()[x]) << '\n';
    for (std::size_t x = 0; x < g.size(); ++x) os << "K " << g.id(x) << ' ' << format_number(p.K()[x]) << '\n';
    os << "lambda " << format_number(p.lambda()) << '\n';
    os << "mode " << (p.strict() ? "strict" : "relaxed") << '\n';
    return os.str();
}

bool identical(const KWProblem& a, const KWProblem& b) {
    const auto& ga = a.graph();
    const auto& gb = b.graph();
    if (ga.ids() != gb.ids()) return false;
    if (!(ga.measures().array() == gb.measures().array()).all()) return false;
    if (ga.edges().size() != gb.edges().size()) return false;
    for (const auto& e : ga.edges()) {
        if (gb.weight(e.a, e.b) != e.weight) return false;
    }
    return a.kappa() == b.kappa() && a.K() == b.K() && a.lambda() == b.lambda() && a.mode() == b.mode();
}

void write_solution_table(std::ostream& out, const WeightedGraph& g, const SolutionTable& table) {
    if (table.lambda) out << "# lambda=" << format_number(*table.lambda) << '\n';
    out << "vertex";
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t x = 0; x < g.size(); ++x) {
        out << g.id(x);
        for (const auto& v : table.values) out << ',' << format_number(v[x]);
        out << '\n';
    }
}

SolutionTable read_solution_table(std::istream& in, const WeightedGraph& g) {
    SolutionTable table;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::vector<std::map<std::string, double>> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto at = line.find("lambda=");
            if (at != std::string::npos) {
                auto v = to_double(std::string_view(line).substr(at + 7));
                if (!v) parse_error(line_no, "invalid lambda comment");
                table.lambda = *v;
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "vertex") parse_error(line_no, "expected header 'vertex,<column>...'");
            table.columns.assign(fields.begin() + 1, fields.end());
            columns.resize(table.columns.size());
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size() + 1) parse_error(line_no, "wrong number of fields");
        if (!g.index_of(fields[0])) validation_error(line_no, "unknown vertex '" + fields[0] + "'");
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].count(fields[0])) parse_error(line_no, "vertex '" + fields[0] + "' listed twice");
            columns[c][fields[0]] = number(line_no, fields[c + 1], "value");
        }
    }
    if (!have_header) throw KwError(ErrorCode::ParseError, "solution file is empty");
    for (const auto& col : columns) {
        try {
            table.values.push_back(VertexFunction::from_map(g, col));
        } catch (const KwError& e) {
            validation_error(std::nullopt, e.what());
        }
    }
    return table;
}

}  // namespace kwg
