#include "napde/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "napde/presets.hpp"

namespace napde {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad number '" + tok + "' in " + where);
    }
}

Matrix parse_matrix(const std::string& text, int rows, int cols, const std::string& where) {
    const auto toks = split_ws(text);
    if (int(toks.size()) != rows * cols)
        throw ParseError("expected " + std::to_string(rows * cols) + " entries in " + where +
                         ", got " + std::to_string(toks.size()));
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = parse_number(toks[i * cols + j], where);
    return m;
}

std::vector<Matrix> parse_poly(const std::string& text, int rows, int cols,
                               const std::string& where) {
    std::vector<Matrix> coeffs;
    for (const auto& part : split_on(text, '|')) coeffs.push_back(parse_matrix(part, rows, cols, where));
    return coeffs;
}

Matrix poly_eval(const std::vector<Matrix>& coeffs, double x) {
    Matrix v = Matrix::Zero(coeffs[0].rows(), coeffs[0].cols());
    double p = 1.0;
    for (const Matrix& c : coeffs) {
        v += p * c;
        p *= x;
    }
    return v;
}

Matrix poly_eval_deriv(const std::vector<Matrix>& coeffs, double x) {
    Matrix v = Matrix::Zero(coeffs[0].rows(), coeffs[0].cols());
    double p = 1.0;
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        v += double(j) * p * coeffs[j];
        p *= x;
    }
    return v;
}

} // namespace

MatrixField parse_field(const std::string& text, int rows, int cols) {
    const std::string t = trim(text);
    const auto sp = t.find_first_of(" \t");
    const std::string kind = (sp == std::string::npos) ? t : t.substr(0, sp);
    const std::string rest = (sp == std::string::npos) ? "" : t.substr(sp + 1);

    if (kind == "const") return MatrixField::constant(parse_matrix(rest, rows, cols, "const"));
    if (kind == "polyt") {
        auto coeffs = parse_poly(rest, rows, cols, "polyt");
        MatrixField f = MatrixField::of_time(
            rows, cols, [coeffs](double tt) { return poly_eval(coeffs, tt); });
        f.time_dependent = coeffs.size() > 1;
        return f;
    }
    if (kind == "polyz") {
        auto coeffs = parse_poly(rest, rows, cols, "polyz");
        MatrixField f = MatrixField::of_zeta(
            rows, cols, [coeffs](double z) { return poly_eval(coeffs, z); },
            [coeffs](double z) { return poly_eval_deriv(coeffs, z); });
        f.zeta_dependent = coeffs.size() > 1;
        return f;
    }
    if (kind == "pwt") {
        // pwt b0 b1 ... bm ; seg0 ; seg1 ; ...  with segment polynomials in (t - b_i)
        const auto parts = split_on(rest, ';');
        if (parts.size() < 2) throw ParseError("pwt needs breakpoints and segments");
        std::vector<double> breaks;
        for (const auto& tok : split_ws(parts[0])) breaks.push_back(parse_number(tok, "pwt breaks"));
        if (breaks.size() != parts.size() || breaks.size() < 2)
            throw ParseError("pwt needs m+1 breakpoints for m segments");
        std::vector<std::vector<Matrix>> segs;
        for (std::size_t i = 1; i < parts.size(); ++i)
            segs.push_back(parse_poly(parts[i], rows, cols, "pwt segment"));
        MatrixField f = MatrixField::of_time(
            rows, cols,
            [breaks, segs](double tt) {
                std::size_t i = 0;
                while (i + 2 < breaks.size() && tt >= breaks[i + 1]) ++i;
                return poly_eval(segs[i], tt - breaks[i]);
            },
            std::vector<double>(breaks.begin() + 1, breaks.end() - 1));
        return f;
    }
    throw ParseError("unknown field kind '" + kind + "'");
}

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;

    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "problem" && section != "coefficients")
                throw SemanticError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = "line " + std::to_string(lineno) + " key '" + key + "'";

        if (section == "run") {
            if (key == "suite") {
                if (value == "solve") cfg.suite = Suite::Solve;
                else if (value == "verify") cfg.suite = Suite::Verify;
                else if (value == "converge") cfg.suite = Suite::Converge;
                else if (value == "opcheck") cfg.suite = Suite::Opcheck;
                else throw SemanticError("unknown suite '" + value + "'");
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "seed") {
                cfg.seed = std::uint64_t(parse_number(value, where));
            } else if (key == "levels") {
                cfg.levels = int(parse_number(value, where));
                if (cfg.levels < 3) throw SemanticError("levels must be >= 3");
            } else {
                throw SemanticError("unknown key '" + key + "' in [run]");
            }
        } else if (section == "problem") {
            if (key == "preset") {
                cfg.preset_name = value;
            } else if (key == "T") {
                cfg.T = parse_number(value, where);
                if (cfg.T <= 0) throw SemanticError("T must be positive");
            } else if (key == "N") {
                cfg.N = int(parse_number(value, where));
                if (cfg.N < 2) throw SemanticError("N must be >= 2");
            } else if (key == "scheme") {
                if (value != "implicit-euler" && value != "crank-nicolson")
                    throw SemanticError("unknown scheme '" + value + "'");
                cfg.scheme = value;
            } else if (key == "tau") {
                cfg.tau = parse_number(value, where);
                if (cfg.tau <= 0) throw SemanticError("tau must be positive");
            } else if (key == "snapshot_times") {
                for (const auto& tok : split_ws(value))
                    cfg.snapshot_times.push_back(parse_number(tok, where));
            } else {
                throw SemanticError("unknown key '" + key + "' in [problem]");
            }
        } else if (section == "coefficients") {
            static const std::vector<std::string> known = {"S", "H", "P0", "P1", "W_R", "f", "x0"};
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw SemanticError("unknown coefficient '" + key + "'");
            cfg.coefficient_overrides[key] = value;
        } else {
            throw SemanticError("key '" + key + "' outside any section");
        }
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const Config& cfg) {
    std::ostringstream os;
    os << "[run]\n";
    os << "suite = "
       << (cfg.suite == Suite::Solve      ? "solve"
           : cfg.suite == Suite::Verify   ? "verify"
           : cfg.suite == Suite::Converge ? "converge"
                                          : "opcheck")
       << "\n";
    os << "out = " << cfg.out_dir << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "levels = " << cfg.levels << "\n\n";
    os << "[problem]\n";
    os << "preset = " << cfg.preset_name << "\n";
    os << "T = " << cfg.T << "\n";
    os << "N = " << cfg.N << "\n";
    os << "scheme = " << cfg.scheme << "\n";
    os << "tau = " << cfg.tau << "\n";
    if (!cfg.snapshot_times.empty()) {
        os << "snapshot_times =";
        for (double t : cfg.snapshot_times) os << " " << t;
        os << "\n";
    }
    if (!cfg.coefficient_overrides.empty()) {
        os << "\n[coefficients]\n";
        for (const auto& [k, v] : cfg.coefficient_overrides) os << k << " = " << v << "\n";
    }
    return os.str();
}

ProblemSpec build_problem(const Config& cfg) {
    ProblemSpec spec = preset(cfg.preset_name);
    spec.horizon = cfg.T;
    for (const auto& [key, expr] : cfg.coefficient_overrides) {
        if (key == "x0") continue;
        int rows = spec.n, cols = spec.n;
        if (key == "S") rows = cols = spec.k;
        else if (key == "W_R") rows = cols = spec.r;
        else if (key == "f") cols = 1;
        MatrixField field = parse_field(expr, rows, cols);
        if (key == "S") spec.S = field;
        else if (key == "H") spec.H = field;
        else if (key == "P0") spec.P0 = field;
        else if (key == "P1") spec.P1 = field;
        else if (key == "W_R") spec.W_R = field;
        else if (key == "f") spec.f = field;
    }
    return spec;
}

std::function<Vector(double)> initial_datum(const Config& cfg, const ProblemSpec& spec) {
    const auto it = cfg.coefficient_overrides.find("x0");
    if (it != cfg.coefficient_overrides.end()) {
        MatrixField f = parse_field(it->second, spec.n, 1);
        return [f](double z) { return Vector(f(0.0, z).col(0)); };
    }
    const Matrix G = spec.G;
    return [G](double z) {
        return Vector(G * Vector::Constant(G.cols(), std::sin(M_PI * z)));
    };
}

} // namespace napde
