#include "levi/config.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace levi {

using nlohmann::json;

namespace {

[[noreturn]] void
fail(const std::string& field, const std::string& what)
{
    throw std::runtime_error("config: field '" + field + "': " + what);
}

double
require_positive(const json& j, const std::string& key, double fallback)
{
    double v = j.value(key, fallback);
    if (!(v > 0.0))
        fail(key, "must be > 0");
    return v;
}

void
check_keys(const json& j, const std::string& scope, std::initializer_list<const char*> allowed)
{
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            known = known || item.key() == k;
        if (!known)
            fail(scope.empty() ? item.key() : scope + "." + item.key(), "unknown key");
    }
}

} // namespace

Modulus
ModulusSpec::build() const
{
    if (kind == "holder")
        return Modulus::holder(beta, scale);
    if (kind == "log_dini")
        return Modulus::log_dini(alpha, scale);
    if (kind == "table") {
        std::vector<double> r, w;
        read_modulus_table(table_csv, r, w);
        return Modulus::table(std::move(r), std::move(w));
    }
    fail("modulus.kind", "'" + kind + "' names no buildable modulus");
}

RunConfig
RunConfig::from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, "",
               {"group", "coeff", "amp", "kappa", "alpha", "beta", "Lambda", "modulus", "quad",
                "policy", "T", "grid", "pole", "cauchy", "initial", "source", "oracle", "seed",
                "out_dir", "suite_ids"});

    RunConfig c;
    c.group = j.value("group", c.group);
    c.coeff = j.value("coeff", c.coeff);
    c.amp = j.value("amp", c.amp);
    c.kappa = j.value("kappa", c.kappa);
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    c.Lambda = j.value("Lambda", c.Lambda);
    c.T = require_positive(j, "T", c.T);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.initial = j.value("initial", c.initial);
    c.source = j.value("source", c.source);

    if (j.contains("modulus")) {
        const json& m = j["modulus"];
        check_keys(m, "modulus", {"kind", "beta", "alpha", "scale", "table_csv"});
        c.modulus.kind = m.value("kind", c.modulus.kind);
        c.modulus.beta = m.value("beta", c.modulus.beta);
        c.modulus.alpha = m.value("alpha", c.modulus.alpha);
        c.modulus.scale = m.value("scale", c.modulus.scale);
        c.modulus.table_csv = m.value("table_csv", c.modulus.table_csv);
        if (c.modulus.kind != "preset" && c.modulus.kind != "holder" &&
            c.modulus.kind != "log_dini" && c.modulus.kind != "table")
            fail("modulus.kind", "unknown kind '" + c.modulus.kind + "'");
        if (c.modulus.kind == "table" && c.modulus.table_csv.empty())
            fail("modulus.table_csv", "required for kind 'table'");
    }
    if (j.contains("quad")) {
        const json& q = j["quad"];
        check_keys(q, "quad",
                   {"space_nodes", "radius_factor", "time_levels", "time_nodes", "c_env", "n_rho",
                    "n_u"});
        c.quad.space_nodes = q.value("space_nodes", c.quad.space_nodes);
        c.quad.radius_factor = q.value("radius_factor", c.quad.radius_factor);
        c.quad.time_levels = q.value("time_levels", c.quad.time_levels);
        c.quad.time_nodes = q.value("time_nodes", c.quad.time_nodes);
        c.quad.c_env = q.value("c_env", c.quad.c_env);
        c.quad.n_rho = q.value("n_rho", c.quad.n_rho);
        c.quad.n_u = q.value("n_u", c.quad.n_u);
        if (c.quad.space_nodes < 2 || c.quad.time_nodes < 1 || c.quad.time_levels < 1)
            fail("quad", "node counts must be positive");
    }
    if (j.contains("policy")) {
        const json& p = j["policy"];
        check_keys(p, "policy", {"lambda", "epsilon", "J_max", "tail_tol"});
        c.policy.lambda = p.value("lambda", c.policy.lambda);
        c.policy.epsilon = p.value("epsilon", c.policy.epsilon);
        c.policy.J_max = p.value("J_max", c.policy.J_max);
        c.policy.tail_tol = p.value("tail_tol", c.policy.tail_tol);
        if (c.policy.J_max < 1)
            fail("policy.J_max", "must be >= 1");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"half_width", "nx", "nt"});
        c.grid_half_width = require_positive(g, "half_width", c.grid_half_width);
        c.grid_nx = g.value("nx", c.grid_nx);
        c.grid_nt = g.value("nt", c.grid_nt);
        if (c.grid_nx < 2 || c.grid_nt < 1)
            fail("grid", "nx >= 2 and nt >= 1 required");
    }
    if (j.contains("pole")) {
        const json& p = j["pole"];
        check_keys(p, "pole", {"x", "t"});
        if (p.contains("x"))
            c.pole_x = p["x"].get<Vec>();
        c.pole_t = p.value("t", c.pole_t);
        if (c.pole_t < 0.0 || c.pole_t >= c.T)
            fail("pole.t", "must lie in [0, T)");
    }
    if (j.contains("cauchy")) {
        const json& g = j["cauchy"];
        check_keys(g, "cauchy", {"L", "n_y", "n_rho", "max_sweeps", "tol"});
        c.cauchy.L = require_positive(g, "L", c.cauchy.L);
        c.cauchy.n_y = g.value("n_y", c.cauchy.n_y);
        c.cauchy.n_rho = g.value("n_rho", c.cauchy.n_rho);
        c.cauchy.max_sweeps = g.value("max_sweeps", c.cauchy.max_sweeps);
        c.cauchy.tol = g.value("tol", c.cauchy.tol);
    }
    if (j.contains("oracle")) {
        const json& o = j["oracle"];
        check_keys(o, "oracle",
                   {"fd_nx", "fd_nt", "fd_L", "compare_dts", "compare_tol", "mc_paths",
                    "mc_steps", "mc_sigmas"});
        c.fd_nx = o.value("fd_nx", c.fd_nx);
        c.fd_nt = o.value("fd_nt", c.fd_nt);
        c.fd_L = o.value("fd_L", c.fd_L);
        if (o.contains("compare_dts"))
            c.compare_dts = o["compare_dts"].get<std::vector<double>>();
        c.compare_tol = o.value("compare_tol", c.compare_tol);
        c.mc_paths = o.value("mc_paths", c.mc_paths);
        c.mc_steps = o.value("mc_steps", c.mc_steps);
        c.mc_sigmas = o.value("mc_sigmas", c.mc_sigmas);
        for (double dt : c.compare_dts)
            if (!(dt > 0.0) || dt > c.T)
                fail("oracle.compare_dts", "entries must lie in (0, T]");
    }
    if (j.contains("suite_ids"))
        c.suite_ids = j["suite_ids"].get<std::vector<std::string>>();

    // Fail early on names that resolve to nothing.
    c.make_group();
    c.make_field();
    return c;
}

RunConfig
RunConfig::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

Group
RunConfig::make_group() const
{
    return Group::by_name(group);
}

CoefficientField
RunConfig::make_field() const
{
    CoefficientField f;
    if (coeff == "constant") {
        Group g = make_group();
        f = CoefficientField::constant(g.m, SymMat::identity(g.m), Lambda);
    } else {
        f = CoefficientField::by_name(coeff, amp, kappa, alpha, beta);
    }
    if (modulus.kind != "preset")
        f.mod = modulus.build();
    return f;
}

std::function<double(const Vec&)>
named_initial(const std::string& name)
{
    if (name == "one")
        return [](const Vec&) { return 1.0; };
    if (name == "cos")
        return [](const Vec& x) { return std::cos(x[0]); };
    if (name == "gaussian")
        return [](const Vec& x) {
            double s = 0.0;
            for (double v : x)
                s += v * v;
            return std::exp(-s);
        };
    if (name == "bump")
        return [](const Vec& x) {
            double s = 0.0;
            for (double v : x)
                s += v * v;
            double d = 1.0 - s;
            return d > 0.0 ? d * d : 0.0;
        };
    if (name == "none")
        return {};
    throw std::runtime_error("config: unknown initial datum '" + name + "'");
}

std::function<double(const Vec&, double)>
named_source(const std::string& name)
{
    if (name == "none")
        return {};
    if (name.rfind("constant:", 0) == 0) {
        double v = std::stod(name.substr(9));
        return [v](const Vec&, double) { return v; };
    }
    if (name == "coscos")
        return [](const Vec& x, double t) { return 0.5 * std::cos(x[0]) + 0.2 * t; };
    throw std::runtime_error("config: unknown source '" + name + "'");
}

void
CsvWriter::header(const std::vector<std::string>& names)
{
    width_ = names.size();
    have_header_ = true;
    emit(names);
}

void
CsvWriter::row(const std::vector<std::string>& fields)
{
    if (!have_header_ || fields.size() != width_)
        throw std::runtime_error("csv: row emitted before header or with mismatched width");
    emit(fields);
}

void
CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values)
        fields.push_back(num(v));
    row(fields);
}

std::string
CsvWriter::escape(const std::string& field)
{
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs)
        return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string
CsvWriter::num(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void
CsvWriter::emit(const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0)
            os_ << ',';
        os_ << escape(fields[i]);
    }
    os_ << "\r\n";
}

void
read_modulus_table(const std::string& path, std::vector<double>& r, std::vector<double>& w)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("modulus table: cannot open '" + path + "'");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) { // mandatory header
            first = false;
            continue;
        }
        std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw std::runtime_error("modulus table: expected exactly two columns: " + line);
        double rv = std::stod(line.substr(0, comma));
        double wv = std::stod(line.substr(comma + 1));
        if (!r.empty() && (rv <= r.back() || wv < w.back()))
            throw std::runtime_error("modulus table: samples must be strictly increasing in r "
                                     "and nondecreasing in omega");
        r.push_back(rv);
        w.push_back(wv);
    }
    if (r.size() < 2)
        throw std::runtime_error("modulus table: need at least two samples");
}

} // namespace levi
