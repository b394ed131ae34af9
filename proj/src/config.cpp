#include "biharm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace biharm {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

const std::vector<std::string> kProfileKinds = {"zero", "constant", "inverse_power", "custom"};

std::vector<SchemaEntry> build_schema() {
    std::vector<SchemaEntry> s = {
        {"format_version", ValueType::Int, "must equal 1"},
        {"domain.N", ValueType::Int, "space dimension, >= 5"},
        {"domain.R", ValueType::Real, "ball radius, > 0"},
        {"mesh.M", ValueType::Int, "number of radial cells, >= 8"},
    };
    for (const std::string prefix : {"potential", "coefficient_c"}) {
        s.push_back({prefix + ".kind", ValueType::Text, "zero | constant | inverse_power | custom"});
        s.push_back({prefix + ".alpha", ValueType::Real, "inverse_power coefficient"});
        s.push_back({prefix + ".s", ValueType::Real, "inverse_power exponent"});
        s.push_back({prefix + ".value", ValueType::Real, "constant value"});
        s.push_back({prefix + ".values", ValueType::RealList, "custom: one value per cell"});
    }
    s.push_back({"source.kind", ValueType::Text, "constant | indicator | inverse_power | custom"});
    s.push_back({"source.params", ValueType::RealList,
                 "constant: v | indicator: v, radius | inverse_power: alpha, s | custom: one value per cell"});
    s.push_back({"nonlinearity.kind", ValueType::Text, "zero | power | exp_reduced"});
    s.push_back({"nonlinearity.p", ValueType::Real, "power exponent, > 1"});
    s.push_back({"mu", ValueType::Real, "potential strength, >= 0"});
    s.push_back({"lambda", ValueType::Real, "source strength, >= 0"});
    s.push_back({"controls.max_iter", ValueType::Int, "iteration budget, >= 2"});
    s.push_back({"controls.rel_tol", ValueType::Real, "relative sup-norm tolerance, > 0"});
    s.push_back({"controls.u_cap", ValueType::Real, "divergence cap relative to sup u_0, > 0"});
    return s;
}

class Reader {
public:
    Reader(std::map<std::string, std::string> entries, std::map<std::string, int> lines, std::string origin)
        : entries_(std::move(entries)), lines_(std::move(lines)), origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        auto it = lines_.find(key);
        std::string where = origin_;
        if (it != lines_.end()) where += ":" + std::to_string(it->second);
        throw ConfigError(where + ": " + key + ": " + msg);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const std::string& raw(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    long long integer(const std::string& key) {
        const std::string& v = raw(key);
        long long out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
        return out;
    }

    static bool parse_real(const std::string& v, double& out) {
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        return res.ec == std::errc() && res.ptr == v.data() + v.size() && std::isfinite(out);
    }

    double real(const std::string& key) {
        const std::string& v = raw(key);
        double out = 0.0;
        if (!parse_real(v, out)) fail(key, "expected a finite real, got '" + v + "'");
        return out;
    }

    std::vector<double> reals(const std::string& key) {
        const std::string& v = raw(key);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double x = 0.0;
            if (!parse_real(trim(item), x)) fail(key, "expected a comma-separated list of finite reals");
            out.push_back(x);
        }
        if (out.empty()) fail(key, "empty list");
        return out;
    }

    std::string text(const std::string& key, const std::vector<std::string>& allowed) {
        const std::string& v = raw(key);
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(key, "unknown kind '" + v + "' (expected one of: " + list + ")");
        }
        return v;
    }

    /// Every key present must have been consumed.
    void reject_unused() const {
        for (const auto& [key, value] : entries_) {
            if (!used_.count(key)) fail(key, "key not used by the selected kinds");
        }
    }

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_;
    std::string origin_;
    std::set<std::string> used_;
};

std::vector<double> per_cell(Reader& r, const std::string& key, const std::vector<double>& values, int cells) {
    if (static_cast<int>(values.size()) != cells) {
        r.fail(key, "expected " + std::to_string(cells) + " values (one per cell), got " + std::to_string(values.size()));
    }
    return values;
}

RadialProfile read_profile(Reader& r, const std::string& prefix, const GridPtr& grid) {
    const std::string kind = r.text(prefix + ".kind", kProfileKinds);
    if (kind == "zero") return RadialProfile::zero();
    if (kind == "constant") return RadialProfile::constant(r.real(prefix + ".value"));
    if (kind == "inverse_power") return RadialProfile::inverse_power(r.real(prefix + ".alpha"), r.real(prefix + ".s"));
    const std::string key = prefix + ".values";
    return RadialProfile::custom(FieldVector(grid, per_cell(r, key, r.reals(key), grid->cells())));
}

RadialProfile read_source(Reader& r, const GridPtr& grid) {
    const std::string kind = r.text("source.kind", {"constant", "indicator", "inverse_power", "custom"});
    const std::vector<double> p = r.reals("source.params");
    auto expect = [&](std::size_t n) {
        if (p.size() != n) {
            r.fail("source.params", "source.kind = " + kind + " takes " + std::to_string(n) + " parameter(s), got " +
                                        std::to_string(p.size()));
        }
    };
    if (kind == "constant") {
        expect(1);
        return RadialProfile::constant(p[0]);
    }
    if (kind == "indicator") {
        expect(2);
        return RadialProfile::indicator(p[0], p[1]);
    }
    if (kind == "inverse_power") {
        expect(2);
        return RadialProfile::inverse_power(p[0], p[1]);
    }
    return RadialProfile::custom(FieldVector(grid, per_cell(r, "source.params", p, grid->cells())));
}

Nonlinearity read_nonlinearity(Reader& r) {
    const std::string kind = r.text("nonlinearity.kind", {"zero", "power", "exp_reduced"});
    if (kind == "zero") return Nonlinearity::zero();
    if (kind == "exp_reduced") return Nonlinearity::exp_reduced();
    return Nonlinearity::power(r.real("nonlinearity.p"));
}

// Runs `fn`, converting domain errors from the model constructors into
// ConfigErrors attributed to `key`.
template <typename F>
auto attributed(Reader& r, const std::string& key, F&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        r.fail(key, e.what());
    }
}

}  // namespace

const std::vector<SchemaEntry>& config_schema() {
    static const std::vector<SchemaEntry> schema = build_schema();
    return schema;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string canonical_text(const std::map<std::string, std::string>& entries) {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
}

ProblemConfig parse_config(std::istream& in, const std::string& origin) {
    std::map<std::string, const SchemaEntry*> known;
    for (const auto& e : config_schema()) known[e.key] = &e;

    std::map<std::string, std::string> entries;
    std::map<std::string, int> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (entries.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (known[key]->type == ValueType::RealList) {
            std::string canon;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) canon += (canon.empty() ? "" : ",") + trim(item);
            value = canon;
        }
        entries[key] = value;
        lines[key] = lineno;
    }

    Reader r(entries, lines, origin);
    if (r.integer("format_version") != kConfigFormatVersion) {
        r.fail("format_version", "unsupported version (expected " + std::to_string(kConfigFormatVersion) + ")");
    }

    ProblemConfig cfg;
    cfg.entries = entries;
    cfg.digest = fnv1a_hex(canonical_text(entries));

    const long long n = r.integer("domain.N");
    const double radius = r.real("domain.R");
    const long long m = r.integer("mesh.M");
    if (n < 5 || n > 64) r.fail("domain.N", "must be in [5, 64]");
    if (m < 8 || m > 1000000) r.fail("mesh.M", "must be in [8, 1000000]");
    ProblemSpec& spec = cfg.spec;
    spec.grid = attributed(r, "domain.R", [&] { return build_grid(static_cast<int>(n), radius, static_cast<int>(m)); });

    spec.potential = attributed(r, "potential.kind", [&] { return read_profile(r, "potential", spec.grid); });
    attributed(r, "potential.kind", [&] {
        validate_potential(spec.potential);
        return 0;
    });
    if (r.has("coefficient_c.kind")) {
        spec.coefficient = attributed(r, "coefficient_c.kind", [&] { return read_profile(r, "coefficient_c", spec.grid); });
        attributed(r, "coefficient_c.kind", [&] {
            validate_potential(*spec.coefficient);
            return 0;
        });
    }
    spec.source = attributed(r, "source.params", [&] { return read_source(r, spec.grid); });
    attributed(r, "source.params", [&] {
        validate_source(spec.source, spec.grid);
        return 0;
    });
    spec.nonlinearity = attributed(r, "nonlinearity.p", [&] { return read_nonlinearity(r); });

    spec.mu = r.real("mu");
    if (spec.mu < 0.0) r.fail("mu", "must be >= 0");
    spec.lambda = r.real("lambda");
    if (spec.lambda < 0.0) r.fail("lambda", "must be >= 0");

    const long long max_iter = r.integer("controls.max_iter");
    if (max_iter < 2 || max_iter > 100000000) r.fail("controls.max_iter", "must be in [2, 1e8]");
    cfg.controls.max_iter = static_cast<int>(max_iter);
    cfg.controls.rel_tol = r.real("controls.rel_tol");
    cfg.controls.u_cap = r.real("controls.u_cap");
    attributed(r, "controls.rel_tol", [&] {
        cfg.controls.validate();
        return 0;
    });

    r.reject_unused();
    return cfg;
}

ProblemConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse_config(in, origin);
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path);
}

}  // namespace biharm
