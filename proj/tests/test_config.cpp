#include <doctest.h>

#include <string>

#include "biharm/config.hpp"

using namespace biharm;

namespace {
const std::string kBase = R"(format_version = 1
domain.N = 5
domain.R = 1.0
mesh.M = 64
potential.kind = inverse_power
potential.alpha = 0.5
potential.s = 2
source.kind = constant
source.params = 1.0
nonlinearity.kind = power
nonlinearity.p = 2
mu = 1
lambda = 10
controls.max_iter = 1000
controls.rel_tol = 1e-10
controls.u_cap = 1e8
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}
}  // namespace

TEST_SUITE("config") {

TEST_CASE("a complete file maps onto the problem") {
    const ProblemConfig c = parse_config_text(kBase);
    CHECK(c.spec.grid->dimension() == 5);
    CHECK(c.spec.grid->cells() == 64);
    CHECK(c.spec.potential.kind() == RadialProfile::Kind::InversePower);
    CHECK(c.spec.potential.alpha() == 0.5);
    CHECK(c.spec.nonlinearity.exponent() == 2.0);
    CHECK(c.spec.mu == 1.0);
    CHECK(c.spec.lambda == 10.0);
    CHECK(c.controls.max_iter == 1000);
    CHECK(c.controls.rel_tol == 1e-10);
    CHECK_FALSE(c.spec.coefficient);
    CHECK(c.digest.size() == 16);
}

TEST_CASE("digest ignores order, comments and spacing") {
    std::string shuffled = "# comment\nlambda=10   # trailing\n" + replace(kBase, "lambda = 10\n", "\n\n");
    CHECK(parse_config_text(shuffled).digest == parse_config_text(kBase).digest);
    CHECK(parse_config_text(replace(kBase, "lambda = 10", "lambda = 11")).digest != parse_config_text(kBase).digest);
}

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("schema errors") {
    CHECK(error_of(kBase + "domain.n = 5\n").find("unknown key 'domain.n'") != std::string::npos);
    CHECK(error_of(kBase + "mu = 2\n").find("duplicate key 'mu'") != std::string::npos);
    CHECK(error_of(replace(kBase, "mu = 1\n", "")).find("missing required key 'mu'") != std::string::npos);
    CHECK(error_of(replace(kBase, "mesh.M = 64", "mesh.M = 64.5")).find("expected an integer") != std::string::npos);
    CHECK(error_of(replace(kBase, "mu = 1", "mu = one")).find("expected a finite real") != std::string::npos);
    CHECK(error_of(replace(kBase, "mu = 1", "mu = inf")).find("finite") != std::string::npos);
    CHECK(error_of(replace(kBase, "format_version = 1", "format_version = 2")).find("unsupported") != std::string::npos);
    CHECK(error_of(replace(kBase, "lambda = 10", "lambda 10")).find("cfg:13") != std::string::npos);
    CHECK(error_of(replace(kBase, "mu = 1", "mu = -1")).find("mu") != std::string::npos);
    CHECK(error_of(replace(kBase, "mesh.M = 64", "mesh.M = 4")).find("mesh.M") != std::string::npos);
    CHECK(error_of(replace(kBase, "domain.N = 5", "domain.N = 4")).find("domain.N") != std::string::npos);
}

TEST_CASE("kind-specific keys") {
    // Keys of an unselected kind are rejected rather than ignored.
    const std::string zero = replace(kBase, "potential.kind = inverse_power", "potential.kind = zero");
    CHECK(error_of(zero).find("potential.alpha: key not used") != std::string::npos);
    CHECK(error_of(replace(kBase, "potential.kind = inverse_power", "potential.kind = hardy")).find("unknown kind") !=
          std::string::npos);
    CHECK(error_of(replace(kBase, "potential.s = 2", "potential.s = 3")).find("potential") != std::string::npos);
    CHECK(error_of(replace(kBase, "nonlinearity.p = 2", "nonlinearity.p = 1.0")).find("p > 1") != std::string::npos);
    CHECK(error_of(replace(kBase, "source.params = 1.0", "source.params = 1.0, 2.0")).find("takes 1") !=
          std::string::npos);
    CHECK(error_of(replace(kBase, "source.params = 1.0", "source.params = 0")).find("source.params") != std::string::npos);
}

TEST_CASE("optional coefficient and custom profiles") {
    std::string text = kBase + "coefficient_c.kind = constant\ncoefficient_c.value = 2\n";
    const ProblemConfig c = parse_config_text(text);
    REQUIRE(c.spec.coefficient);
    CHECK(c.spec.coefficient->value() == 2.0);
    CHECK(error_of(kBase + "coefficient_c.value = 2\n").find("key not used") != std::string::npos);

    std::string custom = replace(kBase, "source.kind = constant", "source.kind = custom");
    std::string values;
    for (int i = 0; i < 64; ++i) values += (i ? "," : "") + std::to_string(1 + i % 3);
    custom = replace(custom, "source.params = 1.0", "source.params = " + values);
    const ProblemConfig cc = parse_config_text(custom);
    CHECK(cc.spec.source.sample(cc.spec.grid)[2] == 3.0);
    CHECK(error_of(replace(custom, values, "1,2,3")).find("expected 64 values") != std::string::npos);
}

TEST_CASE("schema lists every key once") {
    const auto& schema = config_schema();
    CHECK(schema.size() == 23);
    CHECK(schema.front().key == "format_version");
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

}
