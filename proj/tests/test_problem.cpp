#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "visnf/contact.hpp"
#include "visnf/json_io.hpp"
#include "visnf/problem.hpp"

using namespace visnf;

namespace {

Rational q(long n, long d = 1) { return scalar_traits<Rational>::from_fraction(n, d); }

ProblemSpec fold_spec() {
    return parse_problem(R"({
        "variables": ["x1", "x2"],
        "field": ["x2", "1"],
        "surface": "x1",
        "point": [0, 0],
        "order": 6
    })");
}

}  // namespace

TEST_CASE("fold problem parses to the expected jets") {
    const ProblemSpec spec = fold_spec();
    CHECK(spec.variables == std::vector<std::string>{"x1", "x2"});
    CHECK(spec.order == 6);
    CHECK(spec.mode == "exact");

    const auto jets = build_problem<Rational>(spec);
    CHECK(jets.field.comp(0) == Jet<Rational>::variable(2, 6, 1));
    CHECK(jets.field.comp(1) == Jet<Rational>::constant(2, 6, q(1)));
    CHECK(jets.surface == Jet<Rational>::variable(2, 6, 0));
}

TEST_CASE("study point away from the origin is translated") {
    const ProblemSpec spec = parse_problem(R"({
        "variables": ["x1", "x2", "x3"],
        "field": ["x2", "x3", "1"],
        "surface": "x1 - 1",
        "point": [1, 0, 0],
        "order": 6
    })");
    const auto jets = build_problem<Rational>(spec);
    CHECK(jets.surface == Jet<Rational>::variable(3, 6, 0));
    const auto report = contact_order(jets.field, jets.surface, 2);
    CHECK(report.k == 2);
    CHECK(report.simple);
}

TEST_CASE("point off the surface is rejected") {
    const ProblemSpec spec = parse_problem(R"({
        "variables": ["x1", "x2"],
        "field": ["x2", "1"],
        "surface": "x1 - 2",
        "point": [1, 0],
        "order": 4
    })");
    CHECK_THROWS_WITH_AS(build_problem<Rational>(spec),
                         doctest::Contains("not on the surface"), input_error);
}

TEST_CASE("rational literals and rational point entries") {
    const ProblemSpec spec = parse_problem(R"({
        "variables": ["x1", "x2"],
        "field": ["x2 - 1/2", "1"],
        "surface": "x1 - 1/4",
        "point": ["1/4", "1/2"],
        "order": 5
    })");
    CHECK(spec.point == std::vector<std::string>{"1/4", "1/2"});
    const auto jets = build_problem<Rational>(spec);
    // x2 - 1/2 centered at x2 = 1/2 is just the offset variable
    CHECK(jets.field.comp(0) == Jet<Rational>::variable(2, 5, 1));
    CHECK(jets.surface == Jet<Rational>::variable(2, 5, 0));
}

TEST_CASE("syntax errors carry a position") {
    ProblemSpec spec = fold_spec();
    spec.surface = "x1 +";
    CHECK_THROWS_WITH_AS(build_problem<Rational>(spec), doctest::Contains("line 1, column"),
                         input_error);
}

TEST_CASE("undeclared variables are reported by name") {
    ProblemSpec spec = fold_spec();
    spec.surface = "x1 + y";
    CHECK_THROWS_WITH_AS(build_problem<Rational>(spec),
                         doctest::Contains("undeclared variable 'y'"), input_error);
}

TEST_CASE("no implicit multiplication") {
    ProblemSpec spec = fold_spec();
    spec.surface = "x1 x2";
    CHECK_THROWS_AS(build_problem<Rational>(spec), input_error);
}

TEST_CASE("expressions above the truncation order are refused") {
    ProblemSpec spec = fold_spec();
    spec.order = 2;
    spec.surface = "x1 + x2^3";
    CHECK_THROWS_WITH_AS(build_problem<Rational>(spec),
                         doctest::Contains("exceeds the truncation order"), input_error);
}

TEST_CASE("powers parse and expand") {
    ProblemSpec spec = fold_spec();
    spec.surface = "x1 - (x2 - x2)^2 + 3/2 * x2^4";
    const auto jets = build_problem<Rational>(spec);
    Jet<Rational> want = Jet<Rational>::variable(2, 6, 0);
    Jet<Rational> quart(2, 6);
    quart.add_term({0, 4}, q(3, 2));
    CHECK(jets.surface == want + quart);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(parse_problem("not json at all"), input_error);
    CHECK_THROWS_AS(parse_problem("[1, 2]"), input_error);
    CHECK_THROWS_WITH_AS(parse_problem(R"({
        "variables": ["x", "x"], "field": ["1", "1"], "surface": "x",
        "point": [0, 0]
    })"), doctest::Contains("duplicate variable"), input_error);
    CHECK_THROWS_WITH_AS(parse_problem(R"({
        "variables": ["x", "y"], "field": ["1"], "surface": "x",
        "point": [0, 0]
    })"), doctest::Contains("one component per variable"), input_error);
    CHECK_THROWS_WITH_AS(parse_problem(R"({
        "variables": ["x"], "field": ["1"], "surface": "x",
        "point": [0], "mode": "quad"
    })"), doctest::Contains("mode"), input_error);
    CHECK_THROWS_WITH_AS(parse_problem(R"({
        "variables": ["x"], "field": ["1"], "surface": "x",
        "point": [0.5]
    })"), doctest::Contains("rational string"), input_error);
}

TEST_CASE("problem serialization round trip") {
    const ProblemSpec spec = fold_spec();
    const auto text = serialize_problem(spec).dump();
    const ProblemSpec again = parse_problem(text);
    CHECK(again.variables == spec.variables);
    CHECK(again.field == spec.field);
    CHECK(again.surface == spec.surface);
    CHECK(again.point == spec.point);
    CHECK(again.order == spec.order);
    CHECK(again.mode == spec.mode);

    const auto j1 = build_problem<Rational>(spec);
    const auto j2 = build_problem<Rational>(again);
    CHECK(j1.surface == j2.surface);
    CHECK(j1.field.comp(0) == j2.field.comp(0));
}

TEST_CASE("exact jet JSON round trip") {
    Jet<Rational> j(3, 4);
    j.add_term({1, 0, 0}, q(-22, 7));
    j.add_term({0, 2, 1}, q(5));
    const auto encoded = jet_to_json(j);
    const Jet<Rational> back = jet_from_json<Rational>(encoded);
    CHECK(back == j);
    CHECK(encoded.at("mode") == "exact");
}

TEST_CASE("float jet JSON round trip") {
    Jet<double> j(2, 3);
    j.add_term({1, 1}, 0.125);
    j.add_term({0, 3}, -3.5);
    const auto encoded = jet_to_json(j);
    const Jet<double> back = jet_from_json<double>(encoded);
    CHECK(back == j);
    CHECK(encoded.at("mode") == "float");
}

TEST_CASE("jet mode mismatch is rejected") {
    Jet<double> j(2, 2);
    j.add_term({1, 0}, 1.0);
    const auto encoded = jet_to_json(j);
    CHECK_THROWS_WITH_AS(jet_from_json<Rational>(encoded), doctest::Contains("mode"),
                         input_error);
}

TEST_CASE("map JSON round trip") {
    const auto x1 = Jet<Rational>::variable(2, 3, 0);
    const auto x2 = Jet<Rational>::variable(2, 3, 1);
    const JetMap<Rational> f{{x1 + x2 * x2, x2.scaled(q(1, 3))}};
    const auto encoded = map_to_json(f);
    const JetMap<Rational> back = map_from_json<Rational>(encoded);
    REQUIRE(back.ncomps() == 2);
    CHECK(back.comp(0) == f.comp(0));
    CHECK(back.comp(1) == f.comp(1));
    CHECK_THROWS_AS(map_from_json<Rational>(nlohmann::ordered_json::array()), input_error);
}
