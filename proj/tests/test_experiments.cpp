#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "arithdyn/experiments.hpp"

using namespace arithdyn;

namespace {

const std::vector<std::string> xy = {"x", "y"};
const std::vector<std::string> xyz = {"x", "y", "z"};

SelfMap squaring_p1() {
    return SelfMap::projective(1, {parse_polynomial("x^2", xy), parse_polynomial("y^2", xy)});
}

SelfMap squaring_p2() {
    return SelfMap::projective(2, {parse_polynomial("x^2", xyz), parse_polynomial("y^2", xyz),
                                   parse_polynomial("z^2", xyz)});
}

SelfMap fibonacci_monomial() {
    return SelfMap::monomial({{mpz_class(2), mpz_class(1)}, {mpz_class(1), mpz_class(1)}});
}

json verify_ks_config() {
    json maps = json::array();
    maps.push_back(map_to_json(squaring_p1()));
    maps.push_back(map_to_json(
        SelfMap::projective(1, {parse_polynomial("x^3", xy), parse_polynomial("y^3", xy)})));
    maps.push_back(map_to_json(SelfMap::projective(
        1, {parse_polynomial("x^2 + y^2", xy), parse_polynomial("x*y", xy)})));
    json points = json::array();
    points.push_back(json{{"proj", {"2", "1"}}});
    points.push_back(json{{"proj", {"1", "1"}}});
    points.push_back(json{{"proj", {"3", "2"}}});
    points.push_back(json{{"proj", {"5", "1"}}});
    points.push_back(json{{"proj", {"7", "3"}}});
    return json{{"experiment", "verify-ks"},
                {"maps", maps},
                {"points", points},
                {"n_max", 12},
                {"seed", 5}};
}

} // namespace

TEST_CASE("curve sampler: projective line") {
    json j = {{"type", "projective-line"}, {"polys", {"1", "t", "t+1"}}};
    auto sampler = curve_sampler_from_json(j, squaring_p2());
    auto P = sampler(3);
    CHECK(std::get<ProjectivePoint>(P) ==
          ProjectivePoint::from_integers({mpz_class(1), mpz_class(3), mpz_class(4)}));
}

TEST_CASE("curve sampler: torus coordinates") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto sampler = curve_sampler_from_json(j, fibonacci_monomial());
    CHECK(point_key(sampler(4)) ==
          point_key(Point(TorusPoint::from_rationals({mpq_class(4), mpq_class(5)}))));
}

TEST_CASE("curve sampler: elliptic multiples of a base point") {
    EllipticCurve E(mpq_class(-2), mpq_class(0));
    auto dbl = SelfMap::elliptic(E, 2);
    json j = {{"type", "elliptic-multiples"}, {"base", {{"x", "-1"}, {"y", "1"}}}};
    auto sampler = curve_sampler_from_json(j, dbl);
    auto B = EllipticPoint::affine(mpq_class(-1), mpq_class(1));
    CHECK(std::get<EllipticPoint>(sampler(2)) == multiply(E, 2, B));
}

TEST_CASE("find_full_degree_points: squaring over a line, closed-form heights") {
    json j = {{"type", "projective-line"}, {"polys", {"1", "t", "t+1"}}};
    auto sampler = curve_sampler_from_json(j, squaring_p2());
    auto found = find_full_degree_points(squaring_p2(), sampler, 5, 0.1, 12);
    REQUIRE(found.size() == 5);
    for (const auto& q : found) {
        double expected = std::log(static_cast<double>(q.t + 1));
        CHECK(q.hhat.value == doctest::Approx(expected).epsilon(1e-9));
        CHECK(q.hhat.value - q.hhat.tail_bound > 0.1);
    }
}

TEST_CASE("find_full_degree_points excludes preperiodic samples") {
    auto constant_fixed = [](long) {
        return Point(ProjectivePoint::from_integers({mpz_class(1), mpz_class(1)}));
    };
    CHECK_THROWS_AS(find_full_degree_points(squaring_p1(), constant_fixed, 3, 0.1, 12),
                    NoQualifyingPoints);
}

TEST_CASE("find_full_degree_points on the monomial map") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto f = fibonacci_monomial();
    auto sampler = curve_sampler_from_json(j, f);
    auto found = find_full_degree_points(f, sampler, 6, 0.05, 14);
    // t = 1 gives (1,2); all t >= 1 grow, so at least t=2..6 qualify.
    CHECK(found.size() >= 5);
    for (const auto& q : found) CHECK(q.hhat.value > q.hhat.tail_bound);
}

TEST_CASE("find_full_degree_points is monotone in the sample budget") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto f = fibonacci_monomial();
    auto sampler = curve_sampler_from_json(j, f);
    auto small = find_full_degree_points(f, sampler, 4, 0.05, 12);
    auto big = find_full_degree_points(f, sampler, 8, 0.05, 12);
    std::set<long> big_ts;
    for (const auto& q : big) big_ts.insert(q.t);
    for (const auto& q : small) CHECK(big_ts.count(q.t) == 1);
}

TEST_CASE("build_disjoint_orbits: three exactly-disjoint segments") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto f = fibonacci_monomial();
    auto sampler = curve_sampler_from_json(j, f);
    auto set = build_disjoint_orbits(f, 3, 50, sampler);
    REQUIRE(set.members.size() == 3);
    std::set<std::string> seen;
    for (const auto& m : set.members) {
        CHECK(m.segment_keys.size() == 101);
        CHECK(m.hhat.value - m.hhat.tail_bound > 0.0);
        std::set<std::string> own(m.segment_keys.begin(), m.segment_keys.end());
        CHECK(own.size() == m.segment_keys.size()); // no internal collision
        for (const auto& k : own) CHECK(seen.count(k) == 0);
        seen.insert(own.begin(), own.end());
    }
}

TEST_CASE("build_disjoint_orbits: target one is vacuous disjointness") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto f = fibonacci_monomial();
    auto set = build_disjoint_orbits(f, 1, 10, curve_sampler_from_json(j, f));
    CHECK(set.members.size() == 1);
}

TEST_CASE("build_disjoint_orbits rejects non-expanding automorphisms") {
    auto swap = SelfMap::monomial({{mpz_class(0), mpz_class(1)}, {mpz_class(1), mpz_class(0)}});
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    CHECK_THROWS_AS(build_disjoint_orbits(swap, 2, 10, curve_sampler_from_json(j, swap)),
                    DeltaNotExpanding);
}

TEST_CASE("build_disjoint_orbits reports an exhausted candidate budget") {
    json j = {{"type", "torus"}, {"coords", {"t", "t+1"}}};
    auto f = fibonacci_monomial();
    CHECK_THROWS_AS(build_disjoint_orbits(f, 4, 10, curve_sampler_from_json(j, f), 0.05, 2),
                    BudgetExhausted);
}

TEST_CASE("run_experiment: verdict sweep row count") {
    auto cfg = ExperimentConfig::from_json(verify_ks_config());
    auto res = run_experiment(cfg);
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < res.csv.size()) {
        auto nl = res.csv.find('\n', pos);
        if (nl == std::string::npos) break;
        lines.push_back(res.csv.substr(pos, nl - pos));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 16); // header + 3 maps x 5 points
    CHECK(lines[0] == kCsvHeader);
    CHECK(res.exit_code == 0);
    CHECK(res.csv.find("\r") == std::string::npos);
}

TEST_CASE("run_experiment is deterministic for a fixed seed") {
    auto cfg = ExperimentConfig::from_json(verify_ks_config());
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    CHECK(a.csv == b.csv);
    CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("run_experiment: malformed matrix is a ConfigError naming the field") {
    auto j = verify_ks_config();
    j["maps"][2] = json{{"kind", "monomial"}, {"A", {{2, 1, 7}, {1, 1}}}, {"coeffs", {"1", "1"}}};
    try {
        ExperimentConfig::from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("A") != std::string::npos);
    }
}

TEST_CASE("run_experiment: ns-check validates a model") {
    json j = {{"experiment", "ns-check"},
              {"ns_model",
               {{"rank", 2},
                {"gram", {{0, 1}, {1, -2}}},
                {"ruled_e", 2},
                {"action", {{"matrix", {{1, 2}, {0, 3}}}, {"deg", 3}}}}}};
    auto res = run_experiment(ExperimentConfig::from_json(j));
    CHECK(res.exit_code == 0);
    REQUIRE(res.report.contains("pullback_identity"));
    CHECK(res.report["pullback_identity"] == true);
    CHECK(res.report.contains("fiber_preserving"));
}

TEST_CASE("point and map json round-trips") {
    auto P = Point(TorusPoint::from_rationals({mpq_class(-6, 5), mpq_class(7)}));
    CHECK(point_key(point_from_json(point_to_json(P))) == point_key(P));
    auto Q = Point(ProjectivePoint::from_integers({mpz_class(2), mpz_class(-3), mpz_class(5)}));
    CHECK(point_key(point_from_json(point_to_json(Q))) == point_key(Q));
    for (auto& f : {squaring_p1(), fibonacci_monomial()}) {
        auto g = map_from_json(map_to_json(f));
        auto S = std::holds_alternative<MonomialMap>(f.kind)
                     ? Point(TorusPoint::from_rationals({mpq_class(2), mpq_class(3)}))
                     : Point(ProjectivePoint::from_integers({mpz_class(2), mpz_class(1)}));
        CHECK(point_key(*evaluate(g, S)) == point_key(*evaluate(f, S)));
    }
}
