#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "heightlab/errors.hpp"
#include "heightlab/orbits.hpp"

using namespace heightlab;

static BinaryForm bf(std::initializer_list<long> asc) {
    BinaryForm f;
    for (long c : asc) f.c.push_back(BigInt(c));
    return f;
}

static ProjectivePoint p1(long p, long q) {
    return ProjectivePoint::from_integers({BigInt(p), BigInt(q)});
}

static System squaring() {
    return System{P1Morphism::validate(bf({0, 0, 1}), bf({1, 0, 0})), "z^2"};
}

static System zsq_minus_one() {
    return System{P1Morphism::validate(bf({-1, 0, 1}), bf({1, 0, 0})), "z^2-1"};
}

// naive full-history cycle search, the test oracle
static OrbitRecord naive_detect(const System& sys, const SystemPoint& start, int max_steps) {
    OrbitRecord rec;
    std::vector<std::string> keys{point_key(start)};
    SystemPoint cur = start;
    for (int n = 1; n <= max_steps; ++n) {
        try {
            cur = apply_system(sys, cur);
        } catch (const error&) {
            rec.truncated = true;
            rec.keys = keys;
            return rec;
        }
        if (point_digits(cur) > 1000000) {
            rec.truncated = true;
            rec.keys = keys;
            return rec;
        }
        std::string k = point_key(cur);
        for (int i = 0; i < (int)keys.size(); ++i)
            if (keys[(size_t)i] == k) {
                rec.tail_length = i;
                rec.period = n - i;
                rec.keys = keys;
                return rec;
            }
        keys.push_back(k);
    }
    rec.truncated = true;
    rec.keys = keys;
    return rec;
}

TEST_CASE("detect_preperiodic on the worked cycles") {
    auto f = zsq_minus_one();
    auto r0 = detect_preperiodic(f, SystemPoint{p1(0, 1)}, 100);
    CHECK(r0.tail_length == 0);
    CHECK(r0.period == 2);

    auto r1 = detect_preperiodic(f, SystemPoint{p1(1, 1)}, 100);
    CHECK(r1.tail_length == 1);
    CHECK(r1.period == 2);

    auto big = detect_preperiodic(squaring(), SystemPoint{p1(2, 1)}, 60);
    CHECK(big.truncated);
    CHECK(!big.period.has_value());
}

TEST_CASE("brent agrees with the naive oracle") {
    // escaping orbits double their digit counts per step, so the broad sweep
    // stays at 16 steps and two representatives take the full 200
    for (const System& sys : {squaring(), zsq_minus_one()}) {
        for (long p = -6; p <= 6; ++p)
            for (long q = 1; q <= 4; ++q) {
                if (gcd(BigInt(p), BigInt(q)) != 1) continue;
                SystemPoint P{p1(p, q)};
                OrbitRecord fast = detect_preperiodic(sys, P, 16);
                OrbitRecord slow = naive_detect(sys, P, 16);
                CHECK(fast.tail_length == slow.tail_length);
                CHECK(fast.period == slow.period);
            }
        for (auto [p, q] : {std::pair<long, long>{2, 1}, {3, 2}}) {
            SystemPoint P{p1(p, q)};
            OrbitRecord fast = detect_preperiodic(sys, P, 200);
            OrbitRecord slow = naive_detect(sys, P, 200);
            CHECK(fast.tail_length == slow.tail_length);
            CHECK(fast.period == slow.period);
            CHECK(fast.truncated == slow.truncated);
        }
    }
}

TEST_CASE("northcott scans find exactly the known preperiodic sets") {
    BigRat tol(1, 20);
    auto scan_keys = [](const ScanResult& r) {
        std::set<std::string> s;
        for (const auto& p : r.confirmed) s.insert(p.key());
        return s;
    };
    std::set<std::string> expect{"0:1", "1:0", "1:1", "1:-1"};

    auto sq = P1Morphism::validate(bf({0, 0, 1}), bf({1, 0, 0}));
    auto r1 = northcott_scan(sq, 100, tol);
    CHECK(scan_keys(r1) == expect);
    CHECK(r1.anomalies.empty());

    auto zm1 = P1Morphism::validate(bf({-1, 0, 1}), bf({1, 0, 0}));
    auto r2 = northcott_scan(zm1, 100, tol);
    CHECK(scan_keys(r2) == expect);
    CHECK(r2.anomalies.empty());

    // monotonicity: the bound-1 scan is a subset of the bound-100 scan
    auto small = northcott_scan(sq, 1, tol);
    for (const auto& p : small.confirmed) CHECK(expect.count(p.key()) == 1);
}

TEST_CASE("orbit intersection: the exponent-comparison pair") {
    System f = squaring();
    SystemPoint x{p1(2, 1)}, y{p1(16, 1)};
    for (int N : {10, 20, 40}) {
        IntersectionReport rep = orbit_intersection(f, x, f, y, N);
        REQUIRE(!rep.pairs.empty());
        for (const auto& [n, m] : rep.pairs) CHECK(n == m + 2);
        CHECK(rep.max_gap == 2);
        REQUIRE(rep.ap_decomposition.size() == 1);
        CHECK(rep.ap_decomposition[0][0] == 1);
        CHECK(rep.ap_decomposition[0][1] == 2);
        CHECK(rep.ap_decomposition[0][2] == 0);
        CHECK(rep.residual_pairs.empty());
        if (N == 40) CHECK((rep.truncated_f || rep.truncated_g)); // height budget bites
    }
}

TEST_CASE("orbit intersection: disjoint and diagonal cases") {
    System f = squaring();
    auto rep = orbit_intersection(f, SystemPoint{p1(2, 1)}, f, SystemPoint{p1(3, 1)}, 12);
    CHECK(rep.pairs.empty());
    CHECK(!rep.max_gap.has_value());

    auto diag = orbit_intersection(f, SystemPoint{p1(2, 1)}, f, SystemPoint{p1(2, 1)}, 12);
    REQUIRE(!diag.pairs.empty());
    CHECK(diag.max_gap == 0);
    REQUIRE(diag.ap_decomposition.size() == 1);
    CHECK(diag.ap_decomposition[0][0] == 1);
    CHECK(diag.ap_decomposition[0][1] == 0);
    CHECK(diag.ap_decomposition[0][2] == 0);
    CHECK(diag.residual_pairs.empty());
}

TEST_CASE("iterate consistency: f against f^2 meets at n = 2m") {
    auto f2form = P1Morphism::validate(bf({0, 0, 0, 0, 1}), bf({1, 0, 0, 0, 0})); // z^4
    System f = squaring();
    System g{f2form, "z^4"};
    SystemPoint x{p1(2, 1)};
    IntersectionReport rep = orbit_intersection(f, x, g, x, 16);
    REQUIRE(!rep.pairs.empty());
    for (const auto& [n, m] : rep.pairs) CHECK(n == 2 * m);
}

TEST_CASE("gap bound check") {
    System f = squaring();
    auto ok = gap_bound_check(f, SystemPoint{p1(2, 1)}, f, SystemPoint{p1(16, 1)}, 10);
    CHECK(ok.hypothesis_ok);
    CHECK(ok.stable_gap == 2);

    // delta mismatch: z^2 against z^3
    System cube{P1Morphism::validate(bf({0, 0, 0, 1}), bf({1, 0, 0, 0})), "z^3"};
    auto bad = gap_bound_check(f, SystemPoint{p1(2, 1)}, cube, SystemPoint{p1(2, 1)}, 10);
    CHECK(!bad.hypothesis_ok);

    // lattice system against itself at the same point: gap 0
    RatMatrix A(2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 3;
    A.at(1, 1) = 2;
    System lat{LatticeSystem::make(A, {}, GramForm::from_rational(RatMatrix::identity(2))), "l"};
    SystemPoint v{RatVector{BigRat(0), BigRat(1)}};
    auto self = gap_bound_check(lat, v, lat, v, 8);
    CHECK(self.hypothesis_ok);
    CHECK(self.stable_gap == 0);
}
