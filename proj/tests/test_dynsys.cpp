#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heightlab/dynsys.hpp"
#include "heightlab/errors.hpp"

using namespace heightlab;

static BinaryForm bf(std::initializer_list<long> asc) {
    BinaryForm f;
    for (long c : asc) f.c.push_back(BigInt(c));
    return f;
}

static ProjectivePoint p1(long p, long q) {
    return ProjectivePoint::from_integers({BigInt(p), BigInt(q)});
}

// the seeded (2,2,2) form used across the Wehler tests: coefficients sum to
// zero so that ((1:1),(1:1),(1:1)) lies on the surface
static WehlerSystem seeded_wehler(std::vector<int> word) {
    std::array<BigInt, 27> c{};
    const long vals[27] = {1,  -2, 1, 0, 2,  -1, 1, 0, -2, 2, 1,  0, -1, 1,
                           2,  0,  1, 1, -2, 0,  1, 2, -1, 0, 1,  -2, -6};
    for (size_t i = 0; i < 27; ++i) c[i] = vals[i];
    return WehlerSystem::validate(c, std::move(word));
}

static WehlerPoint ones() {
    return WehlerPoint{p1(1, 1), p1(1, 1), p1(1, 1)};
}

TEST_CASE("p1 morphism validation and evaluation") {
    auto sq = P1Morphism::validate(bf({0, 0, 1}), bf({1, 0, 0})); // (X^2 : Y^2)
    CHECK(sq.apply(p1(2, 1)) == p1(4, 1));
    CHECK(sq.apply(p1(1, 0)) == p1(1, 0)); // fixed point at infinity

    auto zsq_m1 = P1Morphism::validate(bf({-1, 0, 1}), bf({1, 0, 0})); // z^2 - 1
    CHECK(zsq_m1.apply(p1(0, 1)) == p1(-1, 1));

    // (XY : Y^2) shares the root (1:0)
    CHECK_THROWS_AS((void)P1Morphism::validate(bf({0, 1, 0}), bf({1, 0, 0})), error);
    // degree 1 excluded: delta > 1 is the standing hypothesis
    CHECK_THROWS_AS((void)P1Morphism::validate(bf({0, 1}), bf({1, 0})), error);
    // (X^2 - Y^2 : Y^2) accepted: nonzero Sylvester determinant
    auto ok = P1Morphism::validate(bf({-1, 0, 1}), bf({1, 0, 0}));
    CHECK(ok.degree() == 2);
}

TEST_CASE("lattice apply: the worked shear example") {
    RatMatrix A(2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 3;
    A.at(1, 1) = 2;
    auto sys = LatticeSystem::make(A, {}, GramForm::from_rational(RatMatrix::identity(2)));
    RatVector v{BigRat(0), BigRat(1)};
    RatVector img = sys.apply(v);
    CHECK(img[0] == 3);
    CHECK(img[1] == 2);

    auto aff = LatticeSystem::make(RatMatrix::identity(2), {BigRat(1), BigRat(0)},
                                   GramForm::from_rational(RatMatrix::identity(2)));
    RatVector w = aff.apply({BigRat(0), BigRat(0)});
    CHECK(w[0] == 1);
    CHECK(w[1] == 0);
}

TEST_CASE("concrete abelian system doubles coordinatewise") {
    EllipticCurve E(BigRat(0), BigRat(0), BigRat(1), BigRat(-1), BigRat(0)); // 37a1
    EPoint P = EPoint::affine(BigRat(0), BigRat(0));
    RatMatrix two = RatMatrix::identity(2) * BigRat(2);
    auto sys = ConcreteAbelianSystem::make(E, two, {});
    auto img = sys.apply({P, P});
    CHECK(img[0] == E.dbl(P));
    CHECK(img[1] == E.dbl(P));

    // shadow commutation: coordinates of f^n(P-tuple) in the generator P
    // match A^n v for the lattice shadow
    RatMatrix A(2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 3;
    A.at(1, 1) = 2;
    auto csys = ConcreteAbelianSystem::make(E, A, {});
    std::vector<EPoint> x{EPoint::O(), P}; // coordinates (0, 1) in generator P
    RatVector v{BigRat(0), BigRat(1)};
    for (int n = 1; n <= 5; ++n) {
        x = csys.apply(x);
        v = A * v;
        CHECK(x[0] == E.mul(v[0].get_num().get_si(), P));
        CHECK(x[1] == E.mul(v[1].get_num().get_si(), P));
    }
}

TEST_CASE("wehler involutions preserve the surface and square to identity") {
    auto S = seeded_wehler({0, 1, 2});
    WehlerPoint P = ones();
    REQUIRE(S.contains(P));
    for (int axis = 0; axis < 3; ++axis) {
        WehlerPoint Q = S.involution(axis, P);
        CHECK(S.contains(Q));
        CHECK(S.involution(axis, Q) == P);
    }
    // orbit points stay on the surface under the full word
    WehlerPoint cur = P;
    for (int n = 0; n < 4; ++n) {
        cur = S.apply(cur);
        CHECK(S.contains(cur));
    }
    // validation screen rejects visibly split forms
    std::array<BigInt, 27> split{};
    split[9 * 1 + 3 * 1 + 1] = 1; // F = x0 x1 y0 y1 z0 z1 only
    CHECK_THROWS_AS((void)WehlerSystem::validate(split, {0}), error);
}

TEST_CASE("wehler picard matrices") {
    for (int axis = 0; axis < 3; ++axis) {
        RatMatrix S = WehlerSystem::generator_matrix(axis);
        CHECK(S * S == RatMatrix::identity(3));
    }
    auto Sx = seeded_wehler({0});
    CHECK(Sx.picard_matrix() == WehlerSystem::generator_matrix(0));

    // two-letter words are parabolic: the char poly is (t-1)^3
    auto Sxy = seeded_wehler({0, 1});
    RatPoly cp = Sxy.picard_matrix().char_poly();
    RatPoly t = RatPoly::variable();
    RatPoly one = RatPoly::constant(BigRat(1));
    CHECK(cp == (t - one).pow(3));
    auto sd = spectral_data(Sxy.picard_matrix());
    CHECK(sd.rho.contains(BigRat(1)));

    // the full three-letter word is hyperbolic: rho = 9 + 4 sqrt(5)
    auto Sxyz = seeded_wehler({0, 1, 2});
    auto sd3 = spectral_data(Sxyz.picard_matrix());
    CHECK(sd3.rho.certainly_gt(BallReal::exact(1L)));
    CHECK(sd3.rho.midpoint_d() == doctest::Approx(9 + 4 * std::sqrt(5.0)).epsilon(1e-12));
    CHECK(sd3.certification == Certification::exact);
}

TEST_CASE("system_spectral across kinds") {
    // worked lattice example: delta contains 4 exactly, l = 2
    RatMatrix A(2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 3;
    A.at(1, 1) = 2;
    System lat{LatticeSystem::make(A, {}, GramForm::from_rational(RatMatrix::identity(2))), "ex"};
    auto sl = system_spectral(lat);
    REQUIRE(sl.delta_exact.has_value());
    CHECK(*sl.delta_exact == 4);
    CHECK(sl.l == 2);
    CHECK(sl.certification == Certification::exact);

    // z -> z^2 on P^1: (2, 0) exact
    System sq{P1Morphism::validate(bf({0, 0, 1}), bf({1, 0, 0})), "sq"};
    auto ss = system_spectral(sq);
    CHECK(*ss.delta_exact == 2);
    CHECK(ss.l == 0);

    // product takes the lexicographic max: (4, 2)
    System prod{ProductSystem{std::make_shared<System>(lat), std::make_shared<System>(sq)}, "p"};
    auto sp = system_spectral(prod);
    CHECK(*sp.delta_exact == 4);
    CHECK(sp.l == 2);

    // Picard-only: l is an upper bound
    PicardAction pa{A, {}, "pa"};
    auto spa = system_spectral(System{pa, "pa"});
    CHECK(spa.l_upper_bound_only);
    CHECK(spa.delta.contains(BigRat(2))); // rho of the matrix itself

    // ties between equal product factors resolve exactly
    System prod2{ProductSystem{std::make_shared<System>(lat), std::make_shared<System>(lat)}, "pp"};
    auto sp2 = system_spectral(prod2);
    CHECK(*sp2.delta_exact == 4);
    CHECK(sp2.l == 2);
}

TEST_CASE("iterate rule: squared systems square delta and keep l") {
    RatMatrix A(2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 3;
    A.at(1, 1) = 2;
    auto g = GramForm::from_rational(RatMatrix::identity(2));
    System one{LatticeSystem::make(A, {}, g), "f"};
    System two{LatticeSystem::make(A * A, {}, g), "ff"};
    auto s1 = system_spectral(one), s2 = system_spectral(two);
    CHECK(s2.delta.overlaps(s1.delta.square()));
    CHECK(s2.l == s1.l);

    auto w1 = seeded_wehler({0, 1, 2});
    auto w2 = seeded_wehler({0, 1, 2, 0, 1, 2});
    auto sw1 = system_spectral(System{w1, "w"});
    auto sw2 = system_spectral(System{w2, "ww"});
    CHECK(sw2.delta.overlaps(sw1.delta.square()));
    CHECK(sw2.l == sw1.l);
}

TEST_CASE("p1 degree growth tracks d^n within fitted constants") {
    auto f = P1Morphism::validate(bf({-1, 0, 1}), bf({1, 0, 0})); // z^2 - 1
    System sys{f, "f"};
    SystemPoint P{p1(3, 2)};
    double h0 = weil_height(p1(3, 2)).value.midpoint_d();
    double c = 2.0;
    double dn = 1;
    for (int n = 1; n <= 8; ++n) {
        P = apply_system(sys, P);
        dn *= 2;
        double h = weil_height(std::get<ProjectivePoint>(P)).value.midpoint_d();
        CHECK(h <= dn * (h0 + c));
        CHECK(h >= dn * (h0 - c));
    }
}
