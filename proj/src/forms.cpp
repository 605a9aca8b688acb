#include "heightlab/forms.hpp"

#include "heightlab/errors.hpp"
#include "heightlab/matrix.hpp"

namespace heightlab {

BigInt BinaryForm::eval(const BigInt& x, const BigInt& y) const {
    BigInt acc(0), xp(1);
    int d = degree();
    std::vector<BigInt> ypow((size_t)d + 1);
    ypow[0] = 1;
    for (int i = 1; i <= d; ++i) ypow[(size_t)i] = ypow[(size_t)i - 1] * y;
    for (int i = 0; i <= d; ++i) {
        if (c[(size_t)i] != 0) acc += c[(size_t)i] * xp * ypow[(size_t)(d - i)];
        xp *= x;
    }
    return acc;
}

BallReal BinaryForm::eval_ball(const BallReal& x, const BallReal& y, int prec) const {
    int d = degree();
    BallReal acc = BallReal::zero(prec);
    for (int i = 0; i <= d; ++i) {
        if (c[(size_t)i] == 0) continue;
        BallReal term = BallReal::exact(c[(size_t)i], prec) * x.pow_int(i) * y.pow_int(d - i);
        acc = acc + term;
    }
    return acc;
}

BigInt BinaryForm::l1_norm() const {
    BigInt n(0);
    for (const auto& a : c) n += abs(a);
    return n;
}

bool BinaryForm::is_zero() const {
    for (const auto& a : c)
        if (a != 0) return false;
    return true;
}

namespace {

// Solve for degree d-1 cofactors A, B with A*F + B*G = R * target monomial.
// Returns {R, l1(A)+l1(B)} after clearing denominators; R = 0 if singular.
std::pair<BigInt, BigInt> bezout_side(const BinaryForm& F, const BinaryForm& G, bool x_side) {
    int d = F.degree();
    size_t n = 2 * (size_t)d;
    RatMatrix M(n);
    // unknowns: a_0..a_{d-1} then b_0..b_{d-1}; equation k = coefficient of
    // x^k y^{2d-1-k} in A*F + B*G
    for (size_t i = 0; i < (size_t)d; ++i)
        for (size_t j = 0; j <= (size_t)d; ++j) {
            size_t k = i + j;
            M.at(k, i) += BigRat(F.c[j]);
            M.at(k, (size_t)d + i) += BigRat(G.c[j]);
        }
    RatVector rhs(n, BigRat(0));
    rhs[x_side ? n - 1 : 0] = 1;
    auto sol = solve(M, rhs);
    if (!sol) return {BigInt(0), BigInt(0)};
    BigInt den(1);
    for (const auto& q : *sol) den = lcm(den, BigInt(q.get_den()));
    BigInt norm(0);
    for (const auto& q : *sol) norm += abs(BigInt(q.get_num()) * (den / BigInt(q.get_den())));
    return {den, norm};
}

} // namespace

FormPairBounds form_pair_bounds(const BinaryForm& F, const BinaryForm& G) {
    if (F.degree() != G.degree() || F.degree() < 1)
        fail(errc::invalid_input, "form pair must share a positive degree");
    FormPairBounds out;
    auto [r1, n1] = bezout_side(F, G, false);
    if (r1 == 0) {
        out.resultant = 0;
        return out;
    }
    auto [r2, n2] = bezout_side(F, G, true);
    if (r2 == 0) {
        out.resultant = 0;
        return out;
    }
    out.resultant = r1;
    BigInt cu = F.l1_norm();
    if (G.l1_norm() > cu) cu = G.l1_norm();
    out.upper_arg = BigRat(cu);
    BigRat s1(n1, r1), s2(n2, r2);
    s1.canonicalize();
    s2.canonicalize();
    BigRat sprime = s1 > s2 ? s1 : s2;
    out.arch_lower_arg = sprime;
    out.gcd_modulus = abs(lcm(r1, r2));
    out.lower_arg = sprime * BigRat(out.gcd_modulus);
    out.lower_arg.canonicalize();
    return out;
}

BallReal FormPairBounds::height_change_bound(int prec) const {
    BallReal up = BallReal::log_of(upper_arg, prec);
    BallReal low = BallReal::log_of(lower_arg, prec);
    return BallReal::max(BallReal::max(up, low), BallReal::zero(prec));
}

BallReal FormPairBounds::arch_change_bound(int prec) const {
    BallReal up = BallReal::log_of(upper_arg, prec);
    BallReal low = BallReal::log_of(arch_lower_arg, prec);
    return BallReal::max(BallReal::max(up, low), BallReal::zero(prec));
}

bool forms_coprime(const BinaryForm& F, const BinaryForm& G) {
    return bezout_side(F, G, false).first != 0;
}

} // namespace heightlab
