#include "heightlab/quad.hpp"

#include "heightlab/errors.hpp"

namespace heightlab {

void QuadVal::normalize() {
    if (d == 0) b = 0;
    if (b == 0) {
        d = 0;
        return;
    }
    BigInt root;
    if (is_square(d, &root)) {
        a += b * BigRat(root);
        b = 0;
        d = 0;
    }
}

BallReal QuadVal::to_ball(int prec_bits) const {
    BallReal r = BallReal::exact(a, prec_bits);
    if (b != 0 && d != 0)
        r = r + BallReal::exact(b, prec_bits) * BallReal::exact(d, prec_bits).sqrt_nonneg();
    return r;
}

namespace {

int sgn(const BigRat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// sign of A + B*sqrt(D), D >= 0 not a perfect square when B != 0
int sign_one_radical(const BigRat& A, const BigRat& B, const BigInt& D) {
    if (B == 0 || D == 0) return sgn(A);
    if (A == 0) return sgn(B);
    int sa = sgn(A), sb = sgn(B);
    if (sa == sb) return sa;
    // opposite signs: compare A^2 against B^2*D
    int cmp = sgn(A * A - B * B * BigRat(D));
    return cmp == 0 ? 0 : (cmp > 0 ? sa : sb);
}

} // namespace

int quad_cmp(const QuadVal& xin, const QuadVal& yin) {
    QuadVal x = xin, y = yin;
    x.normalize();
    y.normalize();
    BigRat A = x.a - y.a;
    // reduce to sign of A + B*sqrt(D1) + C*sqrt(D2)
    BigRat B = x.b, C = -y.b;
    BigInt D1 = x.d, D2 = y.d;
    if (B == 0) return sign_one_radical(A, C, D2);
    if (C == 0) return sign_one_radical(A, B, D1);
    if (D1 == D2) return sign_one_radical(A, B + C, D1);
    // exact-zero test first: A + B*sqrt(D1) = -C*sqrt(D2) squared gives
    // 2AB*sqrt(D1) = C^2 D2 - A^2 - B^2 D1, decidable in Q
    bool is_zero = false;
    {
        BigRat E = C * C * BigRat(D2) - A * A - B * B * BigRat(D1);
        BigRat AB2 = 2 * A * B;
        if (AB2 == 0) {
            // A = 0 (B != 0): B*sqrt(D1) = -C*sqrt(D2): squares must match and signs oppose
            is_zero = (A == 0) && (B * B * BigRat(D1) == C * C * BigRat(D2)) && (sgn(B) == -sgn(C));
        } else {
            // sqrt(D1) = E / 2AB must hold as rationals
            BigRat cand = E / AB2;
            is_zero = cand > 0 && cand * cand == BigRat(D1) &&
                      sign_one_radical(A + cand * B, C, D2) == 0;
        }
    }
    if (is_zero) return 0;
    // nonzero: refine rigorous enclosures until they separate
    for (int prec = 128; prec <= max_precision_bits; prec *= 2) {
        BallReal bx = x.to_ball(prec), by = y.to_ball(prec);
        if (bx.certainly_lt(by)) return -1;
        if (by.certainly_lt(bx)) return 1;
    }
    fail(errc::precision_exhausted, "quadratic comparison did not separate");
}

} // namespace heightlab
