#ifndef HEIGHTLAB_QUAD_HPP
#define HEIGHTLAB_QUAD_HPP

#include "heightlab/ball.hpp"
#include "heightlab/rational.hpp"

namespace heightlab {

// Exact real value a + b*sqrt(d) with d >= 0. Root moduli of degree <= 2
// factors live here, which is what makes modulus ties provable instead of a
// precision fight.
struct QuadVal {
    BigRat a;
    BigRat b;
    BigInt d; // radicand, >= 0

    static QuadVal rational(const BigRat& r) { return {r, BigRat(0), BigInt(0)}; }
    bool is_rational() const { return b == 0 || d == 0; }
    BigRat rational_value() const { return b == 0 || d == 0 ? a : BigRat(0); }
    void normalize(); // absorb square radicands, zero out degenerate parts

    QuadVal operator*(const BigRat& c) const { return {a * c, b * c, d}; }
    BallReal to_ball(int prec_bits = 0) const;
};

// Exact sign of (a + b*sqrt(d1)) - (e + f*sqrt(d2)); -1, 0, or +1.
int quad_cmp(const QuadVal& x, const QuadVal& y);

} // namespace heightlab

#endif
