#ifndef HEIGHTLAB_FORMS_HPP
#define HEIGHTLAB_FORMS_HPP

#include <utility>
#include <vector>

#include "heightlab/ball.hpp"
#include "heightlab/rational.hpp"

namespace heightlab {

// Integer binary form of degree d: c[i] multiplies x^i y^(d-i).
struct BinaryForm {
    std::vector<BigInt> c;

    int degree() const { return (int)c.size() - 1; }
    BigInt eval(const BigInt& x, const BigInt& y) const;
    BallReal eval_ball(const BallReal& x, const BallReal& y, int prec) const;
    BigInt l1_norm() const;
    bool is_zero() const;
};

// Bezout data for a coprime pair (F, G) of equal-degree forms: an exact
// resultant-scale integer R with cofactor identities
//   A*F + B*G = R * y^(2d-1)   and   A2*F + B2*G = R2 * x^(2d-1),
// from which certified two-sided height-change bounds follow:
//   d*h(P) - lower <= h((F:G)(P)) <= d*h(P) + upper.
struct FormPairBounds {
    BigInt resultant;     // R (the y-side scale; zero iff the forms share a root)
    BigInt gcd_modulus;   // lcm(|R|,|R2|); gcd(F(p,q), G(p,q)) divides it
    BigRat upper_arg;     // C_u: h <= d*h + log(upper_arg)
    BigRat lower_arg;     // S' * gcd_modulus: h >= d*h - log(lower_arg)
    BigRat arch_lower_arg; // S' only: gcd does not act at the archimedean place

    // C with |h(image) - d*h| <= C, as a certified enclosure.
    BallReal height_change_bound(int prec) const;
    // same for the archimedean increment of the local-height series
    BallReal arch_change_bound(int prec) const;
};

// Computes the identities by exact linear algebra on the Sylvester system.
// resultant == 0 (common projective root) is reported via the struct, the
// bounds are then meaningless.
FormPairBounds form_pair_bounds(const BinaryForm& F, const BinaryForm& G);

// Exact resultant sign test only (cheaper interface for validation).
bool forms_coprime(const BinaryForm& F, const BinaryForm& G);

} // namespace heightlab

#endif
