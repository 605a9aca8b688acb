#ifndef HEIGHTLAB_ROOTS_HPP
#define HEIGHTLAB_ROOTS_HPP

#include <vector>

#include "heightlab/ball.hpp"
#include "heightlab/poly.hpp"

namespace heightlab {

// One certified enclosure per root of a squarefree polynomial: pairwise
// disjoint rectangles, real roots pinned to the axis (imaginary part exactly
// zero), radii at most 2^(-precision_bits/2) * (1 + |midpoint|).
// Real roots come from exact Sturm bisection; nonreal roots from a floating
// start refined and certified by interval Newton. Errors: precision_exhausted.
std::vector<ComplexBall> root_enclosures(const RatPoly& p, int precision_bits);

// Number of real roots in (a, b] by Sturm's theorem (exact).
int sturm_count(const RatPoly& p, const BigRat& a, const BigRat& b);

// Enclosure of max |root| over all roots of p (p squarefree).
BallReal max_root_modulus(const RatPoly& p, int precision_bits);

} // namespace heightlab

#endif
