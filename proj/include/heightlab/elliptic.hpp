#ifndef HEIGHTLAB_ELLIPTIC_HPP
#define HEIGHTLAB_ELLIPTIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "heightlab/forms.hpp"
#include "heightlab/matrix.hpp"
#include "heightlab/projective.hpp"

namespace heightlab {

struct EPoint {
    bool infinity = true;
    BigRat x, y;

    static EPoint O() { return EPoint{}; }
    static EPoint affine(const BigRat& x, const BigRat& y) { return EPoint{false, x, y}; }
    bool operator==(const EPoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
    std::string key() const;
};

// Long Weierstrass curve over Q. Heights assume the model is minimal at the
// primes of singular reduction when the local backend is used; the built-in
// corpus keeps to globally minimal models.
class EllipticCurve {
  public:
    EllipticCurve(const BigRat& a1, const BigRat& a2, const BigRat& a3, const BigRat& a4,
                  const BigRat& a6); // errors: invalid_input (singular)

    BigRat a1, a2, a3, a4, a6;
    BigRat b2, b4, b6, b8, c4, discriminant;

    bool is_integral() const;
    // (x, y) -> (u^2 x, u^3 y) isomorphism onto an integral model; canonical
    // heights are unchanged by it.
    EllipticCurve integral_model(BigInt& u) const;

    bool on_curve(const EPoint& P) const;
    EPoint neg(const EPoint& P) const;
    EPoint add(const EPoint& P, const EPoint& Q) const;
    EPoint dbl(const EPoint& P) const;
    EPoint mul(long m, const EPoint& P) const;

    // duplication numerator/denominator as degree-4 binary forms (integral
    // models only)
    BinaryForm duplication_num() const;
    BinaryForm duplication_den() const;

    // x-coordinate as a point of P^1 ((1:0) at infinity)
    static ProjectivePoint x_as_p1(const EPoint& P);

    // torsion iff the doubling orbit repeats within 16 steps
    bool is_torsion(const EPoint& P) const;

    std::string key() const;
};

// Backend A: certified doubling telescoping with the C_E tail bound from the
// duplication-form Bezout identities. Torsion returns exactly zero.
HeightValue neron_tate(const EllipticCurve& E, const EPoint& P, const BigRat& tolerance);

// Backend B: archimedean chart series plus exact non-archimedean local terms
// from reduction data; needs the discriminant factored (trial division to
// 10^6, 64-bit primality, explicit hints beyond). Errors: factorization_needed.
HeightValue neron_tate_local(const EllipticCurve& E, const EPoint& P, const BigRat& tolerance,
                             const std::vector<BigInt>& prime_hints = {});

// <P,Q> = (h(P+Q) - h(P) - h(Q))/2 through backend A.
BallReal nt_pairing(const EllipticCurve& E, const EPoint& P, const EPoint& Q,
                    const BigRat& tolerance);

// Neron-Tate Gram form of Q-points, or an exact rational form; the Z_f and
// lattice machinery runs on top of this.
class GramForm {
  public:
    static GramForm from_rational(const RatMatrix& gram,
                                  const std::optional<RatMatrix>& cm_action = std::nullopt,
                                  unsigned long cm_d = 0); // validates PSD + CM compatibility
    static GramForm from_balls(size_t rank, std::vector<BallReal> entries);

    size_t rank() const { return rank_; }
    bool is_rational() const { return rational_.has_value(); }
    const RatMatrix& rational() const { return *rational_; }
    const std::optional<RatMatrix>& cm_action() const { return cm_action_; }
    unsigned long cm_d() const { return cm_d_; }
    const BallReal& entry(size_t i, size_t j) const { return balls_[i * rank_ + j]; }

    BigRat apply_exact(const RatVector& v) const;  // v^T G v, rational mode
    BallReal apply(const RatVector& v) const;      // v^T G v in balls
    BallReal pair(const RatVector& v, const RatVector& w) const;

  private:
    size_t rank_ = 0;
    std::optional<RatMatrix> rational_;
    std::vector<BallReal> balls_; // row-major, always populated
    std::optional<RatMatrix> cm_action_;
    unsigned long cm_d_ = 0;
};

GramForm gram_from_points(const EllipticCurve& E, const std::vector<EPoint>& points,
                          const BigRat& tolerance);

// v^T G v: exact rational when the form is rational, certified ball otherwise.
HeightValue lattice_height(const RatVector& v, const GramForm& G);

} // namespace heightlab

#endif
