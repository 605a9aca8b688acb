#ifndef HEIGHTLAB_BALL_HPP
#define HEIGHTLAB_BALL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "heightlab/rational.hpp"

namespace heightlab {

// Bits of working precision used when a caller does not say otherwise; the
// retry ladder doubles up to max_precision_bits and then gives up loudly.
inline constexpr int default_precision_bits = 128;
inline constexpr int max_precision_bits = 4096;

int global_precision_bits(); // default, overridable via HEIGHTLAB_PRECISION_BITS
void set_global_precision_bits(int bits);

// Certified real enclosure [lo, hi] with outward-rounded arithmetic: every
// operation returns an interval containing the exact result. Exposed as a
// midpoint/radius ball where convenient.
class BallReal {
  public:
    BallReal();
    explicit BallReal(int prec_bits);
    BallReal(const BallReal& o);
    BallReal(BallReal&& o) noexcept;
    BallReal& operator=(const BallReal& o);
    BallReal& operator=(BallReal&& o) noexcept;
    ~BallReal();

    static BallReal exact(const BigRat& q, int prec_bits = 0);
    static BallReal exact(const BigInt& n, int prec_bits = 0);
    static BallReal exact(long n, int prec_bits = 0);
    static BallReal from_endpoints(const BigRat& lo, const BigRat& hi, int prec_bits = 0);
    static BallReal log_of(const BigRat& q, int prec_bits = 0);    // q > 0
    static BallReal log_of(const BigInt& n, int prec_bits = 0);    // n > 0
    static BallReal zero(int prec_bits = 0);
    static BallReal pi(int prec_bits = 0);

    int precision_bits() const { return prec_; }

    BallReal operator+(const BallReal& o) const;
    BallReal operator-(const BallReal& o) const;
    BallReal operator*(const BallReal& o) const;
    BallReal operator/(const BallReal& o) const; // o must not contain 0
    BallReal operator-() const;
    BallReal& operator+=(const BallReal& o) { return *this = *this + o; }
    BallReal& operator-=(const BallReal& o) { return *this = *this - o; }
    BallReal& operator*=(const BallReal& o) { return *this = *this * o; }
    BallReal& operator/=(const BallReal& o) { return *this = *this / o; }

    BallReal abs() const;
    BallReal square() const;       // tight: knows both operands coincide
    BallReal log() const;          // requires lo > 0
    BallReal exp() const;
    BallReal sqrt_nonneg() const;  // enclosure of sqrt for a value known >= 0
    BallReal pow_int(long e) const;
    BallReal recip_root(unsigned long k) const; // x^(1/k), requires lo > 0

    static BallReal join(const BallReal& a, const BallReal& b); // convex hull
    static BallReal max(const BallReal& a, const BallReal& b);
    static BallReal min(const BallReal& a, const BallReal& b);
    BallReal widened(const BallReal& margin) const; // [lo-m.hi, hi+m.hi]

    bool contains(const BigRat& q) const;
    bool contains_zero() const;
    bool overlaps(const BallReal& o) const;
    bool certainly_lt(const BallReal& o) const { return cmp_hi_lo(o) < 0; }
    bool certainly_gt(const BallReal& o) const { return o.certainly_lt(*this); }
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool is_finite() const;

    double midpoint_d() const;
    double radius_d() const;
    double lo_d() const; // rounded down
    double hi_d() const; // rounded up
    BigRat lo_rat() const;
    BigRat hi_rat() const;

    // Deterministic decimal rendering of the midpoint, plus "[lo, hi]" dumps.
    std::string midpoint_str(int sig_digits = 17) const;
    std::string to_string(int sig_digits = 10) const;

  private:
    int cmp_hi_lo(const BallReal& o) const; // sign of (this->hi - o.lo)
    mpfr_t lo_, hi_;
    int prec_;
};

// Rectangular complex enclosure; the root certifier only needs rectangles.
struct ComplexBall {
    BallReal re, im;

    ComplexBall() = default;
    ComplexBall(BallReal r, BallReal i) : re(std::move(r)), im(std::move(i)) {}

    ComplexBall operator+(const ComplexBall& o) const { return {re + o.re, im + o.im}; }
    ComplexBall operator-(const ComplexBall& o) const { return {re - o.re, im - o.im}; }
    ComplexBall operator*(const ComplexBall& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    ComplexBall operator/(const ComplexBall& o) const {
        BallReal n = o.abs2(); // must not contain 0
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    BallReal abs2() const { return re.square() + im.square(); }
    BallReal abs() const { return abs2().sqrt_nonneg(); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool disjoint_from(const ComplexBall& o) const {
        return !re.overlaps(o.re) || !im.overlaps(o.im);
    }
    // True if o lies strictly inside this rectangle.
    bool strictly_contains(const ComplexBall& o) const;
};

} // namespace heightlab

#endif
