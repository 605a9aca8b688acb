#include "heightlab/ball.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace heightlab {

static int& precision_storage() {
    static int bits = [] {
        const char* env = std::getenv("HEIGHTLAB_PRECISION_BITS");
        if (!env) return default_precision_bits;
        long v = std::strtol(env, nullptr, 10);
        if (v < 16) v = 16;
        if (v > max_precision_bits) v = max_precision_bits;
        return (int)v;
    }();
    return bits;
}

int global_precision_bits() { return precision_storage(); }

void set_global_precision_bits(int bits) {
    if (bits < 16) bits = 16;
    if (bits > max_precision_bits) bits = max_precision_bits;
    precision_storage() = bits;
}

static int pick(int prec) { return prec > 0 ? prec : global_precision_bits(); }

BallReal::BallReal() : BallReal(0) {}

BallReal::BallReal(int prec_bits) : prec_(pick(prec_bits)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

BallReal::BallReal(const BallReal& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

BallReal::BallReal(BallReal&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

BallReal& BallReal::operator=(const BallReal& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
}

BallReal& BallReal::operator=(BallReal&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

BallReal::~BallReal() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

BallReal BallReal::exact(const BigRat& q, int prec_bits) {
    BallReal r(prec_bits);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

BallReal BallReal::exact(const BigInt& n, int prec_bits) {
    BallReal r(prec_bits);
    mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
    return r;
}

BallReal BallReal::exact(long n, int prec_bits) {
    BallReal r(prec_bits);
    mpfr_set_si(r.lo_, n, MPFR_RNDD);
    mpfr_set_si(r.hi_, n, MPFR_RNDU);
    return r;
}

BallReal BallReal::from_endpoints(const BigRat& lo, const BigRat& hi, int prec_bits) {
    BallReal r(prec_bits);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

BallReal BallReal::log_of(const BigRat& q, int prec_bits) {
    if (q <= 0) fail(errc::invalid_input, "log of non-positive rational");
    BallReal r(prec_bits);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::log_of(const BigInt& n, int prec_bits) {
    if (n <= 0) fail(errc::invalid_input, "log of non-positive integer");
    BallReal r(prec_bits);
    mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
    mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::zero(int prec_bits) { return BallReal(prec_bits); }

BallReal BallReal::pi(int prec_bits) {
    BallReal r(prec_bits);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::operator+(const BallReal& o) const {
    BallReal r(prec_ > o.prec_ ? prec_ : o.prec_);
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::operator-(const BallReal& o) const {
    BallReal r(prec_ > o.prec_ ? prec_ : o.prec_);
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

BallReal BallReal::operator*(const BallReal& o) const {
    BallReal r(prec_ > o.prec_ ? prec_ : o.prec_);
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    // lower endpoint: min of the four products rounded down
    mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(t, lo_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, hi_, o.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, hi_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    // upper endpoint: max of the four rounded up
    mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(t, lo_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, hi_, o.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, hi_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

BallReal BallReal::operator/(const BallReal& o) const {
    if (o.contains_zero()) fail(errc::precision_exhausted, "interval division by enclosure of zero");
    BallReal r(prec_ > o.prec_ ? prec_ : o.prec_);
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    mpfr_div(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_div(t, lo_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, hi_, o.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, hi_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(r.hi_, lo_, o.lo_, MPFR_RNDU);
    mpfr_div(t, lo_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, hi_, o.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, hi_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

BallReal BallReal::operator-() const {
    BallReal r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

BallReal BallReal::abs() const {
    BallReal r(prec_);
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::square() const {
    BallReal r(prec_);
    if (mpfr_sgn(lo_) >= 0) {
        mpfr_mul(r.lo_, lo_, lo_, MPFR_RNDD);
        mpfr_mul(r.hi_, hi_, hi_, MPFR_RNDU);
    } else if (mpfr_sgn(hi_) <= 0) {
        mpfr_mul(r.lo_, hi_, hi_, MPFR_RNDD);
        mpfr_mul(r.hi_, lo_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 1);
        mpfr_t t;
        mpfr_init2(t, prec_);
        mpfr_mul(r.hi_, hi_, hi_, MPFR_RNDU);
        mpfr_mul(t, lo_, lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    }
    return r;
}

BallReal BallReal::log() const {
    if (mpfr_sgn(lo_) <= 0) fail(errc::precision_exhausted, "log over an enclosure touching 0");
    BallReal r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::exp() const {
    BallReal r(prec_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::sqrt_nonneg() const {
    BallReal r(prec_);
    if (mpfr_sgn(hi_) < 0) fail(errc::internal, "sqrt_nonneg of a certainly-negative enclosure");
    if (mpfr_sgn(lo_) > 0)
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    else
        mpfr_set_zero(r.lo_, 1);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::pow_int(long e) const {
    if (e == 0) return exact(1L, prec_);
    if (e < 0) return exact(1L, prec_) / pow_int(-e);
    BallReal acc = exact(1L, prec_);
    BallReal base = *this;
    unsigned long n = (unsigned long)e;
    while (n) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

BallReal BallReal::recip_root(unsigned long k) const {
    if (mpfr_sgn(lo_) <= 0) fail(errc::precision_exhausted, "k-th root over an enclosure touching 0");
    BallReal r(prec_);
#if MPFR_VERSION_MAJOR >= 4
    mpfr_rootn_ui(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_rootn_ui(r.hi_, hi_, k, MPFR_RNDU);
#else
    mpfr_root(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_root(r.hi_, hi_, k, MPFR_RNDU);
#endif
    return r;
}

BallReal BallReal::join(const BallReal& a, const BallReal& b) {
    BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::max(const BallReal& a, const BallReal& b) {
    BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::min(const BallReal& a, const BallReal& b) {
    BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

BallReal BallReal::widened(const BallReal& margin) const {
    BallReal r(prec_);
    mpfr_sub(r.lo_, lo_, margin.hi_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, margin.hi_, MPFR_RNDU);
    return r;
}

bool BallReal::contains(const BigRat& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool BallReal::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool BallReal::overlaps(const BallReal& o) const {
    return mpfr_cmp(hi_, o.lo_) >= 0 && mpfr_cmp(o.hi_, lo_) >= 0;
}

int BallReal::cmp_hi_lo(const BallReal& o) const { return mpfr_cmp(hi_, o.lo_); }

bool BallReal::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool BallReal::certainly_negative() const { return mpfr_sgn(hi_) < 0; }

bool BallReal::is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

double BallReal::midpoint_d() const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

double BallReal::radius_d() const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_sub(m, hi_, lo_, MPFR_RNDU);
    mpfr_div_2ui(m, m, 1, MPFR_RNDU);
    double d = mpfr_get_d(m, MPFR_RNDU);
    mpfr_clear(m);
    return d;
}

double BallReal::lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double BallReal::hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

static BigRat mpfr_to_rat(const mpfr_t x) {
    if (!mpfr_number_p(x)) fail(errc::internal, "non-finite endpoint");
    if (mpfr_zero_p(x)) return BigRat(0);
    mpz_t num;
    mpz_init(num);
    mpfr_exp_t e = mpfr_get_z_2exp(num, x);
    mpz_class mantissa(num);
    mpz_clear(num);
    BigRat r{mantissa};
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, (unsigned long)e);
        r *= BigRat(p);
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, (unsigned long)(-e));
        r /= BigRat(p);
    }
    r.canonicalize();
    return r;
}

BigRat BallReal::lo_rat() const { return mpfr_to_rat(lo_); }
BigRat BallReal::hi_rat() const { return mpfr_to_rat(hi_); }

std::string BallReal::midpoint_str(int sig_digits) const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    char buf[256];
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", sig_digits, m);
    mpfr_clear(m);
    return buf;
}

std::string BallReal::to_string(int sig_digits) const {
    char buf[512];
    mpfr_snprintf(buf, sizeof buf, "[%.*Rg, %.*Rg]", sig_digits, lo_, sig_digits, hi_);
    return buf;
}

bool ComplexBall::strictly_contains(const ComplexBall& o) const {
    return re.lo_rat() < o.re.lo_rat() && o.re.hi_rat() < re.hi_rat() &&
           im.lo_rat() < o.im.lo_rat() && o.im.hi_rat() < im.hi_rat();
}

} // namespace heightlab
