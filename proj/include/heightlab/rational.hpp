#ifndef HEIGHTLAB_RATIONAL_HPP
#define HEIGHTLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heightlab/errors.hpp"

namespace heightlab {

// GMP carries the arbitrary-precision integer/rational plumbing; mpq_class is
// always kept canonical (gcd 1, positive denominator) by GMP itself.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt abs(const BigInt& a) {
    BigInt r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline BigRat abs(const BigRat& a) {
    BigRat r;
    mpq_abs(r.get_mpq_t(), a.get_mpq_t());
    return r;
}

inline BigInt pow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigRat pow(const BigRat& base, unsigned long e) {
    BigRat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
    return r;
}

// Decimal digit count of |n|; the orbit height budget is expressed in digits.
inline size_t digit_count(const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 10); }

inline bool is_square(const BigInt& n, BigInt* root = nullptr) {
    if (n < 0) return false;
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

// Parses "p/q" or "p" (decimal, optional sign). Rejects everything else; the
// CLI schema serializes all rationals this way.
inline BigRat parse_rational(const std::string& s) {
    if (s.empty()) fail(errc::invalid_input, "empty rational literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || ((c == '-' || c == '+') && (i == 0 || s[i - 1] == '/'));
        if (!ok) fail(errc::invalid_input, "bad rational literal: '" + s + "'");
    }
    BigRat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        fail(errc::invalid_input, "bad rational literal: '" + s + "'");
    if (q.get_den() == 0) fail(errc::invalid_input, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const BigInt& n) { return n.get_str(); }

inline std::string to_string(const BigRat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

using RatVector = std::vector<BigRat>;

} // namespace heightlab

#endif
