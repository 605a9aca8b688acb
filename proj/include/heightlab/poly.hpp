#ifndef HEIGHTLAB_POLY_HPP
#define HEIGHTLAB_POLY_HPP

#include <string>
#include <vector>

#include "heightlab/rational.hpp"

namespace heightlab {

// Dense univariate polynomial over Q, coefficients ascending. The zero
// polynomial has an empty coefficient list and degree -1.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(RatVector coeffs);
    static RatPoly constant(const BigRat& c);
    static RatPoly variable(); // t
    static RatPoly monomial(const BigRat& c, size_t k);

    int degree() const { return (int)coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const;
    const RatVector& coeffs() const { return coeffs_; }
    const BigRat& operator[](size_t i) const;
    const BigRat& leading() const;
    bool is_monic() const;

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator*(const BigRat& c) const;
    RatPoly operator-() const;
    bool operator==(const RatPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const RatPoly& o) const { return !(*this == o); }

    // Exact Euclidean division; quotient and remainder with deg r < deg o.
    std::pair<RatPoly, RatPoly> divmod(const RatPoly& o) const;
    bool divides(const RatPoly& o) const; // this | o
    RatPoly derivative() const;
    RatPoly monic() const;
    RatPoly reversed() const;             // t^deg * p(1/t)
    RatPoly compose_neg() const;          // p(-t)
    RatPoly pow(unsigned long e) const;

    BigRat eval(const BigRat& x) const;

    // Primitive integer model: c * P with P in Z[t], content 1, positive lead.
    std::pair<BigRat, std::vector<BigInt>> primitive_integer() const;

    std::string to_string(const std::string& var = "t") const;

  private:
    void trim();
    RatVector coeffs_;
};

RatPoly gcd(const RatPoly& a, const RatPoly& b); // monic gcd
RatPoly lcm(const RatPoly& a, const RatPoly& b);

} // namespace heightlab

#endif
