#include "heightlab/poly.hpp"

#include <sstream>

#include "heightlab/errors.hpp"

namespace heightlab {

RatPoly::RatPoly(RatVector coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void RatPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RatPoly RatPoly::constant(const BigRat& c) { return RatPoly(RatVector{c}); }

RatPoly RatPoly::variable() { return RatPoly(RatVector{BigRat(0), BigRat(1)}); }

RatPoly RatPoly::monomial(const BigRat& c, size_t k) {
    RatVector v(k + 1, BigRat(0));
    v[k] = c;
    return RatPoly(std::move(v));
}

bool RatPoly::is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }

const BigRat& RatPoly::operator[](size_t i) const {
    static const BigRat zero(0);
    return i < coeffs_.size() ? coeffs_[i] : zero;
}

const BigRat& RatPoly::leading() const {
    if (is_zero()) fail(errc::internal, "leading coefficient of zero polynomial");
    return coeffs_.back();
}

bool RatPoly::is_monic() const { return !is_zero() && coeffs_.back() == 1; }

RatPoly RatPoly::operator+(const RatPoly& o) const {
    RatVector v(std::max(coeffs_.size(), o.coeffs_.size()), BigRat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator-(const RatPoly& o) const { return *this + (-o); }

RatPoly RatPoly::operator-() const {
    RatVector v(coeffs_);
    for (auto& c : v) c = -c;
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (is_zero() || o.is_zero()) return RatPoly();
    RatVector v(coeffs_.size() + o.coeffs_.size() - 1, BigRat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
    return RatPoly(std::move(v));
}

RatPoly RatPoly::operator*(const BigRat& c) const {
    RatVector v(coeffs_);
    for (auto& x : v) x *= c;
    return RatPoly(std::move(v));
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& o) const {
    if (o.is_zero()) fail(errc::internal, "polynomial division by zero");
    RatVector rem(coeffs_);
    int dq = (int)coeffs_.size() - (int)o.coeffs_.size();
    if (dq < 0) return {RatPoly(), *this};
    RatVector quo(dq + 1, BigRat(0));
    const BigRat& lead = o.coeffs_.back();
    for (int k = dq; k >= 0; --k) {
        BigRat c = rem[k + o.coeffs_.size() - 1] / lead;
        quo[k] = c;
        if (c == 0) continue;
        for (size_t i = 0; i < o.coeffs_.size(); ++i) rem[k + i] -= c * o.coeffs_[i];
    }
    return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

bool RatPoly::divides(const RatPoly& o) const {
    if (is_zero()) return o.is_zero();
    return o.divmod(*this).second.is_zero();
}

RatPoly RatPoly::derivative() const {
    if (coeffs_.size() <= 1) return RatPoly();
    RatVector v(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * BigRat((long)i);
    return RatPoly(std::move(v));
}

RatPoly RatPoly::monic() const {
    if (is_zero()) return *this;
    return *this * (BigRat(1) / leading());
}

RatPoly RatPoly::reversed() const {
    RatVector v(coeffs_.rbegin(), coeffs_.rend());
    return RatPoly(std::move(v));
}

RatPoly RatPoly::compose_neg() const {
    RatVector v(coeffs_);
    for (size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
    return RatPoly(std::move(v));
}

RatPoly RatPoly::pow(unsigned long e) const {
    RatPoly acc = RatPoly::constant(BigRat(1));
    RatPoly base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

BigRat RatPoly::eval(const BigRat& x) const {
    BigRat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<BigRat, std::vector<BigInt>> RatPoly::primitive_integer() const {
    if (is_zero()) return {BigRat(0), {}};
    BigInt den(1);
    for (const auto& c : coeffs_) den = lcm(den, BigInt(c.get_den()));
    std::vector<BigInt> z(coeffs_.size());
    BigInt content(0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        z[i] = BigInt(coeffs_[i].get_num()) * (den / BigInt(coeffs_[i].get_den()));
        content = gcd(content, z[i]);
    }
    if (z.back() < 0) content = -content;
    for (auto& c : z) c /= content;
    BigRat scale(content, den);
    scale.canonicalize();
    return {scale, z};
}

std::string RatPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const BigRat& c = coeffs_[i];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        BigRat a = abs(c);
        if (a != 1 || i == 0) os << heightlab::to_string(a);
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

RatPoly lcm(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    RatPoly g = gcd(a, b);
    return (a * b).divmod(g).first.monic();
}

} // namespace heightlab
