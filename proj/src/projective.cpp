#include "heightlab/projective.hpp"

#include <sstream>

#include "heightlab/errors.hpp"

namespace heightlab {

ProjectivePoint ProjectivePoint::normalize(const RatVector& raw) {
    if (raw.empty()) fail(errc::invalid_input, "empty coordinate list");
    BigInt den(1);
    for (const auto& c : raw) den = lcm(den, BigInt(c.get_den()));
    std::vector<BigInt> z(raw.size());
    BigInt g(0);
    for (size_t i = 0; i < raw.size(); ++i) {
        z[i] = BigInt(raw[i].get_num()) * (den / BigInt(raw[i].get_den()));
        g = gcd(g, z[i]);
    }
    if (g == 0) fail(errc::invalid_input, "all coordinates are zero");
    for (const auto& c : z)
        if (c != 0) {
            if (c < 0) g = -g;
            break;
        }
    for (auto& c : z) c /= g;
    ProjectivePoint p;
    p.coords_ = std::move(z);
    return p;
}

ProjectivePoint ProjectivePoint::from_integers(std::vector<BigInt> coords) {
    RatVector raw(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) raw[i] = BigRat(coords[i]);
    return normalize(raw);
}

std::string ProjectivePoint::key() const {
    std::ostringstream os;
    for (size_t i = 0; i < coords_.size(); ++i) os << (i ? ":" : "") << coords_[i].get_str();
    return os.str();
}

HeightValue HeightValue::from_core(const BigInt& core, int prec_bits) {
    HeightValue h;
    h.exact_core = core;
    h.value = core == 1 ? BallReal::zero(prec_bits) : BallReal::log_of(core, prec_bits);
    return h;
}

HeightValue HeightValue::from_rational(const BigRat& v, int prec_bits) {
    HeightValue h;
    h.exact_value = v;
    h.value = BallReal::exact(v, prec_bits);
    return h;
}

HeightValue HeightValue::zero() {
    HeightValue h;
    h.exact_core = BigInt(1);
    h.exact_value = BigRat(0);
    h.value = BallReal::zero();
    return h;
}

HeightValue weil_height(const ProjectivePoint& P) {
    BigInt core(0);
    for (const auto& c : P.coords()) {
        BigInt a = abs(c);
        if (a > core) core = a;
    }
    return HeightValue::from_core(core);
}

std::vector<ProjectivePoint> enumerate_p1_points(long B) {
    if (B < 1) fail(errc::invalid_input, "height bound must be at least 1");
    std::vector<ProjectivePoint> out;
    out.push_back(ProjectivePoint::from_integers({BigInt(1), BigInt(0)}));
    for (long p = -B; p <= B; ++p)
        for (long q = 1; q <= B; ++q) {
            if (gcd(BigInt(p), BigInt(q)) != 1) continue;
            out.push_back(ProjectivePoint::from_integers({BigInt(p), BigInt(q)}));
        }
    return out;
}

} // namespace heightlab
