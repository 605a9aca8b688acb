#ifndef HEIGHTLAB_PROJECTIVE_HPP
#define HEIGHTLAB_PROJECTIVE_HPP

#include <optional>
#include <string>
#include <vector>

#include "heightlab/ball.hpp"
#include "heightlab/rational.hpp"

namespace heightlab {

// Canonical primitive-integer homogeneous coordinates: gcd one, first nonzero
// coordinate positive. The universal exact point representation.
class ProjectivePoint {
  public:
    static ProjectivePoint normalize(const RatVector& raw); // errors: invalid_input (all zero)
    static ProjectivePoint from_integers(std::vector<BigInt> coords);

    const std::vector<BigInt>& coords() const { return coords_; }
    size_t dimension() const { return coords_.size() - 1; } // n for P^n
    bool operator==(const ProjectivePoint& o) const { return coords_ == o.coords_; }
    bool operator!=(const ProjectivePoint& o) const { return !(*this == o); }

    std::string key() const; // canonical encoding, also the display form

  private:
    ProjectivePoint() = default;
    std::vector<BigInt> coords_;
};

// Every height is one of these: a certified log-scale ball, with the exact
// integer core (max |coordinate|) kept when the height is a Weil height, and
// the exact rational value kept when the height is a lattice quadratic form.
struct HeightValue {
    BallReal value;
    std::optional<BigInt> exact_core;
    std::optional<BigRat> exact_value;

    static HeightValue from_core(const BigInt& core, int prec_bits = 0);
    static HeightValue from_rational(const BigRat& v, int prec_bits = 0);
    static HeightValue zero();
};

// log max |coord_i| of a normalized point.
HeightValue weil_height(const ProjectivePoint& P);

// All (p:q) in P^1(Q) with max(|p|,|q|) <= B, canonical, no duplicates.
std::vector<ProjectivePoint> enumerate_p1_points(long B);

} // namespace heightlab

#endif
