#ifndef HEIGHTLAB_CANONICAL_HPP
#define HEIGHTLAB_CANONICAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "heightlab/dynsys.hpp"

namespace heightlab {

enum class TruncationReason { budget, degenerate_fiber, converged };

std::string to_string(TruncationReason r);

struct SeriesRow {
    int n = 0;
    HeightValue h;                  // h(f^n x)
    BallReal a;                     // h_n / (delta^n n^l)
    std::optional<BigRat> a_exact;  // carried when delta and h_n are rational
};

// The table n -> h(f^n x) with the normalized column a_n; the raw material
// of every upper/lower canonical height estimate.
struct HeightSeries {
    BallReal delta;
    std::optional<BigRat> delta_exact;
    int l = 0;
    HeightValue h0;                // n = 0 row (a_0 stays undefined)
    std::vector<SeriesRow> rows;   // n = 1 .. n_max unless truncated
    TruncationReason truncation = TruncationReason::converged;
};

HeightSeries height_series(const System& sys, const SystemPoint& pt, int n_max,
                           const BigRat& height_tolerance = BigRat(1, 1000000));

enum class EstimateMode { exact_lattice, telescoped_certified, empirical };

std::string to_string(EstimateMode m);

struct CanonicalEstimate {
    BallReal limsup_est, liminf_est;
    std::optional<BigRat> limsup_exact, liminf_exact;
    EstimateMode mode = EstimateMode::empirical;
    std::optional<BallReal> error_bound;
    std::string note;
};

// Certified Call-Silverman telescoping for a polarized P^1 endomorphism: the
// tail bound comes from the per-map height-change constant.
CanonicalEstimate call_silverman(const P1Morphism& f, const ProjectivePoint& P,
                                 const BigRat& tolerance);

// Exact dominant-term limit of a_n for lattice systems; exact rationals for
// rational/quadratic dominant structures (including CM-compatible ones and
// parity-split real pairs), certified enclosures otherwise, empirical
// fallback flagged in `note` when the spectral gap defeats the exact path.
CanonicalEstimate lattice_canonical(const LatticeSystem& sys, const RatVector& v);

// Nef canonical height on a Wehler system: D+ weighted height along the
// orbit, with an empirical geometric error model (safety factor 4).
CanonicalEstimate nef_canonical_wehler(const WehlerSystem& sys, const WehlerPoint& P, int n_max);

// h(f^n x)^(1/n) at n = n_max; empirical trend, no convergence certificate.
BallReal arithmetic_degree_estimate(const System& sys, const SystemPoint& pt, int n_max,
                                    const BigRat& height_tolerance = BigRat(1, 1000000));

struct ZfKernelResult {
    std::vector<RatVector> basis;
    Certification certification = Certification::exact;
};

// Rational subspace where the dominant term dies: direct sum of the full
// non-dominant primary components and the sub-top layers of the dominant
// ones. Errors: mixed_modulus_factor when a dominant factor provably carries
// roots of distinct moduli (the kernel is not rational then).
ZfKernelResult zf_kernel(const RatMatrix& A,
                         const std::optional<std::vector<RatPoly>>& factor_hints = std::nullopt,
                         int precision_bits = 0);
ZfKernelResult zf_kernel(const CMMatrix& A,
                         const std::optional<std::vector<RatPoly>>& factor_hints = std::nullopt,
                         int precision_bits = 0);

enum class ZfMember { yes, no, undecided };

std::string to_string(ZfMember m);

struct ZfResult {
    ZfMember member = ZfMember::undecided;
    Certification certification = Certification::heuristic;
    std::optional<std::vector<RatVector>> kernel_basis;
    std::string note;
};

// Membership of v in Z_f for a lattice system, translations reduced through
// the fixed point of the affine map when it exists.
ZfResult zf_membership(const LatticeSystem& sys, const RatVector& v);

} // namespace heightlab

#endif
