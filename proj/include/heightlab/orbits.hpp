#ifndef HEIGHTLAB_ORBITS_HPP
#define HEIGHTLAB_ORBITS_HPP

#include <optional>
#include <string>
#include <vector>

#include "heightlab/canonical.hpp"
#include "heightlab/dynsys.hpp"

namespace heightlab {

struct OrbitRecord {
    std::vector<std::string> keys;   // canonical encodings x, f x, f^2 x, ...
    std::optional<int> tail_length;  // minimal preperiod when a cycle was found
    std::optional<int> period;       // minimal period
    bool truncated = false;
    std::string truncation_note;
};

// Brent cycle detection over exact canonical encodings; minimal tail and
// period verified by replay. Degenerate fibers and the height budget truncate.
OrbitRecord detect_preperiodic(const System& sys, const SystemPoint& start, int max_steps);

struct ScanResult {
    std::vector<ProjectivePoint> confirmed;  // cycle-verified preperiodic points
    std::vector<ProjectivePoint> anomalies;  // low canonical height, unconfirmed in budget
};

// Enumerate P^1 points up to the bound, filter by a Call-Silverman upper
// bound, confirm candidates by exact cycle detection.
ScanResult northcott_scan(const P1Morphism& f, long height_bound, const BigRat& tolerance,
                          int cycle_budget = 256);

struct IntersectionReport {
    std::vector<std::pair<int, int>> pairs;  // (n, m) with f^n x = g^m y
    std::optional<int> max_gap;              // max |n - m|, empty when no pairs
    // arithmetic progressions (k, i, j) covering {(k t + i, k t + j)}
    std::vector<std::array<int, 3>> ap_decomposition;
    std::vector<std::pair<int, int>> residual_pairs;
    bool truncated_f = false, truncated_g = false;
    int length_f = 0, length_g = 0;          // orbit entries actually computed
};

// Exact join of two orbits up to length N with greedy smallest-modulus AP
// extraction; every pair re-verified by independent recomputation.
IntersectionReport orbit_intersection(const System& f, const SystemPoint& x, const System& g,
                                      const SystemPoint& y, int N);

struct GapBoundResult {
    bool hypothesis_ok = false;     // (delta, l) pairs match
    std::optional<int> stable_gap;  // stabilized max |n - m| over the doubling schedule
    std::string note;
};

// Checks the equal-(delta, l) hypothesis, then asserts the max gap stays
// stable as N doubles. Errors: none (failures are reported in the struct).
GapBoundResult gap_bound_check(const System& f, const SystemPoint& x, const System& g,
                               const SystemPoint& y, int N);

} // namespace heightlab

#endif
