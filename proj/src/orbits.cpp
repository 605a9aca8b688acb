#include "heightlab/orbits.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

constexpr size_t orbit_digit_budget = 1000000;

// one exact step; empty optional when the orbit must truncate
std::optional<SystemPoint> step(const System& sys, const SystemPoint& p, std::string* note) {
    try {
        SystemPoint q = apply_system(sys, p);
        if (point_digits(q) > orbit_digit_budget) {
            if (note) *note = "height budget exceeded";
            return std::nullopt;
        }
        return q;
    } catch (const error& e) {
        if (e.code() == errc::degenerate_fiber) {
            if (note) *note = "degenerate fiber";
            return std::nullopt;
        }
        throw;
    }
}

} // namespace

OrbitRecord detect_preperiodic(const System& sys, const SystemPoint& start, int max_steps) {
    if (max_steps < 1) fail(errc::invalid_input, "max_steps must be at least 1");
    OrbitRecord rec;

    // Brent: race the hare from successive power-of-two teleports. Keys are
    // cached as the hare advances; the tortoise key only changes on teleport.
    std::vector<std::string> prefix{point_key(start)};
    std::string note;
    auto hare_opt = step(sys, start, &note);
    if (!hare_opt) {
        rec.keys = std::move(prefix);
        rec.truncated = true;
        rec.truncation_note = note;
        return rec;
    }
    SystemPoint hare = *hare_opt;
    std::string tortoise_key = prefix[0];
    std::string hare_key = point_key(hare);
    prefix.push_back(hare_key);
    int power = 1, lam = 1, spent = 1;
    while (tortoise_key != hare_key) {
        if (spent >= max_steps) {
            rec.truncated = true;
            rec.truncation_note = "step budget exceeded";
            break;
        }
        if (power == lam) {
            tortoise_key = hare_key;
            power *= 2;
            lam = 0;
        }
        auto next = step(sys, hare, &note);
        if (!next) {
            rec.truncated = true;
            rec.truncation_note = note;
            break;
        }
        hare = *next;
        hare_key = point_key(hare);
        prefix.push_back(hare_key);
        ++lam;
        ++spent;
    }
    if (rec.truncated) {
        rec.keys = std::move(prefix);
        return rec;
    }

    // find the tail: advance a runner lam steps ahead, then walk together
    SystemPoint a = start, b = start;
    for (int i = 0; i < lam; ++i) b = *step(sys, b, nullptr);
    int mu = 0;
    while (point_key(a) != point_key(b)) {
        a = *step(sys, a, nullptr);
        b = *step(sys, b, nullptr);
        ++mu;
        if (mu > max_steps) fail(errc::internal, "cycle tail search overran its budget");
    }
    rec.tail_length = mu;
    rec.period = lam;

    // replay: record keys through one full cycle and verify the repeat
    SystemPoint cur = start;
    rec.keys.push_back(point_key(cur));
    for (int i = 0; i < mu + 2 * lam; ++i) {
        cur = *step(sys, cur, nullptr);
        rec.keys.push_back(point_key(cur));
    }
    for (int k = 0; k + mu + lam < (int)rec.keys.size(); ++k)
        if (rec.keys[(size_t)(mu + k)] != rec.keys[(size_t)(mu + k + lam)])
            fail(errc::internal, "replay failed to confirm the detected cycle");
    return rec;
}

ScanResult northcott_scan(const P1Morphism& f, long height_bound, const BigRat& tolerance,
                          int cycle_budget) {
    if (height_bound < 1) fail(errc::invalid_input, "height bound must be at least 1");
    if (tolerance <= 0) fail(errc::invalid_input, "tolerance must be positive");
    ScanResult out;
    BigRat threshold = 2 * tolerance;
    // preperiodic orbits never rise above the telescoping constant; points
    // whose orbit provably exceeds it are refuted, not anomalous
    BallReal c0 = f.bounds().height_change_bound(global_precision_bits());
    BigRat refute_bound = c0.hi_rat() / BigRat(f.degree() - 1) + threshold + 1;

    System sys{f, "scan"};
    for (const auto& P : enumerate_p1_points(height_bound)) {
        CanonicalEstimate est = call_silverman(f, P, tolerance);
        if (est.limsup_est.lo_rat() >= threshold) continue; // certainly positive height
        if (!(est.limsup_est.hi_rat() < threshold)) {
            // straddles the threshold: conservatively treat as a candidate
        }
        OrbitRecord rec = detect_preperiodic(sys, SystemPoint{P}, cycle_budget);
        if (rec.period) {
            out.confirmed.push_back(P);
            continue;
        }
        // refute through the orbit height bound when possible
        bool refuted = false;
        SystemPoint cur{P};
        for (int i = 0; i < cycle_budget && !refuted; ++i) {
            auto next = step(sys, cur, nullptr);
            if (!next) break;
            cur = *next;
            HeightValue h = weil_height(std::get<ProjectivePoint>(cur));
            if (h.value.lo_rat() > refute_bound) refuted = true;
        }
        if (!refuted) out.anomalies.push_back(P);
    }
    return out;
}

namespace {

struct OrbitKeys {
    std::vector<std::string> keys;
    bool truncated = false;
};

OrbitKeys orbit_keys(const System& sys, const SystemPoint& start, int N) {
    OrbitKeys out;
    SystemPoint cur = start;
    out.keys.push_back(point_key(cur));
    for (int n = 1; n <= N; ++n) {
        auto next = step(sys, cur, nullptr);
        if (!next) {
            out.truncated = true;
            break;
        }
        cur = *next;
        out.keys.push_back(point_key(cur));
    }
    return out;
}

} // namespace

IntersectionReport orbit_intersection(const System& f, const SystemPoint& x, const System& g,
                                      const SystemPoint& y, int N) {
    if (N < 1) fail(errc::invalid_input, "N must be at least 1");
    IntersectionReport rep;
    OrbitKeys of = orbit_keys(f, x, N);
    OrbitKeys og = orbit_keys(g, y, N);
    rep.truncated_f = of.truncated;
    rep.truncated_g = og.truncated;
    rep.length_f = (int)of.keys.size();
    rep.length_g = (int)og.keys.size();

    std::unordered_map<std::string, std::vector<int>> index;
    for (int n = 0; n < rep.length_f; ++n) index[of.keys[(size_t)n]].push_back(n);
    for (int m = 0; m < rep.length_g; ++m) {
        auto it = index.find(og.keys[(size_t)m]);
        if (it == index.end()) continue;
        for (int n : it->second) rep.pairs.emplace_back(n, m);
    }
    std::sort(rep.pairs.begin(), rep.pairs.end());

    // independent re-verification from scratch
    {
        OrbitKeys vf = orbit_keys(f, x, N), vg = orbit_keys(g, y, N);
        for (const auto& [n, m] : rep.pairs)
            if (vf.keys.at((size_t)n) != vg.keys.at((size_t)m))
                fail(errc::internal, "intersection pair failed recomputation");
    }

    if (!rep.pairs.empty()) {
        int gap = 0;
        for (const auto& [n, m] : rep.pairs) gap = std::max(gap, n > m ? n - m : m - n);
        rep.max_gap = gap;
    }

    // greedy AP extraction, smallest modulus first; a progression is taken
    // only when every in-range extension is itself a pair
    std::set<std::pair<int, int>> uncovered(rep.pairs.begin(), rep.pairs.end());
    std::set<std::pair<int, int>> all(rep.pairs.begin(), rep.pairs.end());
    for (int k = 1; k <= N && !uncovered.empty(); ++k) {
        std::vector<std::pair<int, int>> starts;
        for (const auto& p : uncovered)
            if (!all.count({p.first - k, p.second - k})) starts.push_back(p);
        for (const auto& s : starts) {
            if (!uncovered.count(s)) continue;
            std::vector<std::pair<int, int>> chain;
            std::pair<int, int> cur = s;
            bool complete = true;
            while (cur.first < rep.length_f && cur.second < rep.length_g) {
                if (!all.count(cur)) {
                    complete = false; // the progression would claim a non-pair
                    break;
                }
                if (!uncovered.count(cur)) {
                    complete = false; // overlaps an already-used progression
                    break;
                }
                chain.push_back(cur);
                cur = {cur.first + k, cur.second + k};
            }
            if (complete && chain.size() >= 2) {
                rep.ap_decomposition.push_back({k, s.first, s.second});
                for (const auto& p : chain) uncovered.erase(p);
            }
        }
    }
    rep.residual_pairs.assign(uncovered.begin(), uncovered.end());
    return rep;
}

GapBoundResult gap_bound_check(const System& f, const SystemPoint& x, const System& g,
                               const SystemPoint& y, int N) {
    if (N < 1) fail(errc::invalid_input, "N must be at least 1");
    GapBoundResult out;
    SystemSpectral sf = system_spectral(f), sg = system_spectral(g);
    bool delta_match = sf.delta_exact && sg.delta_exact ? *sf.delta_exact == *sg.delta_exact
                                                        : sf.delta.overlaps(sg.delta);
    if (!delta_match || sf.l != sg.l) {
        out.hypothesis_ok = false;
        out.note = "HypothesisFailed: (delta, l) pairs differ";
        return out;
    }
    if (!sf.delta.certainly_gt(BallReal::exact(1L))) {
        out.hypothesis_ok = false;
        out.note = "HypothesisFailed: delta must exceed 1";
        return out;
    }
    out.hypothesis_ok = true;
    std::optional<int> gap;
    bool stable = true;
    for (int scale = 1; scale <= 4; scale *= 2) {
        IntersectionReport rep = orbit_intersection(f, x, g, y, N * scale);
        std::optional<int> this_gap = rep.max_gap;
        if (scale == 1)
            gap = this_gap;
        else if (gap != this_gap)
            stable = false;
    }
    if (!stable) {
        out.note = "max gap did not stabilize over the doubling schedule";
        return out;
    }
    out.stable_gap = gap ? gap : std::optional<int>(0);
    if (!gap) out.note = "orbits never met; the gap bound holds vacuously";
    return out;
}

} // namespace heightlab
