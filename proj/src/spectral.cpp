#include "heightlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "heightlab/errors.hpp"
#include "heightlab/factor.hpp"
#include "heightlab/roots.hpp"

namespace heightlab {

std::string to_string(Certification c) {
    switch (c) {
        case Certification::exact: return "exact";
        case Certification::numeric_certified: return "numeric-certified";
        default: return "heuristic";
    }
}

namespace {

struct FactorInfo {
    RatPoly q;
    int mult;
    std::optional<QuadVal> max_mod2; // exact squared max modulus (deg <= 2)
    std::optional<QuadVal> min_mod2;
    BallReal max_mod;                // enclosure of max root modulus
    ModulusStructure structure = ModulusStructure::unknown;
    bool structure_exact = false;
};

// For monic t^2 + b t + c (or linear), fill the exact modulus data.
void fill_exact_quadratic(FactorInfo& f, int prec) {
    const RatPoly& q = f.q;
    if (q.degree() == 1) {
        BigRat r = -q[0];
        QuadVal m2 = QuadVal::rational(r * r);
        f.max_mod2 = m2;
        f.min_mod2 = m2;
        f.max_mod = m2.to_ball(prec).sqrt_nonneg();
        f.structure = ModulusStructure::all_max;
        f.structure_exact = true;
        return;
    }
    BigRat b = q[1], c = q[0];
    BigRat disc = b * b - 4 * c;
    if (disc < 0) {
        // conjugate pair: both moduli equal sqrt(c)
        QuadVal m2 = QuadVal::rational(c);
        f.max_mod2 = m2;
        f.min_mod2 = m2;
        f.max_mod = m2.to_ball(prec).sqrt_nonneg();
        f.structure = ModulusStructure::all_max;
        f.structure_exact = true;
        return;
    }
    // two real roots (-b +- sqrt(disc))/2; equal moduli exactly when b = 0.
    // max modulus^2 = (b^2+disc)/4 + (|b|/2) sqrt(disc), with sqrt(n/d)
    // rescaled to an integer radicand sqrt(n*d)/d.
    BigRat ab = abs(b);
    BigInt radicand = BigInt(disc.get_num()) * BigInt(disc.get_den());
    BigRat bcoef = (ab / 2) / BigRat(BigInt(disc.get_den()));
    QuadVal mx{(b * b + disc) / 4, bcoef, radicand};
    QuadVal mn{(b * b + disc) / 4, -bcoef, radicand};
    mx.normalize();
    mn.normalize();
    f.max_mod2 = mx;
    f.min_mod2 = mn;
    f.max_mod = mx.to_ball(prec).sqrt_nonneg();
    f.structure = (b == 0) ? ModulusStructure::all_max : ModulusStructure::mixed;
    f.structure_exact = true;
}

void fill_from_enclosures(FactorInfo& f, int prec) {
    auto roots = root_enclosures(f.q, prec);
    std::vector<BallReal> mods;
    mods.reserve(roots.size());
    for (const auto& r : roots) mods.push_back(r.abs());
    BallReal mx = mods[0];
    for (size_t i = 1; i < mods.size(); ++i) mx = BallReal::max(mx, mods[i]);
    f.max_mod = mx;
    // structure: mixed once some root is certainly below the factor maximum
    bool mixed = false, all_tight = true;
    for (const auto& m : mods) {
        if (m.certainly_lt(mx)) mixed = true;
        if (!m.overlaps(mx)) all_tight = false;
    }
    (void)all_tight;
    if (mixed) {
        f.structure = ModulusStructure::mixed;
        f.structure_exact = false; // decided via enclosures
    } else {
        f.structure = ModulusStructure::unknown;
    }
}

enum class Cmp { lt, gt, eq, unknown };

// Compare max root moduli of two factors, exact wherever possible.
Cmp compare_factors(const FactorInfo& a, const FactorInfo& b) {
    if (a.max_mod2 && b.max_mod2) {
        int c = quad_cmp(*a.max_mod2, *b.max_mod2);
        return c < 0 ? Cmp::lt : (c > 0 ? Cmp::gt : Cmp::eq);
    }
    if (a.max_mod.certainly_lt(b.max_mod)) return Cmp::lt;
    if (b.max_mod.certainly_lt(a.max_mod)) return Cmp::gt;
    // provable tie: q_b(t) = +- q_a(-t) preserves every root modulus
    RatPoly neg = a.q.compose_neg();
    if (!neg.is_monic()) neg = neg.monic();
    if (neg == b.q) return Cmp::eq;
    return Cmp::unknown;
}

SpectralData spectral_from_polys(const RatPoly& charpoly, const RatPoly& minpoly, int prec_req,
                                 const std::optional<std::vector<RatPoly>>& hints) {
    auto factors = factor_rational(minpoly, hints);
    // multiplicity bookkeeping comes with the factorization of the min poly
    SpectralData out;
    out.min_polynomial = minpoly;
    out.char_polynomial = charpoly;

    for (int prec = std::max(prec_req, default_precision_bits); prec <= max_precision_bits;
         prec *= 2) {
        std::vector<FactorInfo> info;
        for (const auto& [q, mult] : factors) {
            FactorInfo f;
            f.q = q;
            f.mult = mult;
            if (q.degree() <= 2)
                fill_exact_quadratic(f, prec);
            else
                fill_from_enclosures(f, prec);
            info.push_back(std::move(f));
        }
        // the factor with the largest upper bound must dominate or tie the rest
        size_t star = 0;
        for (size_t i = 1; i < info.size(); ++i)
            if (info[i].max_mod.hi_rat() > info[star].max_mod.hi_rat()) star = i;
        std::vector<size_t> dominant{star};
        bool resolved = true;
        bool used_enclosures = false;
        for (size_t i = 0; i < info.size() && resolved; ++i) {
            if (i == star) continue;
            Cmp c = compare_factors(info[i], info[star]);
            if (c == Cmp::unknown) resolved = false;
            else if (c == Cmp::eq) dominant.push_back(i);
            else if (c == Cmp::gt) fail(errc::internal, "max factor selection inconsistent");
            if (c == Cmp::lt && (!info[i].max_mod2 || !info[star].max_mod2)) used_enclosures = true;
        }
        if (!resolved) continue; // double the precision and retry

        out.rho = info[star].max_mod;
        out.rho_sq = info[star].max_mod2;
        int l = 0;
        out.dominant_factors.clear();
        bool dominant_structure_unknown = false;
        for (size_t i : dominant) {
            l = std::max(l, info[i].mult - 1);
            DominantFactor df;
            df.factor = info[i].q;
            df.min_poly_mult = info[i].mult;
            df.structure = info[i].structure;
            df.cert = info[i].structure_exact ? Certification::exact
                                              : Certification::numeric_certified;
            if (df.structure == ModulusStructure::unknown) dominant_structure_unknown = true;
            out.dominant_factors.push_back(std::move(df));
        }
        std::sort(out.dominant_factors.begin(), out.dominant_factors.end(),
                  [](const DominantFactor& a, const DominantFactor& b) {
                      return a.factor.coeffs() < b.factor.coeffs();
                  });
        out.jordan_exponent = l;
        (void)used_enclosures;
        // Factor-level dominance is proved either way (exact data or rigorous
        // enclosures); the certification drops only when a dominant factor's
        // internal modulus pattern stayed open.
        out.certification = dominant_structure_unknown ? Certification::numeric_certified
                                                       : Certification::exact;
        return out;
    }
    fail(errc::precision_exhausted, "modulus tie between distinct factors unresolved at max precision");
}

} // namespace

SpectralData spectral_data(const RatMatrix& M, int precision_bits,
                           const std::optional<std::vector<RatPoly>>& factor_hints) {
    if (M.dim() == 0) fail(errc::invalid_input, "spectral data of empty matrix");
    if (M.dim() > 64) fail(errc::invalid_input, "dimension beyond the supported bound");
    RatPoly cp = M.char_poly();
    RatPoly mp = M.min_poly();
    SpectralData s = spectral_from_polys(cp, mp, precision_bits, factor_hints);
    if (s.jordan_exponent + 1 > (int)M.dim()) fail(errc::internal, "jordan exponent exceeds dimension");
    return s;
}

SpectralData spectral_data(const CMMatrix& M, int precision_bits,
                           const std::optional<std::vector<RatPoly>>& factor_hints) {
    if (M.cm_d == 0 && M.omega_part.is_zero()) return spectral_data(M.real_part, precision_bits, factor_hints);
    return spectral_data(M.embed(), precision_bits, factor_hints);
}

PerronResult perron_eigenvector(const RatMatrix& M, const std::vector<RatVector>& cone_generators,
                                int precision_bits, int budget) {
    size_t n = M.dim();
    if (cone_generators.empty()) fail(errc::invalid_input, "empty cone");
    for (const auto& g : cone_generators)
        if (g.size() != n) fail(errc::invalid_input, "cone generator dimension mismatch");
    if (precision_bits <= 0) precision_bits = global_precision_bits();

    // cone membership along the run: coordinates of every iterate in the
    // (simplicial) generator basis must stay nonnegative up to the budget
    std::optional<RatMatrix> Ginv;
    if (cone_generators.size() == n) {
        RatMatrix G(n);
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) G.at(i, j) = cone_generators[j][i];
        Ginv = G.inverse();
        if (!Ginv) fail(errc::invalid_input, "cone generators must be independent");
    } else {
        fail(errc::invalid_input, "the built-in cone check needs a simplicial generator set");
    }

    RatVector v(n, BigRat(0));
    for (const auto& g : cone_generators)
        for (size_t i = 0; i < n; ++i) v[i] += g[i];
    BigRat sum(0);
    for (const auto& c : v) sum += c;
    if (sum == 0) fail(errc::invalid_input, "cone generators sum to zero");
    for (auto& c : v) c /= sum;

    BigRat tol = BigRat(1) / BigRat(BigInt(1) << (unsigned long)(precision_bits / 4));
    for (int it = 0; it < budget; ++it) {
        RatVector w = M * v;
        for (const auto& c : *Ginv * w)
            if (c < 0) fail(errc::cone_violation, "iterate left the declared cone");
        BigRat wsum(0);
        for (const auto& c : w) wsum += c;
        if (wsum == 0) fail(errc::no_convergence, "iterate left the cone interior");
        BigRat rho = wsum; // since sum(v) = 1
        BigRat res(0);
        for (size_t i = 0; i < n; ++i) {
            BigRat d = abs(w[i] - rho * v[i]);
            if (d > res) res = d;
        }
        for (auto& c : w) c /= wsum;
        v = std::move(w);
        if (res <= tol) {
            PerronResult out;
            out.eigenvector.reserve(n);
            for (const auto& c : v) out.eigenvector.push_back(BallReal::exact(c, precision_bits));
            out.residual = BallReal::exact(res, precision_bits);
            out.rho_estimate = BallReal::exact(rho, precision_bits);
            return out;
        }
    }
    fail(errc::no_convergence, "power iteration budget exceeded");
}

std::pair<double, double> growth_exponent_oracle(const RatMatrix& M, int n_max) {
    if (n_max < 8) fail(errc::invalid_input, "growth oracle needs n_max >= 8");
    // Exact powers; Frobenius norm keeps eigenvalue phases from dominating
    // the fit. A joint fit of slope and log-n coefficient is ill-conditioned
    // at this range, so l is scanned over the integer grid instead and the
    // slope refit per candidate.
    std::vector<double> ys;
    std::vector<int> ns;
    RatMatrix P = RatMatrix::identity(M.dim());
    int n0 = std::max(4, n_max / 4);
    for (int k = 1; k <= n_max; ++k) {
        P = P * M;
        if (k < n0) continue;
        BigRat frob2(0);
        for (size_t i = 0; i < M.dim(); ++i)
            for (size_t j = 0; j < M.dim(); ++j) frob2 += P.at(i, j) * P.at(i, j);
        ns.push_back(k);
        if (frob2 == 0)
            ys.push_back(-745.0); // nilpotent tail; effectively log 0
        else
            ys.push_back(0.5 * BallReal::log_of(frob2).midpoint_d());
    }
    double best_sse = 0, best_slope = 0;
    int best_l = -1;
    for (int l = 0; l <= (int)M.dim(); ++l) {
        double sx = 0, sz = 0, sxx = 0, sxz = 0, m = (double)ns.size();
        for (size_t i = 0; i < ns.size(); ++i) {
            double x = (double)ns[i];
            double z = ys[i] - l * std::log(x);
            sx += x, sz += z, sxx += x * x, sxz += x * z;
        }
        double denom = m * sxx - sx * sx;
        double slope = (m * sxz - sx * sz) / denom;
        double icept = (sz - slope * sx) / m;
        double sse = 0;
        for (size_t i = 0; i < ns.size(); ++i) {
            double x = (double)ns[i];
            double r = (ys[i] - l * std::log(x)) - (icept + slope * x);
            sse += r * r;
        }
        if (best_l < 0 || sse < best_sse) {
            best_sse = sse;
            best_slope = slope;
            best_l = l;
        }
    }
    return {best_slope, (double)best_l};
}

} // namespace heightlab
