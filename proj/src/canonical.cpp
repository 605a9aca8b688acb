#include "heightlab/canonical.hpp"

#include <algorithm>

#include "heightlab/errors.hpp"
#include "heightlab/factor.hpp"

namespace heightlab {

std::string to_string(TruncationReason r) {
    switch (r) {
        case TruncationReason::budget: return "budget";
        case TruncationReason::degenerate_fiber: return "degenerate_fiber";
        default: return "converged";
    }
}

std::string to_string(EstimateMode m) {
    switch (m) {
        case EstimateMode::exact_lattice: return "exact_lattice";
        case EstimateMode::telescoped_certified: return "telescoped_certified";
        default: return "empirical";
    }
}

std::string to_string(ZfMember m) {
    switch (m) {
        case ZfMember::yes: return "yes";
        case ZfMember::no: return "no";
        default: return "undecided";
    }
}

// decimal-digit cap on orbit coordinates
static constexpr size_t orbit_digit_budget = 1000000;

HeightSeries height_series(const System& sys, const SystemPoint& pt, int n_max,
                           const BigRat& height_tolerance) {
    if (n_max < 1) fail(errc::invalid_input, "n_max must be at least 1");
    SystemSpectral sp = system_spectral(sys);
    HeightSeries out;
    out.delta = sp.delta;
    out.delta_exact = sp.delta_exact;
    out.l = sp.l;
    out.h0 = system_height(sys, pt, height_tolerance);
    out.truncation = TruncationReason::converged;

    SystemPoint cur = pt;
    BallReal delta_pow = BallReal::exact(1L);
    BigRat delta_pow_exact(1);
    for (int n = 1; n <= n_max; ++n) {
        try {
            cur = apply_system(sys, cur);
        } catch (const error& e) {
            if (e.code() == errc::degenerate_fiber) {
                out.truncation = TruncationReason::degenerate_fiber;
                return out;
            }
            throw;
        }
        if (point_digits(cur) > orbit_digit_budget) {
            out.truncation = TruncationReason::budget;
            return out;
        }
        delta_pow = delta_pow * sp.delta;
        if (out.delta_exact) delta_pow_exact *= *out.delta_exact;
        SeriesRow row;
        row.n = n;
        row.h = system_height(sys, cur, height_tolerance);
        BigRat nl = pow(BigRat(n), (unsigned long)sp.l);
        row.a = row.h.value / (delta_pow * BallReal::exact(nl));
        if (out.delta_exact && row.h.exact_value) {
            BigRat a = *row.h.exact_value / (delta_pow_exact * nl);
            a.canonicalize();
            row.a_exact = a;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

CanonicalEstimate call_silverman(const P1Morphism& f, const ProjectivePoint& P,
                                 const BigRat& tolerance) {
    if (tolerance <= 0) fail(errc::invalid_input, "tolerance must be positive");
    if (P.dimension() != 1) fail(errc::invalid_input, "expected a P^1 point");
    int prec = global_precision_bits();
    long d = f.degree();
    BallReal cf = f.bounds().height_change_bound(prec);
    BigRat cf_hi = cf.hi_rat();
    // tail bound C_f * d^-K / (d-1)
    int K = 1;
    BigRat dK(d);
    while (K < 64 && cf_hi / (dK * BigRat(d - 1)) >= tolerance) {
        ++K;
        dK *= d;
    }
    BigRat tail = cf_hi / (dK * BigRat(d - 1));

    BigInt p = P.coords()[0], q = P.coords()[1];
    const BigInt& L = f.bounds().gcd_modulus;
    for (int k = 0; k < K; ++k) {
        BigInt A = f.numerator().eval(p, q), B = f.denominator().eval(p, q);
        BigInt g = gcd(gcd(L, A), B);
        if (B < 0 || (B == 0 && A < 0)) g = -g;
        p = A / g;
        q = B / g;
        if (digit_count(p) > orbit_digit_budget) fail(errc::budget_exceeded, "orbit height budget hit");
    }
    BigInt core = abs(p) > abs(q) ? abs(p) : abs(q);
    BallReal hK = core == 1 ? BallReal::zero(prec) : BallReal::log_of(core, prec);
    BigRat scale = BigRat(1) / dK;
    scale.canonicalize();
    BallReal est = (BallReal::exact(scale, prec) * hK).widened(BallReal::exact(tail, prec));
    CanonicalEstimate out;
    out.limsup_est = est;
    out.liminf_est = est;
    out.mode = EstimateMode::telescoped_certified;
    out.error_bound = BallReal::exact(tail, prec);
    return out;
}

namespace {

// extended euclid over Q[t]: s*a + t*b = gcd (monic)
std::pair<RatPoly, RatPoly> poly_xgcd(const RatPoly& a, const RatPoly& b, RatPoly& g) {
    RatPoly r0 = a, r1 = b;
    RatPoly s0 = RatPoly::constant(BigRat(1)), s1;
    RatPoly t0, t1 = RatPoly::constant(BigRat(1));
    while (!r1.is_zero()) {
        auto [qv, rem] = r0.divmod(r1);
        RatPoly s2 = s0 - qv * s1;
        RatPoly t2 = t0 - qv * t1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    BigRat lead = r0.leading();
    g = r0.monic();
    return {s0 * (BigRat(1) / lead), t0 * (BigRat(1) / lead)};
}

// projection polynomial onto the q^m primary component inside min_poly
RatPoly primary_projection_poly(const RatPoly& min_poly, const RatPoly& q, int m) {
    RatPoly F = q.pow((unsigned long)m);
    RatPoly G = min_poly.divmod(F).first;
    RatPoly g;
    auto [s, t] = poly_xgcd(F, G, g);
    (void)s;
    if (!g.is_one()) fail(errc::internal, "primary components are not coprime");
    // t*G = 1 mod F and = 0 mod G: the projector onto ker F(A)
    return (t * G).divmod(min_poly).second;
}

struct ExactLimits {
    // balls always; rationals when the gram form is rational
    BallReal limsup, liminf;
    std::optional<BigRat> limsup_exact, liminf_exact;
};

BigRat factorial(int n) {
    BigRat f(1);
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

ExactLimits value_from_vector(const GramForm& gram, const RatVector& u, int l,
                              const BigRat& delta) {
    // limit = hhat(u) / ((l!)^2 delta^l)
    BigRat denom = factorial(l) * factorial(l) * pow(delta, (unsigned long)l);
    ExactLimits out;
    if (gram.is_rational()) {
        BigRat v = gram.apply_exact(u) / denom;
        v.canonicalize();
        out.limsup_exact = v;
        out.liminf_exact = v;
        out.limsup = BallReal::exact(v);
        out.liminf = out.limsup;
    } else {
        BallReal v = gram.apply(u) / BallReal::exact(denom);
        out.limsup = v;
        out.liminf = v;
    }
    return out;
}

ExactLimits combine_parity(const ExactLimits& even, const ExactLimits& odd, int l,
                           const BigRat& delta) {
    // a_{2k+r} -> Lim_B(A^r w) / (4^l delta^r)
    BigRat se = pow(BigRat(4), (unsigned long)l);
    BigRat so = se * delta;
    ExactLimits out;
    BallReal e_hi = even.limsup / BallReal::exact(se);
    BallReal e_lo = even.liminf / BallReal::exact(se);
    BallReal o_hi = odd.limsup / BallReal::exact(so);
    BallReal o_lo = odd.liminf / BallReal::exact(so);
    out.limsup = BallReal::max(e_hi, o_hi);
    out.liminf = BallReal::min(e_lo, o_lo);
    if (even.limsup_exact && odd.limsup_exact) {
        BigRat eh = *even.limsup_exact / se, oh = *odd.limsup_exact / so;
        BigRat el = *even.liminf_exact / se, ol = *odd.liminf_exact / so;
        out.limsup_exact = std::max(eh, oh);
        out.liminf_exact = std::min(el, ol);
        out.limsup_exact->canonicalize();
        out.liminf_exact->canonicalize();
    }
    return out;
}

// Exact dominant-term limits of hhat(A^n w) / (delta^n n^(2 l(A))); empty
// optional when no exact route applies at this depth.
std::optional<ExactLimits> exact_lattice_limits(const RatMatrix& A, const GramForm& gram,
                                                const RatVector& w, int depth) {
    bool zero = true;
    for (const auto& c : w)
        if (c != 0) zero = false;
    if (zero) {
        ExactLimits out;
        out.limsup = BallReal::zero();
        out.liminf = out.limsup;
        out.limsup_exact = BigRat(0);
        out.liminf_exact = BigRat(0);
        return out;
    }
    SpectralData sd = spectral_data(A);
    int l = sd.jordan_exponent;
    for (const auto& df : sd.dominant_factors)
        if (df.structure == ModulusStructure::mixed || df.structure == ModulusStructure::unknown)
            return std::nullopt;
    // exact rational delta = rho^2 is available for all all_max structures
    if (!sd.rho_sq || !sd.rho_sq->is_rational()) return std::nullopt;
    BigRat delta = sd.rho_sq->rational_value();

    if (sd.dominant_factors.size() == 1 && sd.dominant_factors[0].factor.degree() == 1) {
        const DominantFactor& df = sd.dominant_factors[0];
        BigRat lambda = -df.factor[0];
        RatPoly proj = primary_projection_poly(sd.min_polynomial, df.factor, df.min_poly_mult);
        RatMatrix P = A.eval_poly(proj);
        RatMatrix N = A - RatMatrix::identity(A.dim()) * lambda;
        RatVector u = P * w;
        for (int i = 0; i < l; ++i) u = N * u;
        return value_from_vector(gram, u, l, delta);
    }
    if (sd.dominant_factors.size() == 1 && sd.dominant_factors[0].factor.degree() == 2 &&
        gram.cm_action()) {
        // CM route: eigenvalue alpha + beta*omega in Q(omega), A complex-linear
        const DominantFactor& df = sd.dominant_factors[0];
        const RatMatrix& J = *gram.cm_action();
        long d = (long)gram.cm_d();
        if (d > 0 && A * J == J * A) {
            BigRat b = df.factor[1], c = df.factor[0];
            BigRat alpha = -b / 2;
            BigRat beta2 = (c - alpha * alpha) / BigRat(d);
            beta2.canonicalize();
            BigInt bn, bd;
            if (beta2 >= 0 && is_square(BigInt(beta2.get_num()), &bn) &&
                is_square(BigInt(beta2.get_den()), &bd)) {
                BigRat beta(bn, bd);
                beta.canonicalize();
                RatPoly proj = primary_projection_poly(sd.min_polynomial, df.factor,
                                                       df.min_poly_mult);
                RatMatrix P = A.eval_poly(proj);
                RatMatrix MC = A - RatMatrix::identity(A.dim()) * alpha - J * beta;
                RatVector u = P * w;
                for (int i = 0; i < l; ++i) u = MC * u;
                return value_from_vector(gram, u, l, delta);
            }
        }
    }
    if (depth >= 3) return std::nullopt;
    // parity split through A^2: plus/minus pairs and b = 0 quadratics land on
    // rational eigenvalues after squaring
    RatMatrix B = A * A;
    auto even = exact_lattice_limits(B, gram, w, depth + 1);
    if (!even) return std::nullopt;
    auto odd = exact_lattice_limits(B, gram, A * w, depth + 1);
    if (!odd) return std::nullopt;
    return combine_parity(*even, *odd, l, delta);
}

RatVector affine_reduce(const LatticeSystem& sys, const RatVector& v) {
    bool zero = true;
    for (const auto& c : sys.translation)
        if (c != 0) zero = false;
    if (zero) return v;
    RatMatrix ImA = RatMatrix::identity(sys.rank()) - sys.matrix;
    auto P0 = solve(ImA, sys.translation);
    if (!P0)
        fail(errc::no_fixed_point,
             "1 is an eigenvalue of A and the translation misses the image: no affine reduction");
    RatVector w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] - (*P0)[i];
    return w;
}

} // namespace

CanonicalEstimate lattice_canonical(const LatticeSystem& sys, const RatVector& v) {
    if (v.size() != sys.rank()) fail(errc::invalid_input, "vector dimension mismatch");
    SystemSpectral sp = system_spectral(System{sys, ""});
    if (!sp.delta.certainly_gt(BallReal::exact(1L)))
        fail(errc::invalid_input, "lattice canonical heights need delta > 1");
    RatVector w = affine_reduce(sys, v);

    auto exact = exact_lattice_limits(sys.matrix, sys.gram, w, 0);
    CanonicalEstimate out;
    if (exact) {
        out.limsup_est = exact->limsup;
        out.liminf_est = exact->liminf;
        out.limsup_exact = exact->limsup_exact;
        out.liminf_exact = exact->liminf_exact;
        out.mode = EstimateMode::exact_lattice;
        out.error_bound = BallReal::zero();
        return out;
    }
    // spectral gap too small for the exact route: empirical window, flagged
    out.mode = EstimateMode::empirical;
    out.note = "SpectralGapTooSmall: exact dominant-term extraction unavailable";
    RatVector cur = w;
    BallReal delta_pow = BallReal::exact(1L);
    std::vector<BallReal> window;
    int l = sp.l;
    for (int n = 1; n <= 60; ++n) {
        cur = sys.matrix * cur;
        delta_pow = delta_pow * sp.delta;
        BallReal h = sys.gram.apply(cur);
        BallReal a = h / (delta_pow * BallReal::exact(pow(BigRat(n), (unsigned long)l)));
        if (n > 40) window.push_back(a);
    }
    BallReal hi = window[0], lo = window[0];
    for (const auto& a : window) {
        hi = BallReal::max(hi, a);
        lo = BallReal::min(lo, a);
    }
    out.limsup_est = hi;
    out.liminf_est = lo;
    return out;
}

CanonicalEstimate nef_canonical_wehler(const WehlerSystem& sys, const WehlerPoint& P, int n_max) {
    if (n_max < 1) fail(errc::invalid_input, "n_max must be at least 1");
    int prec = global_precision_bits();
    RatMatrix M = sys.picard_matrix();
    SpectralData sd = spectral_data(M, prec);
    if (!sd.rho.certainly_gt(BallReal::exact(1L)))
        fail(errc::invalid_input, "nef canonical heights need delta > 1");
    std::vector<RatVector> octant{{BigRat(1), BigRat(0), BigRat(0)},
                                  {BigRat(0), BigRat(1), BigRat(0)},
                                  {BigRat(0), BigRat(0), BigRat(1)}};
    PerronResult pf = perron_eigenvector(M, octant, prec);

    auto weighted = [&](const WehlerPoint& Q) {
        BallReal acc = BallReal::zero(prec);
        const ProjectivePoint* parts[3] = {&Q.x, &Q.y, &Q.z};
        for (int i = 0; i < 3; ++i)
            acc = acc + pf.eigenvector[(size_t)i] * weil_height(*parts[i]).value;
        return acc;
    };

    CanonicalEstimate out;
    out.mode = EstimateMode::empirical;
    WehlerPoint cur = P;
    BallReal dpow = BallReal::exact(1L);
    BallReal prev = weighted(cur), last = prev;
    int reached = 0;
    for (int n = 1; n <= n_max; ++n) {
        try {
            cur = sys.apply(cur);
        } catch (const error& e) {
            if (e.code() == errc::degenerate_fiber) {
                out.note = "degenerate fiber: orbit truncated at n = " + std::to_string(n - 1);
                break;
            }
            throw;
        }
        if (point_digits(cur) > orbit_digit_budget) {
            out.note = "height budget: orbit truncated at n = " + std::to_string(n - 1);
            break;
        }
        dpow = dpow * sd.rho;
        prev = last;
        last = weighted(cur) / dpow;
        reached = n;
    }
    // expected geometric decay at rate delta^(-1/2), safety factor 4
    BallReal diff = (last - prev).abs();
    BallReal root = sd.rho.sqrt_nonneg();
    BallReal ratio = BallReal::exact(1L) / root;
    BallReal err =
        BallReal::exact(4L) * diff * ratio / (BallReal::exact(1L) - ratio);
    if (reached <= 1) err = last.abs() + BallReal::exact(1L);
    out.limsup_est = last.widened(err);
    out.liminf_est = out.limsup_est;
    out.error_bound = err;
    return out;
}

BallReal arithmetic_degree_estimate(const System& sys, const SystemPoint& pt, int n_max,
                                    const BigRat& height_tolerance) {
    if (n_max < 4) fail(errc::invalid_input, "n_max must be at least 4");
    SystemPoint cur = pt;
    for (int n = 1; n <= n_max; ++n) {
        try {
            cur = apply_system(sys, cur);
        } catch (const error& e) {
            if (e.code() == errc::degenerate_fiber) break;
            throw;
        }
        if (point_digits(cur) > orbit_digit_budget) break;
    }
    HeightValue h = system_height(sys, cur, height_tolerance);
    // ample heights are kept >= 1 in this estimate so preperiodic orbits
    // report a ball near 1
    BallReal floor_one = BallReal::max(h.value, BallReal::exact(1L));
    return (floor_one.log() / BallReal::exact((long)n_max)).exp();
}

namespace {

ZfKernelResult zf_kernel_impl(const RatMatrix& A,
                              const std::optional<std::vector<RatPoly>>& hints, int prec) {
    SpectralData sd = spectral_data(A, prec, hints);
    if (!sd.rho_sq || quad_cmp(*sd.rho_sq, QuadVal::rational(BigRat(1))) <= 0) {
        if (!sd.rho.certainly_gt(BallReal::exact(1L)))
            fail(errc::invalid_input, "Z_f kernels need delta = rho^2 > 1");
    }
    ZfKernelResult out;
    for (const auto& df : sd.dominant_factors) {
        if (df.structure == ModulusStructure::mixed)
            fail(errc::mixed_modulus_factor,
                 "dominant factor " + df.factor.to_string() +
                     " has roots of distinct moduli: the kernel is not rational");
        if (df.structure == ModulusStructure::unknown)
            out.certification = Certification::numeric_certified;
        else if (df.cert == Certification::numeric_certified &&
                 out.certification == Certification::exact)
            out.certification = Certification::numeric_certified;
    }
    int l = sd.jordan_exponent;
    auto factors = factor_rational(sd.min_polynomial, hints);
    for (const auto& [q, mult] : factors) {
        bool dominant = false;
        for (const auto& df : sd.dominant_factors)
            if (df.factor == q) dominant = true;
        int e = dominant ? std::min(mult, l) : mult;
        if (e == 0) continue; // dominant factor with l = 0: no sub-top layer
        RatMatrix Qe = A.eval_poly(q.pow((unsigned long)e));
        for (auto& b : kernel_basis(Qe)) out.basis.push_back(std::move(b));
    }
    // A-invariance of the span, exact
    for (const auto& b : out.basis)
        if (!in_span(out.basis, A * b)) fail(errc::internal, "Z_f kernel is not A-invariant");
    return out;
}

} // namespace

ZfKernelResult zf_kernel(const RatMatrix& A, const std::optional<std::vector<RatPoly>>& hints,
                         int prec) {
    return zf_kernel_impl(A, hints, prec);
}

ZfKernelResult zf_kernel(const CMMatrix& A, const std::optional<std::vector<RatPoly>>& hints,
                         int prec) {
    return zf_kernel_impl(A.embed(), hints, prec);
}

ZfResult zf_membership(const LatticeSystem& sys, const RatVector& v) {
    if (v.size() != sys.rank()) fail(errc::invalid_input, "vector dimension mismatch");
    ZfResult out;
    RatVector w;
    try {
        w = affine_reduce(sys, v);
    } catch (const error& e) {
        if (e.code() == errc::no_fixed_point) {
            out.member = ZfMember::undecided;
            out.note = e.what();
            return out;
        }
        throw;
    }
    ZfKernelResult kern;
    try {
        kern = zf_kernel(sys.matrix);
    } catch (const error& e) {
        if (e.code() == errc::mixed_modulus_factor) {
            out.member = ZfMember::undecided;
            out.note = e.what();
            return out;
        }
        throw;
    }
    out.kernel_basis = kern.basis;
    if (in_span(kern.basis, w)) {
        out.member = ZfMember::yes;
        out.certification = kern.certification;
        return out;
    }
    CanonicalEstimate est = lattice_canonical(sys, v);
    if (est.mode == EstimateMode::exact_lattice) {
        if (est.liminf_exact && *est.liminf_exact > 0) {
            out.member = ZfMember::no;
            out.certification = Certification::exact;
            return out;
        }
        if (est.liminf_est.certainly_positive()) {
            out.member = ZfMember::no;
            out.certification = Certification::numeric_certified;
            return out;
        }
        if (est.liminf_exact && *est.liminf_exact == 0) {
            // exact zero liminf without kernel membership cannot happen for
            // torsion-free lattice coordinates; report the inconsistency
            out.member = ZfMember::yes;
            out.certification = kern.certification;
            return out;
        }
    }
    out.member = ZfMember::undecided;
    out.certification = Certification::heuristic;
    out.note = est.note.empty() ? "no exact positivity certificate" : est.note;
    return out;
}

} // namespace heightlab
