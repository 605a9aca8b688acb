#include "heightlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "heightlab/errors.hpp"
#include "heightlab/factor.hpp"

namespace heightlab {

namespace {

std::vector<RatPoly> sturm_sequence(const RatPoly& p) {
    std::vector<RatPoly> seq;
    seq.push_back(p);
    seq.push_back(p.derivative());
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
        RatPoly r = seq[seq.size() - 2].divmod(seq.back()).second;
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

int variations_at(const std::vector<RatPoly>& seq, const BigRat& x) {
    int var = 0, last = 0;
    for (const auto& s : seq) {
        BigRat v = s.eval(x);
        int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++var;
        last = sg;
    }
    return var;
}

BigRat cauchy_bound(const RatPoly& p) {
    BigRat b(0);
    const BigRat& lead = p.leading();
    for (int i = 0; i < p.degree(); ++i) {
        BigRat r = abs(p[(size_t)i] / lead);
        if (r > b) b = r;
    }
    return b + 1;
}

// exact complex-rational pair, used to evaluate p at rectangle midpoints
struct QC {
    BigRat re, im;
};

QC eval_qc(const RatPoly& p, const QC& z) {
    QC acc{BigRat(0), BigRat(0)};
    for (int i = p.degree(); i >= 0; --i) {
        QC next;
        next.re = acc.re * z.re - acc.im * z.im + p[(size_t)i];
        next.im = acc.re * z.im + acc.im * z.re;
        acc = next;
    }
    return acc;
}

ComplexBall eval_cb(const RatPoly& p, const ComplexBall& z, int prec) {
    ComplexBall acc{BallReal::zero(prec), BallReal::zero(prec)};
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * z;
        acc.re = acc.re + BallReal::exact(p[(size_t)i], prec);
    }
    return acc;
}

BigRat rad_of(const BallReal& b) { return (b.hi_rat() - b.lo_rat()) / 2; }
BigRat mid_of(const BallReal& b) { return (b.hi_rat() + b.lo_rat()) / 2; }

BigRat two_pow_neg(long k) {
    BigInt d = BigInt(1) << (unsigned long)k;
    BigRat r(BigInt(1), d);
    r.canonicalize();
    return r;
}

// Exact bisection of an isolating interval (lo, hi] down to the radius target.
ComplexBall refine_real_root(const RatPoly& p, BigRat lo, BigRat hi, long prec_bits) {
    BigRat target = two_pow_neg(prec_bits / 2 + 1);
    if (p.eval(hi) == 0) {
        BallReal x = BallReal::exact(hi, (int)prec_bits);
        return {x, BallReal::zero((int)prec_bits)};
    }
    int s_lo = p.eval(lo) > 0 ? 1 : (p.eval(lo) < 0 ? -1 : 0);
    auto seq = s_lo == 0 ? sturm_sequence(p) : std::vector<RatPoly>{};
    while (hi - lo > target) {
        BigRat mid = (lo + hi) / 2;
        BigRat v = p.eval(mid);
        if (v == 0) {
            BallReal x = BallReal::exact(mid, (int)prec_bits);
            return {x, BallReal::zero((int)prec_bits)};
        }
        if (s_lo != 0) {
            int s_mid = v > 0 ? 1 : -1;
            if (s_mid == s_lo)
                lo = mid;
            else
                hi = mid;
        } else {
            // endpoint sits on another root; count through the Sturm sequence
            if (variations_at(seq, lo) - variations_at(seq, mid) == 1)
                hi = mid;
            else {
                lo = mid;
                s_lo = v > 0 ? 1 : -1; // interior point now, signs work again
            }
        }
    }
    return {BallReal::from_endpoints(lo, hi, (int)prec_bits), BallReal::zero((int)prec_bits)};
}

std::vector<std::pair<BigRat, BigRat>> isolate_real_roots(const RatPoly& p) {
    auto seq = sturm_sequence(p);
    BigRat bound = cauchy_bound(p);
    std::vector<std::pair<BigRat, BigRat>> out, work;
    work.emplace_back(-bound - 1, bound);
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        int count = variations_at(seq, lo) - variations_at(seq, hi);
        if (count == 0) continue;
        if (count == 1) {
            out.emplace_back(lo, hi);
            continue;
        }
        BigRat mid = (lo + hi) / 2;
        work.emplace_back(lo, mid);
        work.emplace_back(mid, hi);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Durand-Kerner in double precision; good enough to seed certification for
// desk-scale polynomials, and the ladder retries with more iterations.
std::vector<std::complex<double>> dk_approximations(const RatPoly& p, int iters) {
    int n = p.degree();
    std::vector<double> c(n + 1);
    RatPoly m = p.monic();
    for (int i = 0; i <= n; ++i) {
        c[i] = m[(size_t)i].get_d();
        if (!std::isfinite(c[i])) fail(errc::precision_exhausted, "coefficients overflow double");
    }
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int i = n; i >= 0; --i) acc = acc * z + c[i];
        return acc;
    };
    double radius = 1;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i]));
    radius += 1;
    std::vector<std::complex<double>> z(n);
    for (int k = 0; k < n; ++k) {
        double ang = 2 * M_PI * k / n + 0.5;
        z[k] = radius * 0.7 * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < iters; ++it) {
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            std::complex<double> denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (denom == std::complex<double>(0, 0)) {
                z[k] += std::complex<double>(1e-4, 2e-4);
                continue;
            }
            std::complex<double> delta = eval(z[k]) / denom;
            z[k] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14 * radius) break;
    }
    return z;
}

// Interval Newton on a rectangle; returns true when the enclosure reached the
// target radius with certified uniqueness.
bool newton_certify(const RatPoly& p, const RatPoly& dp, ComplexBall& X, const BigRat& target,
                    int prec, int max_steps) {
    bool certified = false;
    for (int step = 0; step < max_steps; ++step) {
        ComplexBall dX = eval_cb(dp, X, prec);
        if (dX.contains_zero()) return false;
        QC mid{mid_of(X.re), mid_of(X.im)};
        QC pm = eval_qc(p, mid);
        ComplexBall pmid{BallReal::exact(pm.re, prec), BallReal::exact(pm.im, prec)};
        ComplexBall N{BallReal::exact(mid.re, prec), BallReal::exact(mid.im, prec)};
        ComplexBall q = pmid / dX;
        N.re = N.re - q.re;
        N.im = N.im - q.im;
        if (X.strictly_contains(N)) certified = true;
        if (!certified) {
            // not yet contracting: widen slightly and try again next step
            return false;
        }
        // the root lies in N and in X, so the intersection keeps it
        auto clip = [prec](const BallReal& a, const BallReal& b) {
            BigRat lo = std::max(a.lo_rat(), b.lo_rat());
            BigRat hi = std::min(a.hi_rat(), b.hi_rat());
            return BallReal::from_endpoints(lo, hi, prec);
        };
        X = ComplexBall{clip(N.re, X.re), clip(N.im, X.im)};
        BigRat radius = std::max(rad_of(X.re), rad_of(X.im));
        BigRat scale = BigRat(1) + abs(mid_of(X.re)) + abs(mid_of(X.im));
        if (radius <= target * scale) return true;
    }
    return false;
}

} // namespace

int sturm_count(const RatPoly& p, const BigRat& a, const BigRat& b) {
    auto seq = sturm_sequence(p);
    return variations_at(seq, a) - variations_at(seq, b);
}

std::vector<ComplexBall> root_enclosures(const RatPoly& p, int precision_bits) {
    if (p.is_zero()) fail(errc::invalid_input, "root enclosures of the zero polynomial");
    if (precision_bits <= 0) precision_bits = global_precision_bits();
    int n = p.degree();
    std::vector<ComplexBall> out;
    if (n == 0) return out;
    if (gcd(p, p.derivative()).degree() > 0)
        fail(errc::invalid_input, "root enclosures expect a squarefree polynomial");

    // rational roots come out exactly (radius-zero balls)
    RatPoly rest = p.monic();
    std::vector<ComplexBall> exact_roots;
    if (n <= factor_degree_limit) {
        for (const auto& [q, mult] : factor_rational(p)) {
            (void)mult;
            if (q.degree() != 1) continue;
            BigRat root = -q[0];
            exact_roots.push_back({BallReal::exact(root, precision_bits),
                                   BallReal::zero(precision_bits)});
            rest = rest.divmod(q).first;
        }
    }

    auto iso = isolate_real_roots(rest.degree() > 0 ? rest : p);
    if (rest.degree() == 0) iso.clear();
    for (int extra = 0; extra < 6; ++extra) {
        out = exact_roots;
        for (const auto& [lo, hi] : iso)
            out.push_back(refine_real_root(rest, lo, hi, precision_bits << extra));
        std::sort(out.begin(), out.end(), [](const ComplexBall& a, const ComplexBall& b) {
            return a.re.lo_rat() < b.re.lo_rat();
        });
        bool disjoint = true;
        for (size_t i = 0; i + 1 < out.size() && disjoint; ++i)
            if (out[i].re.overlaps(out[i + 1].re)) disjoint = false;
        if (disjoint) break;
        if (extra == 5 || (precision_bits << (extra + 1)) > 4 * max_precision_bits)
            fail(errc::precision_exhausted, "real root enclosures overlap");
    }
    int n_real = (int)out.size();
    int pairs = (n - n_real) / 2;
    if ((n - n_real) % 2 != 0) fail(errc::internal, "real root parity mismatch");

    if (pairs > 0) {
        RatPoly dp = p.derivative();
        BigRat target = two_pow_neg(precision_bits / 2 + 1);
        bool done = false;
        for (int attempt = 0; attempt < 5 && !done; ++attempt) {
            int prec = std::max(precision_bits, 128) << attempt;
            if (prec > max_precision_bits) break;
            auto approx = dk_approximations(p, 200 << attempt);
            // keep one representative per conjugate pair, well off the axis
            std::sort(approx.begin(), approx.end(),
                      [](auto a, auto b) { return a.imag() > b.imag(); });
            std::vector<std::complex<double>> upper(approx.begin(), approx.begin() + pairs);
            std::vector<ComplexBall> found;
            bool ok = true;
            for (int k = 0; k < pairs && ok; ++k) {
                double sep = 1e300;
                for (int j = 0; j < (int)approx.size(); ++j) {
                    double d = std::abs(upper[k] - approx[j]);
                    if (d > 1e-300) sep = std::min(sep, d);
                }
                sep = std::min(sep, 2 * upper[k].imag()); // distance to conjugate
                ok = false;
                for (double shrink : {0.25, 0.06, 0.01}) {
                    double r0 = sep * shrink;
                    if (!(r0 > 0) || !std::isfinite(r0)) break;
                    BigRat re(upper[k].real()), im(upper[k].imag()), rr(r0);
                    ComplexBall X{BallReal::from_endpoints(re - rr, re + rr, prec),
                                  BallReal::from_endpoints(im - rr, im + rr, prec)};
                    ComplexBall trial = X;
                    if (newton_certify(p, dp, trial, target, prec, 200)) {
                        found.push_back(trial);
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok || (int)found.size() != pairs) continue;
            // mirror conjugates and demand strict separation from the axis
            std::vector<ComplexBall> all = out;
            bool clean = true;
            for (const auto& Z : found) {
                if (!Z.im.certainly_positive()) {
                    clean = false;
                    break;
                }
                all.push_back(Z);
                all.push_back(ComplexBall{Z.re, -Z.im});
            }
            if (!clean) continue;
            for (size_t i = 0; i < all.size() && clean; ++i)
                for (size_t j = i + 1; j < all.size() && clean; ++j)
                    if (!all[i].disjoint_from(all[j])) clean = false;
            if (!clean) continue;
            out = all;
            done = true;
        }
        if (!done)
            fail(errc::precision_exhausted, "complex root certification failed at max precision");
    }
    std::sort(out.begin(), out.end(), [](const ComplexBall& a, const ComplexBall& b) {
        double ar = a.re.midpoint_d(), br = b.re.midpoint_d();
        if (ar != br) return ar < br;
        return a.im.midpoint_d() < b.im.midpoint_d();
    });
    return out;
}

BallReal max_root_modulus(const RatPoly& p, int precision_bits) {
    auto roots = root_enclosures(p, precision_bits);
    if (roots.empty()) fail(errc::invalid_input, "max modulus of constant polynomial");
    BallReal m = roots[0].abs();
    for (size_t i = 1; i < roots.size(); ++i) m = BallReal::max(m, roots[i].abs());
    return m;
}

} // namespace heightlab
