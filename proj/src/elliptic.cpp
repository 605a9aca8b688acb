#include "heightlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heightlab/errors.hpp"

namespace heightlab {

std::string EPoint::key() const {
    if (infinity) return "O";
    return to_string(x) + "," + to_string(y);
}

EllipticCurve::EllipticCurve(const BigRat& a1_, const BigRat& a2_, const BigRat& a3_,
                             const BigRat& a4_, const BigRat& a6_)
    : a1(a1_), a2(a2_), a3(a3_), a4(a4_), a6(a6_) {
    b2 = a1 * a1 + 4 * a2;
    b4 = 2 * a4 + a1 * a3;
    b6 = a3 * a3 + 4 * a6;
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4 = b2 * b2 - 24 * b4;
    discriminant = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (discriminant == 0) fail(errc::invalid_input, "singular Weierstrass equation");
}

bool EllipticCurve::is_integral() const {
    return a1.get_den() == 1 && a2.get_den() == 1 && a3.get_den() == 1 && a4.get_den() == 1 &&
           a6.get_den() == 1;
}

EllipticCurve EllipticCurve::integral_model(BigInt& u) const {
    u = 1;
    for (const BigRat* a : {&a1, &a2, &a3, &a4, &a6}) u = lcm(u, BigInt(a->get_den()));
    BigRat uq{u};
    return EllipticCurve(a1 * uq, a2 * uq * uq, a3 * pow(uq, 3), a4 * pow(uq, 4), a6 * pow(uq, 6));
}

bool EllipticCurve::on_curve(const EPoint& P) const {
    if (P.infinity) return true;
    return P.y * P.y + a1 * P.x * P.y + a3 * P.y == P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
}

EPoint EllipticCurve::neg(const EPoint& P) const {
    if (P.infinity) return P;
    return EPoint::affine(P.x, -P.y - a1 * P.x - a3);
}

EPoint EllipticCurve::add(const EPoint& P, const EPoint& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    if (P.x == Q.x) {
        if (P.y != Q.y) return EPoint::O();
        return dbl(P);
    }
    BigRat lambda = (Q.y - P.y) / (Q.x - P.x);
    BigRat nu = P.y - lambda * P.x;
    BigRat x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    BigRat y3 = -(lambda + a1) * x3 - nu - a3;
    return EPoint::affine(x3, y3);
}

EPoint EllipticCurve::dbl(const EPoint& P) const {
    if (P.infinity) return P;
    BigRat denom = 2 * P.y + a1 * P.x + a3;
    if (denom == 0) return EPoint::O(); // 2-torsion
    BigRat lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / denom;
    BigRat nu = P.y - lambda * P.x;
    BigRat x3 = lambda * lambda + a1 * lambda - a2 - 2 * P.x;
    BigRat y3 = -(lambda + a1) * x3 - nu - a3;
    return EPoint::affine(x3, y3);
}

EPoint EllipticCurve::mul(long m, const EPoint& P) const {
    if (m < 0) return neg(mul(-m, P));
    EPoint acc = EPoint::O();
    EPoint base = P;
    unsigned long e = (unsigned long)m;
    while (e) {
        if (e & 1) acc = add(acc, base);
        e >>= 1;
        if (e) base = dbl(base);
    }
    return acc;
}

BinaryForm EllipticCurve::duplication_num() const {
    if (!is_integral()) fail(errc::internal, "duplication forms need an integral model");
    // x(2P) = (x^4 - b4 x^2 - 2 b6 x - b8) / (4x^3 + b2 x^2 + 2 b4 x + b6)
    BinaryForm F;
    F.c = {-BigInt(b8.get_num()), -2 * BigInt(b6.get_num()), -BigInt(b4.get_num()), BigInt(0),
           BigInt(1)};
    return F;
}

BinaryForm EllipticCurve::duplication_den() const {
    if (!is_integral()) fail(errc::internal, "duplication forms need an integral model");
    BinaryForm G;
    G.c = {BigInt(b6.get_num()), 2 * BigInt(b4.get_num()), BigInt(b2.get_num()), BigInt(4),
           BigInt(0)};
    return G;
}

ProjectivePoint EllipticCurve::x_as_p1(const EPoint& P) {
    if (P.infinity) return ProjectivePoint::from_integers({BigInt(1), BigInt(0)});
    return ProjectivePoint::normalize({P.x, BigRat(1)});
}

bool EllipticCurve::is_torsion(const EPoint& P) const {
    if (P.infinity) return true;
    // Doubling orbit of a torsion point repeats within 16 steps over Q, and
    // its coordinates stay Lutz-Nagell small; once the orbit outgrows that
    // envelope it cannot come back.
    size_t cap = 4 * mpz_sizeinbase(discriminant.get_num().get_mpz_t(), 2) +
                 mpz_sizeinbase(P.x.get_num().get_mpz_t(), 2) +
                 mpz_sizeinbase(P.x.get_den().get_mpz_t(), 2) + 512;
    EPoint cur = P;
    std::vector<EPoint> seen{cur};
    for (int i = 0; i < 16; ++i) {
        cur = dbl(cur);
        if (cur.infinity) return true;
        for (const auto& s : seen)
            if (s == cur) return true;
        if (mpz_sizeinbase(cur.x.get_num().get_mpz_t(), 2) +
                mpz_sizeinbase(cur.x.get_den().get_mpz_t(), 2) >
            cap)
            return false;
        seen.push_back(cur);
    }
    return false;
}

std::string EllipticCurve::key() const {
    std::ostringstream os;
    os << "[" << to_string(a1) << "," << to_string(a2) << "," << to_string(a3) << ","
       << to_string(a4) << "," << to_string(a6) << "]";
    return os.str();
}

namespace {

struct IntegralSetup {
    EllipticCurve E;
    EPoint P;
    BinaryForm F, G;
    FormPairBounds bounds;
};

IntegralSetup to_integral(const EllipticCurve& E, const EPoint& P) {
    BigInt u;
    EllipticCurve Ei = E.integral_model(u);
    EPoint Pi = P;
    if (!P.infinity) {
        BigRat uq{u};
        Pi = EPoint::affine(P.x * uq * uq, P.y * pow(uq, 3));
    }
    IntegralSetup s{Ei, Pi, Ei.duplication_num(), Ei.duplication_den(), {}};
    s.bounds = form_pair_bounds(s.F, s.G);
    if (s.bounds.resultant == 0) fail(errc::internal, "duplication forms share a root");
    return s;
}

} // namespace

HeightValue neron_tate(const EllipticCurve& E, const EPoint& P, const BigRat& tolerance) {
    if (tolerance <= 0) fail(errc::invalid_input, "tolerance must be positive");
    if (P.infinity) return HeightValue::zero();
    if (!E.on_curve(P)) fail(errc::invalid_input, "point is not on the curve");
    if (E.is_torsion(P)) return HeightValue::zero();

    IntegralSetup s = to_integral(E, P);
    int prec = global_precision_bits();
    BallReal ce = s.bounds.height_change_bound(prec);
    // depth K with tail C_E * 4^-K / 3 below tolerance, capped at 12
    int K = 1;
    BigRat ce_hi = ce.hi_rat();
    while (K < 12 && ce_hi / (3 * pow(BigRat(4), (unsigned long)K)) >= tolerance) ++K;
    BigRat tail = ce_hi / (3 * pow(BigRat(4), (unsigned long)K));

    // Exact doubling orbit of the x-coordinate as an integer pair. The pair
    // gcd divides lcm of the Bezout scales, so reduction only needs a gcd
    // against that small modulus. The telescoped partial sum collapses to
    // 4^-K h(x_K) / 2 exactly.
    const BigInt& L = s.bounds.gcd_modulus;
    ProjectivePoint x0 = EllipticCurve::x_as_p1(s.P);
    BigInt p = x0.coords()[0], q = x0.coords()[1];
    for (int k = 1; k <= K; ++k) {
        BigInt A = s.F.eval(p, q), B = s.G.eval(p, q);
        BigInt g = gcd(gcd(L, A), B);
        if (B < 0 || (B == 0 && A < 0)) g = -g;
        p = A / g;
        q = B / g;
    }
    BigInt core = abs(p) > abs(q) ? abs(p) : abs(q);
    BallReal hk = core == 1 ? BallReal::zero(prec) : BallReal::log_of(core, prec);
    BigRat scale(BigInt(1), BigInt(1) << (unsigned long)(2 * K + 1)); // 4^-K / 2
    scale.canonicalize();
    BallReal out = (BallReal::exact(scale, prec) * hk).widened(BallReal::exact(tail, prec));
    HeightValue h;
    h.value = out;
    return h;
}

namespace {

// archimedean local term: half of log+|x| plus the telescoping increments of
// the normalized duplication pair, all in outward-rounded balls
BallReal archimedean_local(const IntegralSetup& s, const BigRat& tol) {
    for (int prec = std::max(global_precision_bits(), 128); prec <= max_precision_bits; prec *= 2) {
        try {
            BallReal cinf = s.bounds.arch_change_bound(prec);
            BigRat cinf_hi = cinf.hi_rat();
            int K = 1;
            while (K < 64 && cinf_hi / (6 * pow(BigRat(4), (unsigned long)K)) >= tol) ++K;
            BigRat tail = cinf_hi / (6 * pow(BigRat(4), (unsigned long)K));

            ProjectivePoint x0 = EllipticCurve::x_as_p1(s.P);
            BallReal a = BallReal::exact(x0.coords()[0], prec);
            BallReal b = BallReal::exact(x0.coords()[1], prec);
            BallReal max0 = BallReal::max(a.abs(), b.abs());
            BallReal lam = max0.log() - b.abs().log(); // log+ |x|
            BallReal f = BallReal::exact(BigRat(1, 4), prec);
            for (int k = 0; k < K; ++k) {
                BallReal A = s.F.eval_ball(a, b, prec);
                BallReal B = s.G.eval_ball(a, b, prec);
                BallReal mx = BallReal::max(A.abs(), B.abs());
                BallReal inc = mx.log() - BallReal::exact(4L, prec) * BallReal::max(a.abs(), b.abs()).log();
                lam = lam + f * inc;
                f = f * BallReal::exact(BigRat(1, 4), prec);
                // rescale by a power of two (exact) to keep magnitudes tame
                double mag = mx.hi_d();
                long e = 0;
                if (mag > 0 && std::isfinite(mag)) e = (long)std::lround(std::log2(mag));
                BallReal scale = BallReal::exact(BigRat(1), prec);
                if (e != 0) {
                    BigRat s2 = e > 0 ? BigRat(BigInt(1), BigInt(1) << (unsigned long)e)
                                      : BigRat(BigInt(1) << (unsigned long)(-e), BigInt(1));
                    s2.canonicalize();
                    scale = BallReal::exact(s2, prec);
                }
                a = A * scale;
                b = B * scale;
            }
            BallReal half = BallReal::exact(BigRat(1, 2), prec);
            return (half * lam).widened(BallReal::exact(tail, prec));
        } catch (const error& e) {
            if (e.code() != errc::precision_exhausted) throw;
        }
    }
    fail(errc::precision_exhausted, "archimedean local height did not stabilize");
}

std::vector<std::pair<BigInt, int>> factor_discriminant(const BigInt& disc,
                                                        const std::vector<BigInt>& hints) {
    BigInt n = abs(disc);
    std::vector<std::pair<BigInt, int>> out;
    auto strip = [&](const BigInt& p) {
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(BigInt(2));
    for (BigInt p(3); p * p <= n && p <= 1000000; p += 2) strip(p);
    if (n > 1 && n <= BigInt("18446744073709551615")) {
        // below 2^64 the Baillie-PSW test has no counterexamples
        if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
            out.emplace_back(n, 1);
            n = 1;
        }
    }
    for (const auto& h : hints) {
        if (n == 1) break;
        if (h > 1) strip(h);
    }
    if (n != 1)
        fail(errc::factorization_needed,
             "discriminant has an unfactored part " + n.get_str() + "; supply prime hints");
    std::sort(out.begin(), out.end());
    return out;
}

long valuation(const BigRat& x, const BigInt& p) {
    if (x == 0) fail(errc::internal, "valuation of zero");
    long v = 0;
    BigInt num(x.get_num()), den(x.get_den());
    while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
        num /= p;
        ++v;
    }
    while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
        den /= p;
        --v;
    }
    return v;
}

} // namespace

HeightValue neron_tate_local(const EllipticCurve& E, const EPoint& P, const BigRat& tolerance,
                             const std::vector<BigInt>& prime_hints) {
    if (tolerance <= 0) fail(errc::invalid_input, "tolerance must be positive");
    if (P.infinity) return HeightValue::zero();
    if (!E.on_curve(P)) fail(errc::invalid_input, "point is not on the curve");
    if (E.is_torsion(P)) {
        // still run the decomposition so torsion exercises the local table,
        // but the exact answer is zero; keep the certified ball around it
    }
    IntegralSetup s = to_integral(E, P);
    int prec = global_precision_bits();

    BallReal total = archimedean_local(s, tolerance / 2);

    // nonarchimedean: good places contribute (1/2) log den(x); singular
    // reduction at p | disc follows the reduction-type table
    BigInt den(s.P.x.get_den());
    if (den > 1) total = total + BallReal::exact(BigRat(1, 2), prec) * BallReal::log_of(den, prec);

    BigInt disc_num(s.E.discriminant.get_num());
    for (const auto& [p, e] : factor_discriminant(disc_num, prime_hints)) {
        (void)e;
        if (s.P.x != 0 && valuation(s.P.x, p) < 0) continue; // reduces to O: already counted
        BigRat A3 = 3 * s.P.x * s.P.x + 2 * s.E.a2 * s.P.x + s.E.a4 - s.E.a1 * s.P.y;
        BigRat B3 = 2 * s.P.y + s.E.a1 * s.P.x + s.E.a3;
        bool sing = (A3 == 0 || valuation(A3, p) >= 1) && (B3 == 0 || valuation(B3, p) >= 1);
        if (!sing) continue;
        long N = valuation(s.E.discriminant, p);
        BigRat coeff;
        if (s.E.c4 != 0 && valuation(s.E.c4, p) == 0) {
            // multiplicative: component index from v(2y + a1 x + a3)
            BigRat alpha;
            if (B3 == 0)
                alpha = BigRat(N) / 2;
            else
                alpha = std::min(BigRat(valuation(B3, p)), BigRat(BigRat(N) / 2));
            coeff = -alpha * (BigRat(N) - alpha) / (2 * BigRat(N));
        } else {
            // additive reduction
            BigRat C3 = 3 * pow(s.P.x, 4) + s.E.b2 * pow(s.P.x, 3) + 3 * s.E.b4 * s.P.x * s.P.x +
                        3 * s.E.b6 * s.P.x + s.E.b8;
            // zero values behave as infinite valuation in the branch test
            const long inf = 1L << 40;
            long vb = B3 == 0 ? inf : valuation(B3, p);
            long vc = C3 == 0 ? 4 * inf : valuation(C3, p);
            if (vc >= 3 * vb)
                coeff = BigRat(-vb, 3);
            else
                coeff = BigRat(-vc, 8);
            coeff.canonicalize();
        }
        total = total + BallReal::exact(coeff, prec) * BallReal::log_of(p, prec);
    }
    HeightValue h;
    h.value = total;
    return h;
}

BallReal nt_pairing(const EllipticCurve& E, const EPoint& P, const EPoint& Q,
                    const BigRat& tolerance) {
    BigRat t = tolerance / 4;
    BallReal hpq = neron_tate(E, E.add(P, Q), t).value;
    BallReal hp = neron_tate(E, P, t).value;
    BallReal hq = neron_tate(E, Q, t).value;
    return (hpq - hp - hq) * BallReal::exact(BigRat(1, 2));
}

GramForm GramForm::from_rational(const RatMatrix& gram, const std::optional<RatMatrix>& cm_action,
                                 unsigned long cm_d) {
    if (!gram.is_symmetric()) fail(errc::invalid_input, "gram matrix must be symmetric");
    // exact positive semidefiniteness via rational LDL^T: a zero pivot forces
    // a zero row, negative pivots are rejected
    RatMatrix m = gram;
    size_t n = m.dim();
    for (size_t k = 0; k < n; ++k) {
        BigRat piv = m.at(k, k);
        if (piv < 0) fail(errc::invalid_input, "gram matrix is not positive semidefinite");
        if (piv == 0) {
            for (size_t j = k; j < n; ++j)
                if (m.at(k, j) != 0)
                    fail(errc::invalid_input, "gram matrix is not positive semidefinite");
            continue;
        }
        for (size_t i = k + 1; i < n; ++i) {
            BigRat f = m.at(i, k) / piv;
            for (size_t j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
        }
        for (size_t j = k + 1; j < n; ++j) m.at(k, j) = m.at(j, k) = 0; // symmetrize remainder
    }
    if (cm_action) {
        if (cm_action->dim() != gram.dim()) fail(errc::invalid_input, "cm action dimension mismatch");
        RatMatrix j2 = *cm_action * *cm_action;
        RatMatrix expect = RatMatrix::identity(gram.dim()) * BigRat(-(long)cm_d);
        if (!(j2 == expect)) fail(errc::invalid_input, "cm action must square to -d");
        RatMatrix lhs = cm_action->transpose() * gram * *cm_action;
        RatMatrix rhs = gram * BigRat((long)cm_d);
        if (!(lhs == rhs)) fail(errc::invalid_input, "cm action incompatible with the gram form");
    }
    GramForm g;
    g.rank_ = gram.dim();
    g.rational_ = gram;
    g.cm_action_ = cm_action;
    g.cm_d_ = cm_d;
    g.balls_.resize(g.rank_ * g.rank_);
    for (size_t i = 0; i < g.rank_; ++i)
        for (size_t j = 0; j < g.rank_; ++j) g.balls_[i * g.rank_ + j] = BallReal::exact(gram.at(i, j));
    return g;
}

GramForm GramForm::from_balls(size_t rank, std::vector<BallReal> entries) {
    if (entries.size() != rank * rank) fail(errc::invalid_input, "gram entry count mismatch");
    GramForm g;
    g.rank_ = rank;
    g.balls_ = std::move(entries);
    return g;
}

BigRat GramForm::apply_exact(const RatVector& v) const {
    if (!rational_) fail(errc::invalid_input, "gram form has no exact rational model");
    if (v.size() != rank_) fail(errc::invalid_input, "lattice vector dimension mismatch");
    BigRat acc(0);
    for (size_t i = 0; i < rank_; ++i)
        for (size_t j = 0; j < rank_; ++j) acc += v[i] * rational_->at(i, j) * v[j];
    return acc;
}

BallReal GramForm::apply(const RatVector& v) const { return pair(v, v); }

BallReal GramForm::pair(const RatVector& v, const RatVector& w) const {
    if (v.size() != rank_ || w.size() != rank_)
        fail(errc::invalid_input, "lattice vector dimension mismatch");
    BallReal acc = BallReal::zero();
    for (size_t i = 0; i < rank_; ++i)
        for (size_t j = 0; j < rank_; ++j)
            acc = acc + BallReal::exact(v[i]) * entry(i, j) * BallReal::exact(w[j]);
    return acc;
}

HeightValue lattice_height(const RatVector& v, const GramForm& G) {
    if (v.size() != G.rank()) fail(errc::invalid_input, "lattice vector dimension mismatch");
    if (G.is_rational()) return HeightValue::from_rational(G.apply_exact(v));
    HeightValue h;
    h.value = G.apply(v);
    return h;
}

GramForm gram_from_points(const EllipticCurve& E, const std::vector<EPoint>& points,
                          const BigRat& tolerance) {
    size_t n = points.size();
    std::vector<BallReal> entries(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            BallReal v = i == j ? neron_tate(E, points[i], tolerance).value
                                : nt_pairing(E, points[i], points[j], tolerance);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    return GramForm::from_balls(n, std::move(entries));
}

} // namespace heightlab
