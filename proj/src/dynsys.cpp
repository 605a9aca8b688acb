#include "heightlab/dynsys.hpp"

#include <algorithm>

#include "heightlab/errors.hpp"

namespace heightlab {

P1Morphism P1Morphism::validate(BinaryForm numerator, BinaryForm denominator) {
    int d = numerator.degree();
    if (d != denominator.degree()) fail(errc::invalid_input, "forms must share their degree");
    if (d < 2) fail(errc::invalid_input, "degree must be at least 2 (delta > 1 is standing)");
    FormPairBounds b = form_pair_bounds(numerator, denominator);
    if (b.resultant == 0) fail(errc::not_a_morphism, "vanishing resultant: common projective root");
    P1Morphism m;
    m.num_ = std::move(numerator);
    m.den_ = std::move(denominator);
    m.bounds_ = std::move(b);
    return m;
}

ProjectivePoint P1Morphism::apply(const ProjectivePoint& P) const {
    if (P.dimension() != 1) fail(errc::invalid_input, "P^1 morphism needs a P^1 point");
    const BigInt& p = P.coords()[0];
    const BigInt& q = P.coords()[1];
    BigInt A = num_.eval(p, q), B = den_.eval(p, q);
    BigInt g = gcd(gcd(bounds_.gcd_modulus, A), B);
    if (B < 0 || (B == 0 && A < 0)) g = -g;
    std::vector<BigInt> c{A / g, B / g};
    return ProjectivePoint::from_integers(std::move(c));
}

RatVector LatticeSystem::apply(const RatVector& v) const {
    if (v.size() != rank()) fail(errc::invalid_input, "lattice vector dimension mismatch");
    RatVector w = matrix * v;
    for (size_t i = 0; i < w.size(); ++i) w[i] += translation[i];
    return w;
}

LatticeSystem LatticeSystem::make(RatMatrix A, RatVector translation, GramForm gram) {
    if (gram.rank() != A.dim()) fail(errc::invalid_input, "gram rank must match the matrix dimension");
    if (translation.empty()) translation.assign(A.dim(), BigRat(0));
    if (translation.size() != A.dim()) fail(errc::invalid_input, "translation dimension mismatch");
    LatticeSystem s{std::move(A), std::move(translation), std::move(gram), std::nullopt, 0};
    return s;
}

LatticeSystem LatticeSystem::make_cm(CMMatrix A, RatVector translation_embedded, GramForm gram) {
    RatMatrix M = A.embed();
    if (gram.rank() != M.dim())
        fail(errc::invalid_input, "gram rank must match the embedded dimension (2r)");
    if (translation_embedded.empty()) translation_embedded.assign(M.dim(), BigRat(0));
    if (translation_embedded.size() != M.dim())
        fail(errc::invalid_input, "translation dimension mismatch");
    LatticeSystem s{std::move(M), std::move(translation_embedded), std::move(gram), A, A.cm_d};
    return s;
}

std::vector<EPoint> ConcreteAbelianSystem::apply(const std::vector<EPoint>& x) const {
    if (x.size() != r) fail(errc::invalid_input, "point tuple length mismatch");
    std::vector<EPoint> out(r, EPoint::O());
    for (size_t i = 0; i < r; ++i) {
        EPoint acc = translation[i];
        for (size_t j = 0; j < r; ++j) {
            const BigRat& m = matrix.at(i, j);
            if (m == 0) continue;
            if (m.get_den() != 1) fail(errc::invalid_input, "abelian matrix must be integral");
            acc = curve.add(acc, curve.mul(m.get_num().get_si(), x[j]));
        }
        out[i] = acc;
    }
    return out;
}

ConcreteAbelianSystem ConcreteAbelianSystem::make(EllipticCurve curve, RatMatrix matrix,
                                                  std::vector<EPoint> translation) {
    ConcreteAbelianSystem s{std::move(curve), matrix.dim(), std::move(matrix), std::move(translation)};
    if (s.translation.empty()) s.translation.assign(s.r, EPoint::O());
    if (s.translation.size() != s.r) fail(errc::invalid_input, "translation tuple length mismatch");
    for (const auto& t : s.translation)
        if (!s.curve.on_curve(t)) fail(errc::invalid_input, "translation point not on the curve");
    return s;
}

namespace {

// dense biform in the two untouched coordinate pairs, bidegree up to (4,4);
// covers the (2,2) coefficient forms and their discriminant
struct BiForm {
    std::array<std::array<BigInt, 5>, 5> c{};

    bool is_zero() const {
        for (const auto& row : c)
            for (const auto& v : row)
                if (v != 0) return false;
        return true;
    }
};

BiForm bi_mul(const BiForm& a, const BiForm& b) {
    BiForm r;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (a.c[(size_t)i][(size_t)j] == 0) continue;
            for (int k = 0; k + i < 5; ++k)
                for (int l = 0; l + j < 5; ++l) {
                    if (b.c[(size_t)k][(size_t)l] == 0) continue;
                    r.c[(size_t)(i + k)][(size_t)(j + l)] +=
                        a.c[(size_t)i][(size_t)j] * b.c[(size_t)k][(size_t)l];
                }
        }
    return r;
}

BiForm bi_sub(const BiForm& a, const BiForm& b) {
    BiForm r;
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) r.c[i][j] = a.c[i][j] - b.c[i][j];
    return r;
}

BiForm bi_scale(const BiForm& a, long s) {
    BiForm r;
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) r.c[i][j] = a.c[i][j] * s;
    return r;
}

// coefficient biforms (A, B, C) of the fiber quadratic along `axis`; the
// biform indices track the monomials m_t = u0^(2-t) u1^t of the remaining
// pairs in their natural order
std::array<BiForm, 3> axis_coefficients(const std::array<BigInt, 27>& f, int axis) {
    std::array<BiForm, 3> abc;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            for (size_t k = 0; k < 3; ++k) {
                const BigInt& v = f[9 * i + 3 * j + k];
                if (v == 0) continue;
                if (axis == 0)
                    abc[i].c[j][k] += v;
                else if (axis == 1)
                    abc[j].c[i][k] += v;
                else
                    abc[k].c[i][j] += v;
            }
    return abc;
}

BigInt bi_eval(const BiForm& b, const ProjectivePoint& u, const ProjectivePoint& v) {
    BigInt acc(0);
    const BigInt &u0 = u.coords()[0], &u1 = u.coords()[1];
    const BigInt &v0 = v.coords()[0], &v1 = v.coords()[1];
    std::array<BigInt, 3> um{u0 * u0, u0 * u1, u1 * u1};
    std::array<BigInt, 3> vm{v0 * v0, v0 * v1, v1 * v1};
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j)
            if (b.c[i][j] != 0) acc += b.c[i][j] * um[i] * vm[j];
    return acc;
}

} // namespace

WehlerSystem WehlerSystem::validate(std::array<BigInt, 27> form, std::vector<int> word) {
    bool nonzero = false;
    for (const auto& c : form)
        if (c != 0) nonzero = true;
    if (!nonzero) fail(errc::invalid_input, "zero form");
    for (int w : word)
        if (w < 0 || w > 2) fail(errc::invalid_input, "word letters must be 0, 1 or 2");
    // factor screen: reject visibly split or degenerate-double-cover forms
    for (int axis = 0; axis < 3; ++axis) {
        auto abc = axis_coefficients(form, axis);
        int zero_count = (abc[0].is_zero() ? 1 : 0) + (abc[1].is_zero() ? 1 : 0) +
                         (abc[2].is_zero() ? 1 : 0);
        if (zero_count >= 2) fail(errc::invalid_input, "form splits along an axis");
        BiForm disc = bi_sub(bi_mul(abc[1], abc[1]), bi_scale(bi_mul(abc[0], abc[2]), 4));
        if (disc.is_zero()) fail(errc::invalid_input, "degenerate fiber discriminant along an axis");
    }
    WehlerSystem s;
    s.form_ = std::move(form);
    s.word_ = std::move(word);
    return s;
}

bool WehlerSystem::contains(const WehlerPoint& P) const {
    auto abc = axis_coefficients(form_, 0);
    const BigInt &x0 = P.x.coords()[0], &x1 = P.x.coords()[1];
    BigInt val = bi_eval(abc[0], P.y, P.z) * x0 * x0 + bi_eval(abc[1], P.y, P.z) * x0 * x1 +
                 bi_eval(abc[2], P.y, P.z) * x1 * x1;
    return val == 0;
}

WehlerPoint WehlerSystem::involution(int axis, const WehlerPoint& P) const {
    if (axis < 0 || axis > 2) fail(errc::invalid_input, "axis out of range");
    auto abc = axis_coefficients(form_, axis);
    const ProjectivePoint& coord = axis == 0 ? P.x : (axis == 1 ? P.y : P.z);
    const ProjectivePoint& u = axis == 0 ? P.y : P.x;
    const ProjectivePoint& v = axis == 2 ? P.y : P.z;
    BigInt A = bi_eval(abc[0], u, v), B = bi_eval(abc[1], u, v), C = bi_eval(abc[2], u, v);
    const BigInt& c0 = coord.coords()[0];
    const BigInt& c1 = coord.coords()[1];
    ProjectivePoint conj = coord;
    if (A == 0 && B == 0)
        fail(errc::degenerate_fiber, "fiber quadratic degenerates: indeterminate involution");
    if (A == 0) {
        // roots (1:0) and (-C:B); the conjugate is the other one
        if (c1 == 0)
            conj = ProjectivePoint::from_integers({-C, B});
        else
            conj = ProjectivePoint::from_integers({BigInt(1), BigInt(0)});
    } else {
        // c1 != 0 here; the sum of roots gives the projective Vieta flip
        conj = ProjectivePoint::from_integers({-B * c1 - A * c0, A * c1});
    }
    WehlerPoint out = P;
    (axis == 0 ? out.x : axis == 1 ? out.y : out.z) = conj;
    return out;
}

WehlerPoint WehlerSystem::apply(const WehlerPoint& P) const {
    // word [a, b, c] is the composition a o b o c: the last letter acts first,
    // so heights transform by S_a S_b S_c, the Picard product in word order
    if (word_.empty()) fail(errc::invalid_input, "empty involution word");
    WehlerPoint cur = P;
    for (auto it = word_.rbegin(); it != word_.rend(); ++it) cur = involution(*it, cur);
    return cur;
}

RatMatrix WehlerSystem::generator_matrix(int axis) {
    RatMatrix m = RatMatrix::identity(3);
    m.at((size_t)axis, (size_t)axis) = -1;
    for (size_t j = 0; j < 3; ++j)
        if (j != (size_t)axis) m.at((size_t)axis, j) = 2;
    return m;
}

RatMatrix WehlerSystem::picard_matrix() const {
    if (word_.empty()) fail(errc::invalid_input, "empty involution word");
    RatMatrix m = RatMatrix::identity(3);
    for (int w : word_) m = m * generator_matrix(w);
    return m;
}

SystemPoint apply_system(const System& sys, const SystemPoint& pt) {
    return std::visit(
        [&](const auto& s) -> SystemPoint {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, P1Morphism>) {
                return s.apply(std::get<ProjectivePoint>(pt));
            } else if constexpr (std::is_same_v<T, LatticeSystem>) {
                return s.apply(std::get<RatVector>(pt));
            } else if constexpr (std::is_same_v<T, ConcreteAbelianSystem>) {
                return s.apply(std::get<std::vector<EPoint>>(pt));
            } else if constexpr (std::is_same_v<T, WehlerSystem>) {
                return s.apply(std::get<WehlerPoint>(pt));
            } else if constexpr (std::is_same_v<T, PicardAction>) {
                fail(errc::invalid_input, "Picard-only systems have no point dynamics");
            } else {
                auto pp = std::get<std::shared_ptr<const ProductPoint>>(pt);
                auto next = std::make_shared<const ProductPoint>(ProductPoint{
                    apply_system(*s.left, pp->left), apply_system(*s.right, pp->right)});
                return SystemPoint{next};
            }
        },
        sys.value);
}

std::string point_key(const SystemPoint& pt) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ProjectivePoint>) {
                return p.key();
            } else if constexpr (std::is_same_v<T, RatVector>) {
                std::string s = "v";
                for (const auto& c : p) s += ":" + to_string(c);
                return s;
            } else if constexpr (std::is_same_v<T, std::vector<EPoint>>) {
                std::string s = "a";
                for (const auto& c : p) s += ";" + c.key();
                return s;
            } else if constexpr (std::is_same_v<T, WehlerPoint>) {
                return "w" + p.key();
            } else {
                return "(" + point_key(p->left) + ")x(" + point_key(p->right) + ")";
            }
        },
        pt);
}

size_t point_digits(const SystemPoint& pt) {
    return std::visit(
        [](const auto& p) -> size_t {
            using T = std::decay_t<decltype(p)>;
            size_t d = 1;
            if constexpr (std::is_same_v<T, ProjectivePoint>) {
                for (const auto& c : p.coords()) d = std::max(d, digit_count(c));
            } else if constexpr (std::is_same_v<T, RatVector>) {
                for (const auto& c : p) {
                    d = std::max(d, digit_count(BigInt(c.get_num())));
                    d = std::max(d, digit_count(BigInt(c.get_den())));
                }
            } else if constexpr (std::is_same_v<T, std::vector<EPoint>>) {
                for (const auto& c : p) {
                    if (c.infinity) continue;
                    d = std::max(d, digit_count(BigInt(c.x.get_num())));
                    d = std::max(d, digit_count(BigInt(c.x.get_den())));
                }
            } else if constexpr (std::is_same_v<T, WehlerPoint>) {
                for (const auto* q : {&p.x, &p.y, &p.z})
                    for (const auto& c : q->coords()) d = std::max(d, digit_count(c));
            } else {
                d = std::max(point_digits(p->left), point_digits(p->right));
            }
            return d;
        },
        pt);
}

HeightValue system_height(const System& sys, const SystemPoint& pt, const BigRat& tolerance) {
    return std::visit(
        [&](const auto& s) -> HeightValue {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, P1Morphism>) {
                return weil_height(std::get<ProjectivePoint>(pt));
            } else if constexpr (std::is_same_v<T, LatticeSystem>) {
                const auto& v = std::get<RatVector>(pt);
                if (s.gram.is_rational()) return HeightValue::from_rational(s.gram.apply_exact(v));
                HeightValue h;
                h.value = s.gram.apply(v);
                return h;
            } else if constexpr (std::is_same_v<T, ConcreteAbelianSystem>) {
                const auto& x = std::get<std::vector<EPoint>>(pt);
                BallReal acc = BallReal::zero();
                BigRat tol = tolerance / BigRat((long)std::max<size_t>(1, x.size()));
                for (const auto& c : x) acc = acc + neron_tate(s.curve, c, tol).value;
                HeightValue h;
                h.value = acc;
                return h;
            } else if constexpr (std::is_same_v<T, WehlerSystem>) {
                const auto& w = std::get<WehlerPoint>(pt);
                // ample class (1,1,1): the sum of the coordinate heights
                HeightValue h;
                h.value = weil_height(w.x).value + weil_height(w.y).value + weil_height(w.z).value;
                return h;
            } else if constexpr (std::is_same_v<T, PicardAction>) {
                fail(errc::invalid_input, "Picard-only systems have no point heights");
            } else {
                auto pp = std::get<std::shared_ptr<const ProductPoint>>(pt);
                HeightValue l = system_height(*s.left, pp->left, tolerance / 2);
                HeightValue r = system_height(*s.right, pp->right, tolerance / 2);
                HeightValue h;
                h.value = l.value + r.value;
                if (l.exact_value && r.exact_value) h.exact_value = *l.exact_value + *r.exact_value;
                return h;
            }
        },
        sys.value);
}

namespace {

BallReal delta_from_rho(const SpectralData& s, std::optional<BigRat>& exact_out, bool square) {
    if (!square) {
        if (s.rho_sq && s.rho_sq->is_rational()) {
            BigRat r2 = s.rho_sq->rational_value();
            BigInt num_root, den_root;
            if (is_square(BigInt(r2.get_num()), &num_root) &&
                is_square(BigInt(r2.get_den()), &den_root)) {
                BigRat r(num_root, den_root);
                r.canonicalize();
                exact_out = r;
            }
        }
        return s.rho;
    }
    if (s.rho_sq && s.rho_sq->is_rational()) exact_out = s.rho_sq->rational_value();
    return s.rho.square();
}

SystemSpectral lattice_like_spectral(const RatMatrix& M, const std::optional<CMMatrix>& cm,
                                     int prec, const char* tag) {
    SpectralData sd = cm ? spectral_data(*cm, prec) : spectral_data(M, prec);
    SystemSpectral out;
    out.matrix_data = sd;
    out.delta = delta_from_rho(sd, out.delta_exact, true);
    out.l = 2 * sd.jordan_exponent;
    out.certification = sd.certification;
    out.tag = tag;
    return out;
}

int cmp_delta(const SystemSpectral& a, const SystemSpectral& b) {
    if (a.delta_exact && b.delta_exact)
        return *a.delta_exact < *b.delta_exact ? -1 : (*a.delta_exact > *b.delta_exact ? 1 : 0);
    if (a.delta.certainly_lt(b.delta)) return -1;
    if (b.delta.certainly_lt(a.delta)) return 1;
    // matching exact quadratic data still proves equality
    if (a.matrix_data && b.matrix_data && a.matrix_data->rho_sq && b.matrix_data->rho_sq &&
        quad_cmp(*a.matrix_data->rho_sq, *b.matrix_data->rho_sq) == 0)
        return 0;
    fail(errc::precision_exhausted, "product factors have unresolved dynamical degrees");
}

} // namespace

SystemSpectral system_spectral(const System& sys, int precision_bits) {
    int prec = precision_bits > 0 ? precision_bits : global_precision_bits();
    return std::visit(
        [&](const auto& s) -> SystemSpectral {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, P1Morphism>) {
                SystemSpectral out;
                out.delta_exact = BigRat((long)s.degree());
                out.delta = BallReal::exact(*out.delta_exact, prec);
                out.l = 0;
                out.tag = "polarized endomorphism: delta = deg, l = 0";
                return out;
            } else if constexpr (std::is_same_v<T, LatticeSystem>) {
                // translation ignored: it does not move numerical classes
                return lattice_like_spectral(s.matrix, s.cm_source, prec,
                                             "abelian lattice: delta = rho(A)^2, l = 2 l(A)");
            } else if constexpr (std::is_same_v<T, ConcreteAbelianSystem>) {
                return lattice_like_spectral(s.matrix, std::nullopt, prec,
                                             "abelian lattice: delta = rho(A)^2, l = 2 l(A)");
            } else if constexpr (std::is_same_v<T, WehlerSystem>) {
                SpectralData sd = spectral_data(s.picard_matrix(), prec);
                SystemSpectral out;
                out.matrix_data = sd;
                out.delta = delta_from_rho(sd, out.delta_exact, false);
                out.l = 0;
                out.certification = sd.certification;
                out.tag = "surface automorphism: delta = rho(f*), l = 0";
                return out;
            } else if constexpr (std::is_same_v<T, PicardAction>) {
                SpectralData sd = spectral_data(s.matrix, prec);
                SystemSpectral out;
                out.matrix_data = sd;
                out.delta = delta_from_rho(sd, out.delta_exact, false);
                out.l = sd.jordan_exponent;
                out.l_upper_bound_only = true; // matrix growth bounds l_f from above only
                out.certification = sd.certification;
                out.tag = "Picard action only: l reported as an upper bound";
                return out;
            } else {
                SystemSpectral L = system_spectral(*s.left, prec);
                SystemSpectral R = system_spectral(*s.right, prec);
                int c = cmp_delta(L, R);
                SystemSpectral out = c >= 0 ? L : R;
                if (c == 0) {
                    out.l = std::max(L.l, R.l);
                    out.l_upper_bound_only = L.l_upper_bound_only || R.l_upper_bound_only;
                    if (L.certification == Certification::numeric_certified ||
                        R.certification == Certification::numeric_certified)
                        out.certification = Certification::numeric_certified;
                }
                out.tag = "product: lexicographic max of the factors";
                return out;
            }
        },
        sys.value);
}

} // namespace heightlab
