#include "heightlab/matrix.hpp"

#include <sstream>

#include "heightlab/errors.hpp"

namespace heightlab {

RatMatrix RatMatrix::identity(size_t n) {
    RatMatrix m(n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
    RatMatrix m(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) fail(errc::invalid_input, "matrix rows must be square");
        for (size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_input, "matrix dimension mismatch");
    RatMatrix r(n_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_input, "matrix dimension mismatch");
    RatMatrix r(n_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_input, "matrix dimension mismatch");
    RatMatrix r(n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t k = 0; k < n_; ++k) {
            const BigRat& a = at(i, k);
            if (a == 0) continue;
            for (size_t j = 0; j < n_; ++j) r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

RatMatrix RatMatrix::operator*(const BigRat& c) const {
    RatMatrix r(n_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
    if (v.size() != n_) fail(errc::invalid_input, "matrix/vector dimension mismatch");
    RatVector r(n_, BigRat(0));
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

RatMatrix RatMatrix::pow(unsigned long e) const {
    RatMatrix acc = identity(n_);
    RatMatrix base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix r(n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
    return r;
}

BigRat RatMatrix::trace() const {
    BigRat t(0);
    for (size_t i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

bool RatMatrix::is_zero() const {
    for (const auto& x : e_)
        if (x != 0) return false;
    return true;
}

bool RatMatrix::is_symmetric() const {
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = i + 1; j < n_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

BigRat RatMatrix::det() const {
    // plain rational Gaussian elimination; dimensions stay desk-scale
    RatMatrix m = *this;
    BigRat d(1);
    for (size_t col = 0; col < n_; ++col) {
        size_t piv = col;
        while (piv < n_ && m.at(piv, col) == 0) ++piv;
        if (piv == n_) return BigRat(0);
        if (piv != col) {
            for (size_t j = 0; j < n_; ++j) std::swap(m.at(piv, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        BigRat inv = BigRat(1) / m.at(col, col);
        for (size_t i = col + 1; i < n_; ++i) {
            if (m.at(i, col) == 0) continue;
            BigRat f = m.at(i, col) * inv;
            for (size_t j = col; j < n_; ++j) m.at(i, j) -= f * m.at(col, j);
        }
    }
    return d;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
    RatMatrix m = *this, inv = identity(n_);
    for (size_t col = 0; col < n_; ++col) {
        size_t piv = col;
        while (piv < n_ && m.at(piv, col) == 0) ++piv;
        if (piv == n_) return std::nullopt;
        if (piv != col)
            for (size_t j = 0; j < n_; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        BigRat f = BigRat(1) / m.at(col, col);
        for (size_t j = 0; j < n_; ++j) {
            m.at(col, j) *= f;
            inv.at(col, j) *= f;
        }
        for (size_t i = 0; i < n_; ++i) {
            if (i == col || m.at(i, col) == 0) continue;
            BigRat g = m.at(i, col);
            for (size_t j = 0; j < n_; ++j) {
                m.at(i, j) -= g * m.at(col, j);
                inv.at(i, j) -= g * inv.at(col, j);
            }
        }
    }
    return inv;
}

RatPoly RatMatrix::char_poly() const {
    // Faddeev-LeVerrier: exact, O(n^4) rational operations.
    size_t n = n_;
    RatVector c(n + 1, BigRat(0));
    c[n] = 1;
    RatMatrix Mk = *this;
    for (size_t k = 1; k <= n; ++k) {
        BigRat ck = -Mk.trace() / BigRat((long)k);
        c[n - k] = ck;
        if (k < n) {
            RatMatrix t = Mk;
            for (size_t i = 0; i < n; ++i) t.at(i, i) += ck;
            Mk = *this * t;
        }
    }
    return RatPoly(std::move(c));
}

RatPoly RatMatrix::min_poly() const {
    // Krylov chains on the standard basis; lcm of per-vector annihilators.
    RatPoly m = RatPoly::constant(BigRat(1));
    for (size_t s = 0; s < n_; ++s) {
        if ((size_t)m.degree() == n_) break;
        // reduced rows plus the combination that produced each pivot
        std::vector<RatVector> rows;       // reduced Krylov vectors
        std::vector<RatVector> combos;     // coefficients over powers of M
        std::vector<size_t> pivots;
        RatVector v(n_, BigRat(0));
        v[s] = 1;
        RatVector cur = v;
        for (size_t step = 0;; ++step) {
            RatVector red = cur;
            RatVector combo(step + 1, BigRat(0));
            combo[step] = 1;
            for (size_t r = 0; r < rows.size(); ++r) {
                const BigRat& x = red[pivots[r]];
                if (x == 0) continue;
                BigRat f = x;
                for (size_t j = 0; j < n_; ++j) red[j] -= f * rows[r][j];
                for (size_t j = 0; j < combos[r].size() && j < combo.size(); ++j)
                    combo[j] -= f * combos[r][j];
            }
            size_t piv = n_;
            for (size_t j = 0; j < n_; ++j)
                if (red[j] != 0) {
                    piv = j;
                    break;
                }
            if (piv == n_) {
                // dependency found: combo gives the annihilator of e_s
                m = lcm(m, RatPoly(RatVector(combo.begin(), combo.end())));
                break;
            }
            BigRat f = BigRat(1) / red[piv];
            for (auto& x : red) x *= f;
            for (auto& x : combo) x *= f;
            rows.push_back(std::move(red));
            combos.push_back(std::move(combo));
            pivots.push_back(piv);
            cur = *this * cur;
        }
    }
    return m.monic();
}

RatMatrix RatMatrix::eval_poly(const RatPoly& p) const {
    RatMatrix acc(n_);
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * *this;
        for (size_t d = 0; d < n_; ++d) acc.at(d, d) += p[(size_t)i];
    }
    return acc;
}

std::string RatMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < n_; ++i) {
        os << (i ? ", [" : "[");
        for (size_t j = 0; j < n_; ++j) os << (j ? ", " : "") << heightlab::to_string(at(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

RatMatrix CMMatrix::embed() const {
    size_t n = real_part.dim();
    if (omega_part.dim() != n) fail(errc::invalid_input, "CM matrix parts must share dimension");
    if (cm_d == 0 && !omega_part.is_zero())
        fail(errc::invalid_input, "d = 0 degenerates to a rational matrix; omega part must vanish");
    RatMatrix m(2 * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            m.at(2 * i, 2 * j) = real_part.at(i, j);
            m.at(2 * i + 1, 2 * j + 1) = real_part.at(i, j);
            m.at(2 * i, 2 * j + 1) = omega_part.at(i, j) * BigRat(-(long)cm_d);
            m.at(2 * i + 1, 2 * j) = omega_part.at(i, j);
        }
    return m;
}

CMMatrix CMMatrix::operator*(const CMMatrix& o) const {
    if (cm_d != o.cm_d) fail(errc::invalid_input, "CM parameter mismatch");
    CMMatrix r;
    r.cm_d = cm_d;
    r.real_part = real_part * o.real_part - (omega_part * o.omega_part) * BigRat((long)cm_d);
    r.omega_part = real_part * o.omega_part + omega_part * o.real_part;
    return r;
}

std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b) {
    size_t n = A.dim();
    if (b.size() != n) fail(errc::invalid_input, "solve: dimension mismatch");
    std::vector<RatVector> aug(n, RatVector(n + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = A.at(i, j);
        aug[i][n] = b[i];
    }
    size_t row = 0;
    std::vector<size_t> pivcol;
    for (size_t col = 0; col < n && row < n; ++col) {
        size_t piv = row;
        while (piv < n && aug[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(aug[piv], aug[row]);
        BigRat f = BigRat(1) / aug[row][col];
        for (auto& x : aug[row]) x *= f;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            BigRat g = aug[i][col];
            for (size_t j = col; j <= n; ++j) aug[i][j] -= g * aug[row][j];
        }
        pivcol.push_back(col);
        ++row;
    }
    for (size_t i = row; i < n; ++i)
        if (aug[i][n] != 0) return std::nullopt;
    RatVector x(n, BigRat(0));
    for (size_t r = 0; r < pivcol.size(); ++r) x[pivcol[r]] = aug[r][n];
    return x;
}

std::vector<RatVector> kernel_basis(const std::vector<RatVector>& rows_in, size_t cols) {
    std::vector<RatVector> rows = rows_in;
    size_t nrows = rows.size();
    size_t row = 0;
    std::vector<long> pivot_of_col(cols, -1);
    for (size_t col = 0; col < cols && row < nrows; ++col) {
        size_t piv = row;
        while (piv < nrows && rows[piv][col] == 0) ++piv;
        if (piv == nrows) continue;
        std::swap(rows[piv], rows[row]);
        BigRat f = BigRat(1) / rows[row][col];
        for (auto& x : rows[row]) x *= f;
        for (size_t i = 0; i < nrows; ++i) {
            if (i == row || rows[i][col] == 0) continue;
            BigRat g = rows[i][col];
            for (size_t j = col; j < cols; ++j) rows[i][j] -= g * rows[row][j];
        }
        pivot_of_col[col] = (long)row;
        ++row;
    }
    std::vector<RatVector> basis;
    for (size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        RatVector v(cols, BigRat(0));
        v[col] = 1;
        for (size_t c = 0; c < cols; ++c)
            if (pivot_of_col[c] >= 0) v[c] = -rows[(size_t)pivot_of_col[c]][col];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<RatVector> kernel_basis(const RatMatrix& A) {
    std::vector<RatVector> rows(A.dim(), RatVector(A.dim()));
    for (size_t i = 0; i < A.dim(); ++i)
        for (size_t j = 0; j < A.dim(); ++j) rows[i][j] = A.at(i, j);
    return kernel_basis(rows, A.dim());
}

size_t rank_of(std::vector<RatVector> rows) {
    if (rows.empty()) return 0;
    size_t cols = rows[0].size(), nrows = rows.size(), row = 0;
    for (size_t col = 0; col < cols && row < nrows; ++col) {
        size_t piv = row;
        while (piv < nrows && rows[piv][col] == 0) ++piv;
        if (piv == nrows) continue;
        std::swap(rows[piv], rows[row]);
        BigRat f = BigRat(1) / rows[row][col];
        for (auto& x : rows[row]) x *= f;
        for (size_t i = row + 1; i < nrows; ++i) {
            if (rows[i][col] == 0) continue;
            BigRat g = rows[i][col];
            for (size_t j = col; j < cols; ++j) rows[i][j] -= g * rows[row][j];
        }
        ++row;
    }
    return row;
}

bool in_span(const std::vector<RatVector>& basis, const RatVector& v) {
    std::vector<RatVector> rows = basis;
    size_t before = rank_of(rows);
    rows.push_back(v);
    return rank_of(rows) == before;
}

} // namespace heightlab
