#ifndef HEIGHTLAB_MATRIX_HPP
#define HEIGHTLAB_MATRIX_HPP

#include <optional>
#include <string>
#include <vector>

#include "heightlab/poly.hpp"
#include "heightlab/rational.hpp"

namespace heightlab {

// Dense square matrix over Q with exact arithmetic.
class RatMatrix {
  public:
    RatMatrix() : n_(0) {}
    explicit RatMatrix(size_t n) : n_(n), e_(n * n, BigRat(0)) {}
    static RatMatrix identity(size_t n);
    static RatMatrix from_rows(const std::vector<RatVector>& rows);

    size_t dim() const { return n_; }
    BigRat& at(size_t i, size_t j) { return e_[i * n_ + j]; }
    const BigRat& at(size_t i, size_t j) const { return e_[i * n_ + j]; }

    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator*(const BigRat& c) const;
    RatVector operator*(const RatVector& v) const;
    bool operator==(const RatMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }
    RatMatrix pow(unsigned long e) const;
    RatMatrix transpose() const;
    BigRat trace() const;
    bool is_zero() const;
    bool is_symmetric() const;

    BigRat det() const;                      // fraction-free on a rational copy
    std::optional<RatMatrix> inverse() const;
    RatPoly char_poly() const;               // det(tI - M), monic, exact
    RatPoly min_poly() const;                // Krylov least annihilator, monic
    RatMatrix eval_poly(const RatPoly& p) const; // p(M)

    std::string to_string() const;

  private:
    size_t n_;
    RatVector e_;
};

// Matrix over the order Z[omega] with omega^2 = -d, stored as R + omega*W.
// d = 0 degenerates to a plain rational matrix.
struct CMMatrix {
    RatMatrix real_part;
    RatMatrix omega_part;
    unsigned long cm_d = 0;

    size_t dim() const { return real_part.dim(); }
    // Regular representation of omega as [[0, -d], [1, 0]] blocks: entry
    // a + b*omega becomes the 2x2 block [[a, -d*b], [b, a]]. Eigenvalues gain
    // their conjugates, which preserves the spectral radius and Jordan sizes.
    RatMatrix embed() const;
    CMMatrix operator*(const CMMatrix& o) const;
};

// Exact row reduction helpers used across the spectral and Z_f pipelines.
// Solves A x = b; empty optional when inconsistent.
std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b);
// Basis of the right kernel of A (possibly rectangular, rows x cols).
std::vector<RatVector> kernel_basis(const std::vector<RatVector>& rows, size_t cols);
std::vector<RatVector> kernel_basis(const RatMatrix& A);
size_t rank_of(std::vector<RatVector> rows);
// True if v lies in the span of the given vectors.
bool in_span(const std::vector<RatVector>& basis, const RatVector& v);

} // namespace heightlab

#endif
