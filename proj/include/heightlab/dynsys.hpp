#ifndef HEIGHTLAB_DYNSYS_HPP
#define HEIGHTLAB_DYNSYS_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "heightlab/elliptic.hpp"
#include "heightlab/forms.hpp"
#include "heightlab/projective.hpp"
#include "heightlab/spectral.hpp"

namespace heightlab {

// Endomorphism of P^1 given by a coprime pair of equal-degree integer forms.
class P1Morphism {
  public:
    // errors: degree_too_small (d <= 1), not_a_morphism (resultant 0)
    static P1Morphism validate(BinaryForm numerator, BinaryForm denominator);

    const BinaryForm& numerator() const { return num_; }
    const BinaryForm& denominator() const { return den_; }
    int degree() const { return num_.degree(); }
    const FormPairBounds& bounds() const { return bounds_; }
    const BigInt& resultant() const { return bounds_.resultant; }

    ProjectivePoint apply(const ProjectivePoint& P) const;

  private:
    P1Morphism() = default;
    BinaryForm num_, den_;
    FormPairBounds bounds_;
};

// Affine self-map v -> Av + p on a Mordell-Weil style lattice with a
// Neron-Tate Gram form. In CM mode the action is the 2r x 2r regular
// representation and the Gram form carries the compatible J.
struct LatticeSystem {
    RatMatrix matrix;            // action on Q^rank (embedded when CM)
    RatVector translation;       // possibly zero
    GramForm gram;
    std::optional<CMMatrix> cm_source;
    unsigned long cm_d = 0;

    size_t rank() const { return matrix.dim(); }
    RatVector apply(const RatVector& v) const;
    static LatticeSystem make(RatMatrix A, RatVector translation, GramForm gram);
    static LatticeSystem make_cm(CMMatrix A, RatVector translation_embedded, GramForm gram);
};

// x = (x_1..x_r) on E^r acted on coordinatewise by an integer matrix plus a
// translation tuple; every step is the exact group law.
struct ConcreteAbelianSystem {
    EllipticCurve curve;
    size_t r = 0;
    RatMatrix matrix; // integer entries
    std::vector<EPoint> translation;

    std::vector<EPoint> apply(const std::vector<EPoint>& x) const;
    static ConcreteAbelianSystem make(EllipticCurve curve, RatMatrix matrix,
                                      std::vector<EPoint> translation);
};

struct WehlerPoint {
    ProjectivePoint x, y, z;
    bool operator==(const WehlerPoint& o) const { return x == o.x && y == o.y && z == o.z; }
    std::string key() const { return x.key() + ";" + y.key() + ";" + z.key(); }
};

// (2,2,2) hypersurface in (P^1)^3 with its three Vieta involutions composed
// along a fixed word.
class WehlerSystem {
  public:
    // coefficient of xm_i * ym_j * zm_k at index 9i + 3j + k, where m_0 = u0^2,
    // m_1 = u0 u1, m_2 = u1^2 on each factor. The factor screen rejects
    // visibly split forms. word entries: 0, 1, 2 for sigma_x, sigma_y, sigma_z.
    static WehlerSystem validate(std::array<BigInt, 27> form, std::vector<int> word);

    const std::array<BigInt, 27>& form() const { return form_; }
    const std::vector<int>& word() const { return word_; }

    bool contains(const WehlerPoint& P) const; // F(P) = 0 exactly

    // single Vieta involution; errors: degenerate_fiber
    WehlerPoint involution(int axis, const WehlerPoint& P) const;
    // full word, applied left to right
    WehlerPoint apply(const WehlerPoint& P) const;

    RatMatrix picard_matrix() const; // product of the generators along the word
    static RatMatrix generator_matrix(int axis);

  private:
    WehlerSystem() = default;
    std::array<BigInt, 27> form_{};
    std::vector<int> word_;
};

// Bare f* action on N^1(X) with optional cone generators; spectral-only.
struct PicardAction {
    RatMatrix matrix;
    std::vector<RatVector> cone_generators;
    std::string label;
};

struct System;
using SystemPtr = std::shared_ptr<const System>;

struct ProductSystem {
    SystemPtr left, right;
};

struct System {
    std::variant<P1Morphism, LatticeSystem, ConcreteAbelianSystem, WehlerSystem, PicardAction,
                 ProductSystem>
        value;
    std::string label;
};

struct ProductPoint;

using SystemPoint = std::variant<ProjectivePoint, RatVector, std::vector<EPoint>, WehlerPoint,
                                 std::shared_ptr<const ProductPoint>>;

struct ProductPoint {
    SystemPoint left, right;
};

// Generic evaluation; errors: degenerate_fiber propagates, invalid_input for
// kind/point mismatches (PicardAction has no points).
SystemPoint apply_system(const System& sys, const SystemPoint& pt);
// canonical exact encoding for hashing and equality
std::string point_key(const SystemPoint& pt);
// decimal digits of the largest coordinate (drives the orbit height budget)
size_t point_digits(const SystemPoint& pt);
// ample height of a point under the system's preferred ample class
HeightValue system_height(const System& sys, const SystemPoint& pt, const BigRat& tolerance);

// Dynamical degree and growth exponent, tagged with the rule that covers
// the system's class.
struct SystemSpectral {
    BallReal delta;
    std::optional<BigRat> delta_exact;
    int l = 0;
    bool l_upper_bound_only = false;
    Certification certification = Certification::exact;
    std::string tag;
    std::optional<SpectralData> matrix_data;
};

SystemSpectral system_spectral(const System& sys, int precision_bits = 0);

} // namespace heightlab

#endif
