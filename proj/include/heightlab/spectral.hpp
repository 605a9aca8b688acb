#ifndef HEIGHTLAB_SPECTRAL_HPP
#define HEIGHTLAB_SPECTRAL_HPP

#include <optional>
#include <vector>

#include "heightlab/ball.hpp"
#include "heightlab/matrix.hpp"
#include "heightlab/quad.hpp"

namespace heightlab {

enum class Certification { exact, numeric_certified, heuristic };

std::string to_string(Certification c);

// Does every root of the factor sit at the maximal modulus?
enum class ModulusStructure { all_max, mixed, unknown };

struct DominantFactor {
    RatPoly factor;        // monic irreducible with a max-modulus root
    int min_poly_mult;     // its multiplicity in the minimal polynomial
    ModulusStructure structure;
    Certification cert;    // exact when the structure was decided exactly
};

struct SpectralData {
    BallReal rho;                    // certified spectral radius enclosure
    int jordan_exponent = 0;         // l(A)
    std::vector<DominantFactor> dominant_factors;
    Certification certification = Certification::exact;
    std::optional<QuadVal> rho_sq;   // exact rho^2 when degree <= 2 data allows
    RatPoly min_polynomial;
    RatPoly char_polynomial;
};

// Spectral radius, Jordan exponent and dominant-factor ledger of a rational
// matrix: rho from per-factor max root moduli (exact through degree 2,
// certified enclosures beyond), l(A) from minimal-polynomial multiplicities.
// Ties between distinct factors must be proved or excluded; unresolved ties
// raise precision_exhausted rather than guessing.
SpectralData spectral_data(const RatMatrix& M, int precision_bits = 0,
                           const std::optional<std::vector<RatPoly>>& factor_hints = std::nullopt);
// CM input goes through the 2r x 2r regular representation; conjugate
// eigenvalues join the spectrum, which changes neither rho nor Jordan sizes.
SpectralData spectral_data(const CMMatrix& M, int precision_bits = 0,
                           const std::optional<std::vector<RatPoly>>& factor_hints = std::nullopt);

struct PerronResult {
    std::vector<BallReal> eigenvector; // unit coordinate sum, inside the cone
    BallReal residual;                 // enclosure of ||M v - rho v||_inf
    BallReal rho_estimate;
};

// Power iteration inside an invariant simplicial cone, exact rational
// iterates. Errors: cone_violation, no_convergence.
PerronResult perron_eigenvector(const RatMatrix& M, const std::vector<RatVector>& cone_generators,
                                int precision_bits = 0, int budget = 20000);

// Brute-force growth fit of log ||M^n|| ~ n log(rho) + l log n + const; test
// oracle only, never a primary output.
std::pair<double, double> growth_exponent_oracle(const RatMatrix& M, int n_max);

} // namespace heightlab

#endif
