#ifndef HEIGHTLAB_FACTOR_HPP
#define HEIGHTLAB_FACTOR_HPP

#include <optional>
#include <utility>
#include <vector>

#include "heightlab/poly.hpp"

namespace heightlab {

// Built-in factorization works without hints up to this degree; beyond it the
// subset recombination cost is not worth paying at desk scale.
inline constexpr int factor_degree_limit = 12;

// Yun decomposition: p = c * prod q_i^{m_i}, q_i monic squarefree pairwise
// coprime, m_i strictly increasing. Only nonconstant parts are returned.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p);

// Full irreducible factorization over Q (monic factors, sorted), either by
// modular factorization + recombination (degree <= 12) or by verifying the
// supplied hints. Errors: degree_too_large, bad_hints.
std::vector<std::pair<RatPoly, int>> factor_rational(
    const RatPoly& p, const std::optional<std::vector<RatPoly>>& hints = std::nullopt);

// True when the certificate search proves irreducibility over Q: closed forms
// through degree 4, otherwise an irreducible reduction mod some prime.
bool certify_irreducible(const RatPoly& p);

} // namespace heightlab

#endif
