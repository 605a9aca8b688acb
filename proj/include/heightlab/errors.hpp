#ifndef HEIGHTLAB_ERRORS_HPP
#define HEIGHTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heightlab {

// Error taxonomy shared by all modules. The CLI maps categories to exit codes.
enum class errc {
    invalid_input,        // malformed descriptions, dimension mismatches, bad points
    precision_exhausted,  // certified separation/refinement failed at max precision
    budget_exceeded,      // iteration or height budget ran out
    degree_too_large,     // factorization without hints beyond the built-in bound
    bad_hints,            // hint product mismatch or reducible hint detected
    not_a_morphism,       // vanishing resultant
    degenerate_fiber,     // Wehler fiber quadratic is identically degenerate
    no_convergence,       // cone power iteration exceeded its budget
    cone_violation,       // matrix does not preserve the declared cone
    factorization_needed, // discriminant has an unfactored part and no hint
    no_fixed_point,       // affine reduction failed (1 is an eigenvalue)
    mixed_modulus_factor, // dominant irreducible factor with roots of distinct moduli
    internal
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace heightlab

#endif
