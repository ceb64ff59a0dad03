#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpg/errors.hpp"
#include "fpg/fp_linalg.hpp"
#include "fpg/gmodule.hpp"

namespace fpg {

// A module together with a linear functional e. The functional is stored on
// the whole space; the axioms below only constrain it on the annihilator
// submodule A = ker rho^(p^n - 1), which contains rho J.
struct IndexedModule {
    GModule module;
    FpVector e;  // row vector, one value per basis vector
};

// Encodes r = -infinity (distinguished summand of length 1).
constexpr int r_minus_infinity = -1;

struct AxiomViolation {
    std::string what;
    FpVector witness;
};

// Checks that epsilon (when present) acts as the scalar t and that e kills
// rho J. Returns one entry per offending basis vector, empty when clean.
std::vector<AxiomViolation> check_axioms(const IndexedModule& im);

// Canonical basis of A = ker rho^(p^n - 1).
std::vector<FpVector> annihilator_basis(const IndexedModule& im);

// Builds a module of prescribed shape: one distinguished summand of length
// p^r + 1 (length 1 when r = -infinity) with a nonzero functional value on
// its generator, plus one summand of length p^i per profile entry. The
// functional is then pulled back through a random module automorphism, so
// its support spreads across coordinates while sigma stays block diagonal.
IndexedModule generate_synthetic(std::uint32_t p, std::uint32_t n, int r,
                                 const std::vector<std::uint32_t>& profile,
                                 std::uint64_t seed, std::uint64_t bound = 243);

struct VSummand {
    FpVector generator;  // corrected so the functional vanishes on it
    std::uint32_t i;     // summand length is p^i
};

struct JepsilonDecomposition {
    FpVector u_generator;  // generator of the distinguished summand
    std::uint32_t u_value; // e(u_generator), always nonzero
    int r;                 // distinguished length is p^r + 1; r_minus_infinity for 1
    std::vector<VSummand> v_summands;  // lengths descending
};

// Splits the module into cyclic summands and normalizes the functional: the
// distinguished summand U is the shortest one whose generator sees e, every
// other generator is corrected by a multiple of u so that e vanishes on it.
// Throws degenerate_error when e vanishes on all of A, shape_error when the
// summand lengths do not fit the p^i / p^r + 1 pattern, minimality_error or
// semantic_error when e contradicts the axioms.
JepsilonDecomposition decompose_jepsilon(const IndexedModule& im);

enum class RealizationCase { full_ring, correction, exceptional };

const char* realization_case_name(RealizationCase c);

struct RealizationWitness {
    RealizationCase kind;
    FpVector w_generator;
    std::size_t realized_length;
    std::string realized_group;
    std::string target_group;
};

// Given gamma of height p^i + c with e(gamma) = 0, produces a generator w
// with e(w) = 0 spanning a summand long enough to absorb gamma: a full-ring
// summand if present, else the shortest summand of length p^j with j > i,
// else rho * u (which forces r >= i + 1; anything smaller is contradictory).
RealizationWitness realize_step(const IndexedModule& im, std::uint32_t i, std::uint64_t c,
                                const FpVector& gamma);

}  // namespace fpg
