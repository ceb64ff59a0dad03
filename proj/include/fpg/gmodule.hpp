#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpg/errors.hpp"
#include "fpg/fp_linalg.hpp"
#include "fpg/group_ring.hpp"

namespace fpg {

// A semisimple auxiliary action commuting with sigma: a matrix of finite
// order s coprime to p, scalar t on the distinguished eigenspace. z is the
// normalizing constant making the averaging projector idempotent.
struct EpsilonStructure {
    FpMatrix matrix;
    std::uint32_t s = 1;
    std::uint32_t t = 1;
    std::uint32_t z = 1;

    EpsilonStructure(FpMatrix m, std::uint32_t s, std::uint32_t t);
};

// A finite-dimensional module over F_p[G], G cyclic of order p^n, given by
// the action of sigma as a matrix (columns are images of basis vectors).
class GModule {
  public:
    GModule(GroupRingContext ctx, FpMatrix sigma);
    GModule(GroupRingContext ctx, FpMatrix sigma, EpsilonStructure eps);

    const GroupRingContext& ctx() const { return ctx_; }
    std::size_t dim() const { return sigma_.rows(); }
    const FpMatrix& sigma() const { return sigma_; }
    FpMatrix rho() const;  // sigma - identity
    const std::optional<EpsilonStructure>& epsilon() const { return eps_; }

    // Action of a group ring element (coefficients in the rho basis).
    FpMatrix ring_action(const FpVector& rho_coeffs) const;

    // Base change x -> Q^{-1} x: sigma becomes Q^{-1} S Q.
    GModule conjugated(const FpMatrix& q) const;

  private:
    GroupRingContext ctx_;
    FpMatrix sigma_;
    std::optional<EpsilonStructure> eps_;
};

// Multiset of cyclic summand lengths, descending.
using JordanType = std::vector<std::size_t>;

JordanType jordan_type(const GModule& m);

// sigma on a single cyclic summand of the given length, in the basis
// g, rho g, rho^2 g, ...: ones on the diagonal and the subdiagonal.
FpMatrix canonical_sigma_block(std::uint32_t p, std::size_t len);
FpMatrix blockdiag_sigma(std::uint32_t p, const JordanType& type);

struct Decomposition {
    JordanType type;                  // descending lengths
    std::vector<FpVector> generators; // one chain top per summand, same order
    FpMatrix basis_change;            // columns g, rho g, ... per summand
};

// Splits the module into cyclic summands. Deterministic: kernels are read
// off canonical echelon forms, so equal inputs give identical output.
Decomposition decompose(const GModule& m);

// Largest k with rho^(k-1) v != 0 (0 for v = 0).
std::size_t rho_height(const GModule& m, const FpVector& v);

struct CyclicSubmodule {
    GModule sub;
    std::size_t length;
};

// The submodule generated by v, presented on the basis v, rho v, ...
CyclicSubmodule cyclic_submodule(const GModule& m, const FpVector& v);

// Contragredient module: sigma^{-T} would be the classical dual, but over
// this ring sigma^T defines the same isomorphism class and keeps entries
// small, matching the pairing built from the top-coefficient functional.
GModule dual_module(const GModule& m);

// Averaging projector z * sum_{i=1..s} t^{s-i} eps^{i-1} onto the
// t-eigenspace of eps. Requires the module to carry an EpsilonStructure.
FpMatrix epsilon_projector(const GModule& m);

struct EigenspaceModule {
    GModule sub;                    // sigma restricted to the eigenspace
    std::vector<FpVector> basis;    // columns embedding the eigenspace
};

// The t-eigenspace of eps as a module in its own right (sigma preserves it).
EigenspaceModule epsilon_eigenspace(const GModule& m);

}  // namespace fpg
