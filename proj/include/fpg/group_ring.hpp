#pragma once

#include <cstdint>
#include <vector>

#include "fpg/errors.hpp"
#include "fpg/fp_linalg.hpp"

namespace fpg {

// The group algebra F_p[G] for G cyclic of order p^n. With rho = sigma - 1,
// the algebra is F_p[rho]/(rho^(p^n)), so elements are coefficient vectors
// in the basis 1, rho, rho^2, ... of length p^n.
struct GroupRingContext {
    std::uint32_t p = 0;
    std::uint32_t n = 0;
    std::size_t order = 0;  // p^n

    GroupRingContext() = default;
    GroupRingContext(std::uint32_t p, std::uint32_t n, std::uint64_t bound = 243);
};

class GroupRingElement {
  public:
    GroupRingElement(const GroupRingContext& ctx, FpVector coeffs);

    static GroupRingElement zero(const GroupRingContext& ctx);
    static GroupRingElement one(const GroupRingContext& ctx);
    static GroupRingElement rho(const GroupRingContext& ctx);
    static GroupRingElement rho_power(const GroupRingContext& ctx, std::size_t k);
    static GroupRingElement sigma(const GroupRingContext& ctx);

    const GroupRingContext& ctx() const { return ctx_; }
    const FpVector& coeffs() const { return c_; }
    std::uint32_t coeff(std::size_t k) const { return c_[k]; }

    bool operator==(const GroupRingElement& o) const { return c_ == o.c_; }
    GroupRingElement operator+(const GroupRingElement& o) const;
    GroupRingElement operator-(const GroupRingElement& o) const;
    GroupRingElement operator*(const GroupRingElement& o) const;

    bool is_zero() const { return vec_is_zero(c_); }

  private:
    GroupRingContext ctx_;
    FpVector c_;  // coefficient of rho^k at index k
};

// Basis changes between the group basis sigma^0..sigma^(p^n - 1) and the
// rho-power basis. sigma^k = (1 + rho)^k expands by binomials.
FpVector sigma_to_rho(const GroupRingContext& ctx, const FpVector& group_coeffs);
FpVector rho_to_sigma(const GroupRingContext& ctx, const FpVector& rho_coeffs);

// The local quotient M_j = F_p[rho]/(rho^j) together with the trace-like
// functional lambda (top coefficient) and the pairing Q(a, b) = lambda(ab).
class QuotientRing {
  public:
    QuotientRing(const GroupRingContext& ctx, std::size_t j);

    const GroupRingContext& ctx() const { return ctx_; }
    std::size_t j() const { return j_; }

    FpVector reduce(const FpVector& coeffs) const;          // truncate past rho^(j-1)
    FpVector mul(const FpVector& a, const FpVector& b) const;
    std::uint32_t lambda(const FpVector& a) const;          // coefficient of rho^(j-1)
    std::uint32_t form_q(const FpVector& a, const FpVector& b) const;

    FpMatrix psi_matrix() const;    // Gram matrix of form_q in the rho basis
    FpMatrix sigma_matrix() const;  // multiplication by sigma = 1 + rho
    std::optional<FpVector> inverse(const FpVector& a) const;

  private:
    GroupRingContext ctx_;
    std::size_t j_;
};

}  // namespace fpg
