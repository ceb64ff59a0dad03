#include "fpg/group_ring.hpp"

#include <string>

namespace fpg {

namespace {

// Pascal's triangle mod p up to row `rows`, addressed as binom[k][i].
std::vector<std::vector<std::uint32_t>> binomials_mod(std::uint32_t p, std::size_t rows) {
    std::vector<std::vector<std::uint32_t>> b(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        b[k].assign(k + 1, 1);
        for (std::size_t i = 1; i < k; ++i) b[k][i] = (b[k - 1][i - 1] + b[k - 1][i]) % p;
    }
    return b;
}

}  // namespace

GroupRingContext::GroupRingContext(std::uint32_t p_, std::uint32_t n_, std::uint64_t bound)
    : p(p_), n(n_) {
    if (!is_prime(p)) throw semantic_error("group order base " + std::to_string(p) + " is not prime");
    if (n < 1) throw semantic_error("cyclic group exponent n must be at least 1");
    const std::uint64_t ord = ipow(p, n);
    if (ord > bound)
        throw bound_error("group order " + std::to_string(ord) + " exceeds bound " +
                          std::to_string(bound));
    order = static_cast<std::size_t>(ord);
}

GroupRingElement::GroupRingElement(const GroupRingContext& ctx, FpVector coeffs)
    : ctx_(ctx), c_(std::move(coeffs)) {
    if (c_.size() != ctx_.order) throw shape_error("group ring element has wrong length");
    for (auto& x : c_) x %= ctx_.p;
}

GroupRingElement GroupRingElement::zero(const GroupRingContext& ctx) {
    return GroupRingElement(ctx, FpVector(ctx.order, 0));
}

GroupRingElement GroupRingElement::one(const GroupRingContext& ctx) {
    FpVector c(ctx.order, 0);
    c[0] = 1;
    return GroupRingElement(ctx, std::move(c));
}

GroupRingElement GroupRingElement::rho(const GroupRingContext& ctx) {
    return rho_power(ctx, 1);
}

GroupRingElement GroupRingElement::rho_power(const GroupRingContext& ctx, std::size_t k) {
    FpVector c(ctx.order, 0);
    if (k < ctx.order) c[k] = 1;  // rho^(p^n) and beyond vanish
    return GroupRingElement(ctx, std::move(c));
}

GroupRingElement GroupRingElement::sigma(const GroupRingContext& ctx) {
    FpVector c(ctx.order, 0);
    c[0] = 1;
    if (ctx.order > 1) c[1] = 1;
    return GroupRingElement(ctx, std::move(c));
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
    return GroupRingElement(ctx_, vec_add(ctx_.p, c_, o.c_));
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
    return GroupRingElement(ctx_, vec_sub(ctx_.p, c_, o.c_));
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
    // truncated convolution: rho is nilpotent of index p^n
    FpVector out(ctx_.order, 0);
    for (std::size_t i = 0; i < ctx_.order; ++i) {
        if (c_[i] == 0) continue;
        const std::uint64_t x = c_[i];
        for (std::size_t k = 0; i + k < ctx_.order; ++k) {
            if (o.c_[k] == 0) continue;
            std::uint64_t acc = out[i + k] + x * o.c_[k];
            out[i + k] = static_cast<std::uint32_t>(acc % ctx_.p);
        }
    }
    return GroupRingElement(ctx_, std::move(out));
}

FpVector sigma_to_rho(const GroupRingContext& ctx, const FpVector& group_coeffs) {
    if (group_coeffs.size() != ctx.order) throw shape_error("sigma_to_rho: wrong length");
    const auto binom = binomials_mod(ctx.p, ctx.order);
    FpVector out(ctx.order, 0);
    // sigma^k = sum_i C(k, i) rho^i
    for (std::size_t k = 0; k < ctx.order; ++k) {
        const std::uint64_t a = group_coeffs[k] % ctx.p;
        if (a == 0) continue;
        for (std::size_t i = 0; i <= k; ++i) {
            std::uint64_t acc = out[i] + a * binom[k][i];
            out[i] = static_cast<std::uint32_t>(acc % ctx.p);
        }
    }
    return out;
}

FpVector rho_to_sigma(const GroupRingContext& ctx, const FpVector& rho_coeffs) {
    if (rho_coeffs.size() != ctx.order) throw shape_error("rho_to_sigma: wrong length");
    const auto binom = binomials_mod(ctx.p, ctx.order);
    FpVector out(ctx.order, 0);
    // rho^i = (sigma - 1)^i = sum_k C(i, k) (-1)^(i-k) sigma^k
    for (std::size_t i = 0; i < ctx.order; ++i) {
        const std::uint64_t a = rho_coeffs[i] % ctx.p;
        if (a == 0) continue;
        for (std::size_t k = 0; k <= i; ++k) {
            std::uint64_t term = a * binom[i][k] % ctx.p;
            if ((i - k) % 2 == 1) term = (ctx.p - term) % ctx.p;
            out[k] = static_cast<std::uint32_t>((out[k] + term) % ctx.p);
        }
    }
    return out;
}

QuotientRing::QuotientRing(const GroupRingContext& ctx, std::size_t j) : ctx_(ctx), j_(j) {
    if (j < 1 || j > ctx.order)
        throw semantic_error("quotient length " + std::to_string(j) + " outside [1, " +
                             std::to_string(ctx.order) + "]");
}

FpVector QuotientRing::reduce(const FpVector& coeffs) const {
    FpVector out(j_, 0);
    for (std::size_t i = 0; i < j_ && i < coeffs.size(); ++i) out[i] = coeffs[i] % ctx_.p;
    return out;
}

FpVector QuotientRing::mul(const FpVector& a, const FpVector& b) const {
    if (a.size() != j_ || b.size() != j_) throw shape_error("quotient mul: wrong length");
    FpVector out(j_, 0);
    for (std::size_t i = 0; i < j_; ++i) {
        if (a[i] == 0) continue;
        const std::uint64_t x = a[i];
        for (std::size_t k = 0; i + k < j_; ++k) {
            std::uint64_t acc = out[i + k] + x * b[k];
            out[i + k] = static_cast<std::uint32_t>(acc % ctx_.p);
        }
    }
    return out;
}

std::uint32_t QuotientRing::lambda(const FpVector& a) const {
    if (a.size() != j_) throw shape_error("lambda: wrong length");
    return a[j_ - 1] % ctx_.p;
}

std::uint32_t QuotientRing::form_q(const FpVector& a, const FpVector& b) const {
    return lambda(mul(a, b));
}

FpMatrix QuotientRing::psi_matrix() const {
    FpMatrix psi(ctx_.p, j_, j_);
    for (std::size_t i = 0; i < j_; ++i) {
        for (std::size_t k = 0; k < j_; ++k) {
            FpVector a(j_, 0), b(j_, 0);
            a[i] = 1;
            b[k] = 1;
            psi.set(i, k, form_q(a, b));
        }
    }
    return psi;
}

FpMatrix QuotientRing::sigma_matrix() const {
    FpMatrix s(ctx_.p, j_, j_);
    for (std::size_t i = 0; i < j_; ++i) {
        s.set(i, i, 1);
        if (i + 1 < j_) s.set(i + 1, i, 1);  // sigma rho^i = rho^i + rho^(i+1)
    }
    return s;
}

std::optional<FpVector> QuotientRing::inverse(const FpVector& a) const {
    if (a.size() != j_) throw shape_error("inverse: wrong length");
    if (a[0] % ctx_.p == 0) return std::nullopt;  // non-units are the maximal ideal (rho)
    // solve a * x = 1 via the multiplication-by-a matrix
    FpMatrix m(ctx_.p, j_, j_);
    for (std::size_t k = 0; k < j_; ++k) {
        FpVector ek(j_, 0);
        ek[k] = 1;
        const FpVector col = mul(a, ek);
        for (std::size_t i = 0; i < j_; ++i) m.set(i, k, col[i]);
    }
    FpVector one(j_, 0);
    one[0] = 1;
    return m.solve(one);
}

}  // namespace fpg
