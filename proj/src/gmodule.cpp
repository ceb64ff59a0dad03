#include "fpg/gmodule.hpp"

#include <string>

namespace fpg {

EpsilonStructure::EpsilonStructure(FpMatrix m, std::uint32_t s_, std::uint32_t t_)
    : matrix(std::move(m)), s(s_), t(t_ % matrix.p()) {
    const std::uint32_t p = matrix.p();
    if (matrix.rows() != matrix.cols()) throw shape_error("epsilon matrix must be square");
    if (s == 0 || s % p == 0) throw semantic_error("epsilon order s must be nonzero mod p");
    if (t == 0) throw semantic_error("epsilon eigenvalue t must be a unit");
    if (pow_mod(t, s, p) != 1)
        throw semantic_error("epsilon eigenvalue t does not satisfy t^s = 1");
    if (!matrix.pow(s).is_identity())
        throw semantic_error("epsilon matrix does not have order dividing s");
    const std::uint32_t st = static_cast<std::uint32_t>(
        std::uint64_t(s % p) * pow_mod(t, s - 1, p) % p);
    z = inv_mod(st, p);
}

GModule::GModule(GroupRingContext ctx, FpMatrix sigma)
    : ctx_(ctx), sigma_(std::move(sigma)) {
    if (sigma_.rows() != sigma_.cols()) throw shape_error("sigma matrix must be square");
    if (sigma_.p() != ctx_.p) throw semantic_error("sigma matrix modulus differs from context");
    const FpMatrix r = sigma_ - FpMatrix::identity(ctx_.p, sigma_.rows());
    if (!r.pow(ctx_.order).is_zero())
        throw semantic_error("sigma does not generate a group of order dividing p^n: "
                             "(sigma - 1)^(p^n) is nonzero");
}

GModule::GModule(GroupRingContext ctx, FpMatrix sigma, EpsilonStructure eps)
    : GModule(std::move(ctx), std::move(sigma)) {
    if (eps.matrix.rows() != sigma_.rows())
        throw shape_error("epsilon matrix size differs from module dimension");
    if (eps.matrix.p() != ctx_.p) throw semantic_error("epsilon matrix modulus differs from context");
    if (eps.matrix * sigma_ != sigma_ * eps.matrix)
        throw semantic_error("epsilon does not commute with sigma");
    eps_ = std::move(eps);
}

FpMatrix GModule::rho() const {
    return sigma_ - FpMatrix::identity(ctx_.p, sigma_.rows());
}

FpMatrix GModule::ring_action(const FpVector& rho_coeffs) const {
    FpMatrix acc(ctx_.p, dim(), dim());
    FpMatrix power = FpMatrix::identity(ctx_.p, dim());
    const FpMatrix r = rho();
    for (std::size_t k = 0; k < rho_coeffs.size(); ++k) {
        if (k > 0) power = power * r;
        if (k >= ctx_.order) break;  // rho^(p^n) = 0
        const std::uint32_t c = rho_coeffs[k] % ctx_.p;
        if (c) acc = acc + power.scaled(c);
    }
    return acc;
}

GModule GModule::conjugated(const FpMatrix& q) const {
    auto qinv = q.inverse();
    if (!qinv) throw semantic_error("base change matrix is singular");
    const FpMatrix s = *qinv * sigma_ * q;
    if (eps_) {
        EpsilonStructure e(*qinv * eps_->matrix * q, eps_->s, eps_->t);
        return GModule(ctx_, s, std::move(e));
    }
    return GModule(ctx_, s);
}

JordanType jordan_type(const GModule& m) {
    const FpMatrix r = m.rho();
    std::vector<std::size_t> ranks;  // ranks[k] = rank(rho^k)
    ranks.push_back(m.dim());
    FpMatrix power = FpMatrix::identity(m.ctx().p, m.dim());
    while (ranks.back() > 0) {
        power = power * r;
        ranks.push_back(power.rank());
    }
    JordanType type;
    const std::size_t h = ranks.size() - 1;  // max block length
    for (std::size_t k = h; k >= 1; --k) {
        const std::size_t above = (k + 1 < ranks.size()) ? ranks[k + 1] : 0;
        const std::size_t mult = ranks[k - 1] - 2 * ranks[k] + above;
        for (std::size_t i = 0; i < mult; ++i) type.push_back(k);
    }
    return type;
}

FpMatrix canonical_sigma_block(std::uint32_t p, std::size_t len) {
    FpMatrix s(p, len, len);
    for (std::size_t i = 0; i < len; ++i) {
        s.set(i, i, 1);
        if (i + 1 < len) s.set(i + 1, i, 1);
    }
    return s;
}

FpMatrix blockdiag_sigma(std::uint32_t p, const JordanType& type) {
    std::size_t dim = 0;
    for (auto l : type) dim += l;
    FpMatrix s(p, dim, dim);
    std::size_t off = 0;
    for (auto l : type) {
        for (std::size_t i = 0; i < l; ++i) {
            s.set(off + i, off + i, 1);
            if (i + 1 < l) s.set(off + i + 1, off + i, 1);
        }
        off += l;
    }
    return s;
}

Decomposition decompose(const GModule& m) {
    const std::uint32_t p = m.ctx().p;
    const std::size_t dim = m.dim();
    const FpMatrix r = m.rho();

    // kernel bases of rho^k, canonical order
    std::vector<std::vector<FpVector>> ker;  // ker[k] for rho^k
    ker.push_back({});                       // rho^0 = identity
    FpMatrix power = FpMatrix::identity(p, dim);
    while (ker.back().size() < dim) {
        power = power * r;
        ker.push_back(power.kernel_basis());
    }
    const std::size_t h = ker.size() - 1;

    Decomposition out{{}, {}, FpMatrix(p, dim, dim == 0 ? 0 : dim)};
    if (dim == 0) return out;

    std::vector<FpVector> carry;  // rho-images of chain tops from the level above
    std::vector<FpVector> columns;
    for (std::size_t k = h; k >= 1; --k) {
        IncrementalSpan span(p, dim);
        for (const auto& v : ker[k - 1]) span.insert(v);
        std::vector<FpVector> level = std::move(carry);
        carry.clear();
        for (const auto& v : level)
            if (!span.insert(v))
                throw semantic_error("internal: dependent carried chain vector");
        for (const auto& cand : ker[k]) {
            if (span.insert(cand)) {
                level.push_back(cand);
                out.type.push_back(k);
                out.generators.push_back(cand);
            }
        }
        for (const auto& v : level) {
            const FpVector img = r.apply(v);
            if (!vec_is_zero(img)) carry.push_back(img);
        }
        if (k == 1) break;
    }

    // Heights were appended level by level (descending), but fresh tops at a
    // lower level interleave after carried ones; regenerate chains in the
    // recorded generator order, which is already height-descending.
    for (std::size_t c = 0; c < out.generators.size(); ++c) {
        FpVector v = out.generators[c];
        for (std::size_t i = 0; i < out.type[c]; ++i) {
            columns.push_back(v);
            v = r.apply(v);
        }
    }
    if (columns.size() != dim)
        throw semantic_error("internal: chain basis does not fill the module");
    out.basis_change = FpMatrix::from_columns(p, dim, columns);
    if (out.basis_change.rank() != dim)
        throw semantic_error("internal: chain basis is singular");
    return out;
}

std::size_t rho_height(const GModule& m, const FpVector& v) {
    const FpMatrix r = m.rho();
    FpVector w = vec_reduced(m.ctx().p, v);
    std::size_t h = 0;
    while (!vec_is_zero(w)) {
        ++h;
        if (h > m.dim()) throw semantic_error("internal: rho is not nilpotent on this vector");
        w = r.apply(w);
    }
    return h;
}

CyclicSubmodule cyclic_submodule(const GModule& m, const FpVector& v) {
    const std::size_t len = rho_height(m, v);
    if (len == 0) return CyclicSubmodule{GModule(m.ctx(), FpMatrix(m.ctx().p, 0, 0)), 0};
    return CyclicSubmodule{GModule(m.ctx(), canonical_sigma_block(m.ctx().p, len)), len};
}

GModule dual_module(const GModule& m) {
    if (m.epsilon()) {
        EpsilonStructure e(m.epsilon()->matrix.transpose(), m.epsilon()->s, m.epsilon()->t);
        return GModule(m.ctx(), m.sigma().transpose(), std::move(e));
    }
    return GModule(m.ctx(), m.sigma().transpose());
}

FpMatrix epsilon_projector(const GModule& m) {
    if (!m.epsilon()) throw precondition_error("module carries no epsilon action");
    const auto& e = *m.epsilon();
    const std::uint32_t p = m.ctx().p;
    FpMatrix acc(p, m.dim(), m.dim());
    FpMatrix power = FpMatrix::identity(p, m.dim());
    for (std::uint32_t i = 1; i <= e.s; ++i) {
        acc = acc + power.scaled(pow_mod(e.t, e.s - i, p));
        power = power * e.matrix;
    }
    return acc.scaled(e.z);
}

EigenspaceModule epsilon_eigenspace(const GModule& m) {
    if (!m.epsilon()) throw precondition_error("module carries no epsilon action");
    const auto& e = *m.epsilon();
    const std::uint32_t p = m.ctx().p;
    const FpMatrix shifted = e.matrix - FpMatrix::identity(p, m.dim()).scaled(e.t);
    const auto basis = shifted.kernel_basis();
    const FpMatrix b = FpMatrix::from_columns(p, m.dim(), basis);
    const FpMatrix sb = m.sigma() * b;
    auto restricted = b.solve_matrix(sb);
    if (!restricted) throw semantic_error("internal: sigma does not preserve the eigenspace");
    if (basis.empty())
        return EigenspaceModule{GModule(m.ctx(), FpMatrix(p, 0, 0)), basis};
    EpsilonStructure sub_eps(FpMatrix::identity(p, basis.size()).scaled(e.t), e.s, e.t);
    return EigenspaceModule{GModule(m.ctx(), *restricted, std::move(sub_eps)), basis};
}

}  // namespace fpg
