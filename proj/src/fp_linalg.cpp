#include "fpg/fp_linalg.hpp"

#include <algorithm>
#include <string>

namespace fpg {

bool is_prime(std::uint32_t x) {
    if (x < 2) return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t mod) {
    return static_cast<std::uint32_t>(pow_mod_u64(base % mod, exp, mod));
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    // mod must stay below 2^32 so the product fits in 64 bits.
    std::uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    a %= p;
    if (a == 0) throw semantic_error("inverse of zero mod " + std::to_string(p));
    return pow_mod(a, p - 2, p);
}

std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            throw bound_error("integer power overflows 64 bits");
        r *= base;
    }
    return r;
}

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {
    if (!is_prime(p)) throw semantic_error("matrix modulus " + std::to_string(p) + " is not prime");
    if (p > (1u << 16)) throw bound_error("prime too large for 16-bit entry storage");
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
    return m;
}

FpMatrix FpMatrix::from_rows(std::uint32_t p,
                             const std::vector<std::vector<std::uint32_t>>& rows) {
    if (rows.empty()) throw shape_error("from_rows: no rows");
    const std::size_t c = rows[0].size();
    FpMatrix m(p, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw shape_error("from_rows: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.a_[i * c + j] = rows[i][j] % p;
    }
    return m;
}

FpMatrix FpMatrix::from_columns(std::uint32_t p, std::size_t dim,
                                const std::vector<FpVector>& columns) {
    FpMatrix m(p, dim, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != dim) throw shape_error("from_columns: bad column length");
        for (std::size_t i = 0; i < dim; ++i) m.a_[i * columns.size() + j] = columns[j][i] % p;
    }
    return m;
}

bool FpMatrix::operator==(const FpMatrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
    if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix add shape mismatch");
    FpMatrix m(p_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = (a_[i] + o.a_[i]) % p_;
    return m;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
    if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix sub shape mismatch");
    FpMatrix m(p_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = (a_[i] + p_ - o.a_[i]) % p_;
    return m;
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
    if (p_ != o.p_ || cols_ != o.rows_) throw shape_error("matrix mul shape mismatch");
    FpMatrix m(p_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const std::uint64_t x = a_[i * cols_ + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                std::uint64_t acc = m.a_[i * o.cols_ + j] + x * o.a_[k * o.cols_ + j];
                m.a_[i * o.cols_ + j] = static_cast<std::uint32_t>(acc % p_);
            }
        }
    }
    return m;
}

FpMatrix FpMatrix::scaled(std::uint32_t c) const {
    FpMatrix m(p_, rows_, cols_);
    c %= p_;
    for (std::size_t i = 0; i < a_.size(); ++i)
        m.a_[i] = static_cast<std::uint32_t>(std::uint64_t(a_[i]) * c % p_);
    return m;
}

FpMatrix FpMatrix::transpose() const {
    FpMatrix m(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.a_[j * rows_ + i] = a_[i * cols_ + j];
    return m;
}

FpMatrix FpMatrix::pow(std::uint64_t e) const {
    if (rows_ != cols_) throw shape_error("pow of non-square matrix");
    FpMatrix r = identity(p_, rows_);
    FpMatrix b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool FpMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::uint32_t x) { return x == 0; });
}

bool FpMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    return *this == identity(p_, rows_);
}

FpVector FpMatrix::apply(const FpVector& v) const {
    if (v.size() != cols_) throw shape_error("apply: vector length mismatch");
    FpVector out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc += std::uint64_t(a_[i * cols_ + j]) * (v[j] % p_);
        out[i] = static_cast<std::uint32_t>(acc % p_);
    }
    return out;
}

FpVector FpMatrix::apply_transposed(const FpVector& v) const {
    if (v.size() != rows_) throw shape_error("apply_transposed: vector length mismatch");
    FpVector out(cols_, 0);
    for (std::size_t j = 0; j < cols_; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < rows_; ++i) acc += std::uint64_t(a_[i * cols_ + j]) * (v[i] % p_);
        out[j] = static_cast<std::uint32_t>(acc % p_);
    }
    return out;
}

FpVector FpMatrix::column(std::size_t c) const {
    FpVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = a_[i * cols_ + c];
    return out;
}

FpVector FpMatrix::row(std::size_t r) const {
    return FpVector(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
}

namespace {

// Reduced row echelon form in place. Returns pivot column per pivot row.
std::vector<std::size_t> reduced_echelon(std::uint32_t p, std::size_t rows, std::size_t cols,
                                         std::vector<std::uint32_t>& a) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i * cols + c] != 0) { sel = i; break; }
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
        const std::uint64_t inv = inv_mod(a[r * cols + c], p);
        for (std::size_t j = c; j < cols; ++j)
            a[r * cols + j] = static_cast<std::uint32_t>(a[r * cols + j] * inv % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const std::uint64_t f = a[i * cols + c];
            if (f == 0) continue;
            const std::uint64_t neg = p - f;
            for (std::size_t j = c; j < cols; ++j) {
                std::uint64_t acc = a[i * cols + j] + neg * a[r * cols + j];
                a[i * cols + j] = static_cast<std::uint32_t>(acc % p);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t FpMatrix::rank() const {
    auto a = a_;
    return reduced_echelon(p_, rows_, cols_, a).size();
}

std::vector<FpVector> FpMatrix::kernel_basis() const {
    auto a = a_;
    const auto pivots = reduced_echelon(p_, rows_, cols_, a);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<FpVector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        FpVector v(cols_, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const std::uint32_t coef = a[i * cols_ + f];
            if (coef) v[pivots[i]] = p_ - coef;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FpVector> FpMatrix::solve(const FpVector& b) const {
    if (b.size() != rows_) throw shape_error("solve: rhs length mismatch");
    const std::size_t w = cols_ + 1;
    std::vector<std::uint32_t> aug(rows_ * w);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug[i * w + j] = a_[i * cols_ + j];
        aug[i * w + cols_] = b[i] % p_;
    }
    const auto pivots = reduced_echelon(p_, rows_, w, aug);
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    FpVector x(cols_, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i * w + cols_];
    return x;
}

std::optional<FpMatrix> FpMatrix::solve_matrix(const FpMatrix& rhs) const {
    if (rhs.p_ != p_ || rhs.rows_ != rows_) throw shape_error("solve_matrix: rhs shape mismatch");
    FpMatrix x(p_, cols_, rhs.cols_);
    for (std::size_t j = 0; j < rhs.cols_; ++j) {
        auto xc = solve(rhs.column(j));
        if (!xc) return std::nullopt;
        for (std::size_t i = 0; i < cols_; ++i) x.a_[i * rhs.cols_ + j] = (*xc)[i];
    }
    return x;
}

std::optional<FpMatrix> FpMatrix::inverse() const {
    if (rows_ != cols_) throw shape_error("inverse of non-square matrix");
    auto inv = solve_matrix(identity(p_, rows_));
    if (inv && !((*this * *inv).is_identity())) return std::nullopt;
    return inv;
}

FpVector vec_reduced(std::uint32_t p, FpVector v) {
    for (auto& x : v) x %= p;
    return v;
}

FpVector vec_add(std::uint32_t p, const FpVector& a, const FpVector& b) {
    if (a.size() != b.size()) throw shape_error("vec_add length mismatch");
    FpVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] % p + b[i] % p) % p;
    return out;
}

FpVector vec_sub(std::uint32_t p, const FpVector& a, const FpVector& b) {
    if (a.size() != b.size()) throw shape_error("vec_sub length mismatch");
    FpVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] % p + p - b[i] % p) % p;
    return out;
}

FpVector vec_scaled(std::uint32_t p, const FpVector& a, std::uint32_t c) {
    FpVector out(a.size());
    c %= p;
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = static_cast<std::uint32_t>(std::uint64_t(a[i] % p) * c % p);
    return out;
}

std::uint32_t vec_dot(std::uint32_t p, const FpVector& a, const FpVector& b) {
    if (a.size() != b.size()) throw shape_error("vec_dot length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::uint64_t(a[i] % p) * (b[i] % p);
    return static_cast<std::uint32_t>(acc % p);
}

bool vec_is_zero(const FpVector& v) {
    return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

IncrementalSpan::IncrementalSpan(std::uint32_t p, std::size_t dim) : p_(p), dim_(dim) {
    if (!is_prime(p)) throw semantic_error("span modulus is not prime");
}

FpVector IncrementalSpan::reduce(FpVector v) const {
    for (auto& x : v) x %= p_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const std::uint32_t f = v[pivots_[i]];
        if (f == 0) continue;
        const std::uint64_t neg = p_ - f;
        for (std::size_t j = pivots_[i]; j < dim_; ++j) {
            std::uint64_t acc = v[j] + neg * rows_[i][j];
            v[j] = static_cast<std::uint32_t>(acc % p_);
        }
    }
    return v;
}

bool IncrementalSpan::insert(FpVector v) {
    if (v.size() != dim_) throw shape_error("span insert length mismatch");
    v = reduce(std::move(v));
    std::size_t piv = dim_;
    for (std::size_t j = 0; j < dim_; ++j)
        if (v[j] != 0) { piv = j; break; }
    if (piv == dim_) return false;
    const std::uint64_t inv = inv_mod(v[piv], p_);
    for (std::size_t j = piv; j < dim_; ++j)
        v[j] = static_cast<std::uint32_t>(v[j] * inv % p_);
    // keep rows ordered by pivot so reduce() stays one pass
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
}

bool IncrementalSpan::contains(FpVector v) const {
    if (v.size() != dim_) throw shape_error("span contains length mismatch");
    return vec_is_zero(reduce(std::move(v)));
}

}  // namespace fpg
