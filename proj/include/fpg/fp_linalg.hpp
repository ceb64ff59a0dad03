#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fpg/errors.hpp"

namespace fpg {

using FpVector = std::vector<std::uint32_t>;

bool is_prime(std::uint32_t x);

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t mod);
std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

// base^exp as a plain integer; throws bound_error on 64-bit overflow.
std::uint64_t ipow(std::uint64_t base, std::uint32_t exp);

// Dense matrix over the prime field F_p. Row-major, entries stored reduced.
// p is restricted to 16 bits so rows of products accumulate in 64 bits
// without intermediate reductions.
class FpMatrix {
  public:
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);

    static FpMatrix identity(std::uint32_t p, std::size_t n);
    static FpMatrix from_rows(std::uint32_t p,
                              const std::vector<std::vector<std::uint32_t>>& rows);
    static FpMatrix from_columns(std::uint32_t p, std::size_t dim,
                                 const std::vector<FpVector>& columns);

    std::uint32_t p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint32_t v) { a_[r * cols_ + c] = v % p_; }

    bool operator==(const FpMatrix& o) const;
    bool operator!=(const FpMatrix& o) const { return !(*this == o); }

    FpMatrix operator+(const FpMatrix& o) const;
    FpMatrix operator-(const FpMatrix& o) const;
    FpMatrix operator*(const FpMatrix& o) const;
    FpMatrix scaled(std::uint32_t c) const;
    FpMatrix transpose() const;
    FpMatrix pow(std::uint64_t e) const;

    bool is_zero() const;
    bool is_identity() const;

    FpVector apply(const FpVector& v) const;             // M v
    FpVector apply_transposed(const FpVector& v) const;  // v^T M

    FpVector column(std::size_t c) const;
    FpVector row(std::size_t r) const;

    std::size_t rank() const;

    // Basis of the right null space {x : M x = 0}, read off the reduced
    // echelon form with free columns taken in ascending order. The order is
    // canonical; the module decompositions rely on it for determinism.
    std::vector<FpVector> kernel_basis() const;

    // One solution of M x = b with every free variable pinned to zero, or
    // nothing when the system is inconsistent.
    std::optional<FpVector> solve(const FpVector& b) const;
    std::optional<FpMatrix> solve_matrix(const FpMatrix& rhs) const;
    std::optional<FpMatrix> inverse() const;

  private:
    std::uint32_t p_;
    std::size_t rows_, cols_;
    std::vector<std::uint32_t> a_;
};

FpVector vec_reduced(std::uint32_t p, FpVector v);
FpVector vec_add(std::uint32_t p, const FpVector& a, const FpVector& b);
FpVector vec_sub(std::uint32_t p, const FpVector& a, const FpVector& b);
FpVector vec_scaled(std::uint32_t p, const FpVector& a, std::uint32_t c);
std::uint32_t vec_dot(std::uint32_t p, const FpVector& a, const FpVector& b);
bool vec_is_zero(const FpVector& v);

// Row-echelon accumulator for incremental independence and membership tests.
class IncrementalSpan {
  public:
    IncrementalSpan(std::uint32_t p, std::size_t dim);
    bool insert(FpVector v);  // true iff v enlarged the span
    bool contains(FpVector v) const;
    std::size_t rank() const { return rows_.size(); }

  private:
    FpVector reduce(FpVector v) const;
    std::uint32_t p_;
    std::size_t dim_;
    std::vector<FpVector> rows_;  // sorted by pivot, leading coefficient 1
    std::vector<std::size_t> pivots_;
};

}  // namespace fpg
