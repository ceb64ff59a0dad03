#pragma once

// Slow reference routines used to cross-check the library. Kept deliberately
// naive and separate from fp_linalg so a bug there cannot hide here.

#include <cstdint>
#include <vector>

namespace oracle {

using Vec = std::vector<std::uint32_t>;
using Mat = std::vector<Vec>;  // row major

inline std::uint32_t inv_mod_slow(std::uint32_t a, std::uint32_t p) {
    a %= p;
    for (std::uint32_t x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    return 0;
}

// textbook fraction-free row reduction, top row first, leftmost pivot first
inline std::size_t rank_slow(Mat m, std::uint32_t p) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] % p == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        const std::uint32_t inv = inv_mod_slow(m[rank][col], p);
        for (std::size_t c = 0; c < cols; ++c)
            m[rank][c] = std::uint32_t(std::uint64_t(m[rank][c]) * inv % p);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const std::uint32_t f = m[r][col] % p;
            if (f == 0) continue;
            for (std::size_t c = 0; c < cols; ++c)
                m[r][c] = std::uint32_t((m[r][c] + std::uint64_t(f) * (p - m[rank][c]) ) % p);
        }
        ++rank;
    }
    return rank;
}

inline Mat mul_slow(const Mat& a, const Mat& b, std::uint32_t p) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat out(n, Vec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
                out[i][j] = std::uint32_t((out[i][j] + std::uint64_t(a[i][t]) * b[t][j]) % p);
        }
    return out;
}

// Block multiset from the rank sequence of powers of (m - I). The multiset
// comes out ascending.
inline std::vector<std::size_t> block_lengths_slow(const Mat& sigma, std::uint32_t p) {
    const std::size_t dim = sigma.size();
    Mat rho = sigma;
    for (std::size_t i = 0; i < dim; ++i) rho[i][i] = (rho[i][i] + p - 1) % p;
    std::vector<std::size_t> ranks{dim};
    Mat pw(dim, Vec(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) pw[i][i] = 1;
    do {
        pw = mul_slow(pw, rho, p);
        ranks.push_back(rank_slow(pw, p));
    } while (ranks.back() > 0);
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < ranks.size(); ++k) {
        const std::size_t nxt = (k + 1 < ranks.size()) ? ranks[k + 1] : 0;
        const std::size_t mult = ranks[k - 1] - 2 * ranks[k] + nxt;
        for (std::size_t c = 0; c < mult; ++c) out.push_back(k);
    }
    return out;
}

}  // namespace oracle
