#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fpg/errors.hpp"
#include "fpg/fp_linalg.hpp"

namespace fpg {

struct GroupInvariants {
    std::uint64_t order = 0;
    std::uint64_t exponent = 0;
    std::uint32_t nilpotency_class = 0;
    std::uint32_t rank = 0;
    std::uint64_t frattini_order = 0;

    bool operator==(const GroupInvariants&) const = default;
};

// Invariants the underlying theory assigns to H(p, n, j, e); computed values
// are checked against these rather than the other way around.
GroupInvariants predicted_invariants(std::uint32_t p, std::uint32_t n, std::uint32_t j,
                                     std::uint32_t e);

struct CayleyTable {
    std::uint32_t p = 0, n = 0, j = 0, e = 0;
    std::uint64_t order = 0;
    std::vector<std::uint32_t> tab;  // tab[a * order + b]

    std::uint32_t at(std::uint64_t a, std::uint64_t b) const {
        return tab[a * order + b];
    }
};

// The extension of M_j (rho-power coordinates mod p) by the cyclic group of
// order p^n: elements are pairs (m, k), multiplication twists m by sigma^k1
// and adds e * rho^(j-1) whenever the k-components wrap past p^n. Elements
// are addressed by the index k + p^n * (base-p digits of m).
class MetacyclicPGroup {
  public:
    using Elem = std::uint64_t;

    MetacyclicPGroup(std::uint32_t p, std::uint32_t n, std::uint32_t j, std::uint32_t e,
                     std::uint64_t bound = 6561);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t j() const { return j_; }
    std::uint32_t e() const { return e_; }
    std::uint64_t order() const { return order_; }

    Elem identity() const { return 0; }
    Elem sigma_tilde() const { return 1; }               // (0, 1)
    Elem unit_of_m() const { return pn_; }               // (rho^0, 0)
    Elem rho_power_elem(std::uint32_t t) const;          // (rho^t, 0)
    Elem encode(const FpVector& m, std::uint64_t k) const;
    std::pair<FpVector, std::uint64_t> decode(Elem x) const;

    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem power(Elem a, std::uint64_t k) const;
    Elem commutator(Elem a, Elem b) const;  // a^-1 b^-1 a b
    Elem conjugate(Elem x, Elem g) const;   // g^-1 x g

    std::uint64_t element_order(Elem a) const;
    std::uint64_t exponent() const;  // full enumeration

    std::vector<Elem> generating_pair() const;  // {sigma_tilde, unit_of_m}

    std::unordered_set<Elem> subgroup_closure(const std::vector<Elem>& gens) const;

    struct NormalSubgroup {
        std::unordered_set<Elem> elements;
        std::vector<Elem> generators;
    };
    NormalSubgroup normal_closure(const std::vector<Elem>& gens) const;

    std::vector<std::unordered_set<Elem>> lower_central_series() const;
    std::uint32_t nilpotency_class() const;
    std::unordered_set<Elem> frattini_subgroup() const;
    std::uint32_t rank() const;
    GroupInvariants invariants() const;

    // True when x commutes with every element of the group.
    bool is_central(Elem x) const;

    // The quotient identifying rho^(j_target) M_j with zero; the cocycle
    // term e * rho^(j-1) dies unless j_target = j.
    MetacyclicPGroup quotient_group(std::uint32_t j_target, std::uint64_t bound = 6561) const;
    Elem project(Elem x, const MetacyclicPGroup& target) const;

    CayleyTable cayley_table(std::uint64_t bound = 512) const;
    std::string export_table(std::uint64_t bound = 512) const;
    std::string export_pc() const;

  private:
    std::uint32_t p_, n_, j_, e_;
    std::uint64_t pn_;     // p^n
    std::uint64_t order_;  // p^(j+n)
    std::uint32_t cocycle_;  // e, or p - e under the fault hook
    std::vector<std::vector<std::uint32_t>> sigma_pow_;  // sigma^k as j x j row-major, k < p^n

    void apply_sigma_pow(std::uint64_t k, const std::uint32_t* m, std::uint32_t* out) const;
};

// Wrappers matching the operation-level vocabulary used elsewhere.
MetacyclicPGroup make_group(std::uint32_t p, std::uint32_t n, std::uint32_t j,
                            std::uint32_t e, std::uint64_t bound = 6561);
GroupInvariants invariants(const MetacyclicPGroup& g);
MetacyclicPGroup quotient_to(const MetacyclicPGroup& g, std::uint32_t j_target,
                             std::uint64_t bound = 6561);
std::string export_group(const MetacyclicPGroup& g, const std::string& format,
                         std::uint64_t bound = 512);

std::string export_table(const MetacyclicPGroup& g, std::uint64_t bound = 512);
CayleyTable parse_table(const std::string& text);

std::optional<std::vector<std::uint32_t>> brute_isomorphic(const MetacyclicPGroup& a,
                                                           const MetacyclicPGroup& b,
                                                           std::uint64_t bound = 128);

// Searches for an isomorphism by mapping a generating pair of a onto
// order-matching candidate pairs of b. Orders must agree and stay small.
std::optional<std::vector<std::uint32_t>> brute_isomorphic(const CayleyTable& a,
                                                           const CayleyTable& b,
                                                           std::uint64_t bound = 128);

struct WittLink {
    std::uint32_t j_bottom = 0;  // the link is H_(j_bottom+1) -> H_(j_bottom)
    std::uint64_t kernel_order = 0;
    bool kernel_central = false;
    std::uint32_t rank_top = 0;
    std::uint32_t rank_bottom = 0;
    std::optional<bool> complement_exists;  // absent when the order is too big to search
};

// The chain of central extensions H_(j+1) -> H_j for j from p^i + c up to
// p^(i+1) - 1, all with e = 0. c = p^(i+1) - p^i yields the empty chain.
std::vector<WittLink> witt_chain(std::uint32_t p, std::uint32_t n, std::uint32_t i,
                                 std::uint64_t c, std::uint64_t bound = 177147);

}  // namespace fpg
