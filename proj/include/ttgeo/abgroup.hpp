#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ttgeo/error.hpp"

namespace ttgeo {

using u64 = std::uint64_t;
using Partition = std::vector<unsigned>;

// small number theory
bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 n);
std::vector<std::pair<u64, unsigned>> factorize(u64 n);
u64 ipow(u64 base, unsigned e);          // throws Error("overflow") past 2^64
unsigned floor_log(u64 p, u64 n);        // largest l with p^l <= n, n >= 1

// partitions are descending lists of positive parts
Partition conjugate(const Partition& lambda);
bool dominated(const Partition& mu, const Partition& lambda); // mu_i <= lambda_i for all i
std::vector<Partition> partitions_of(unsigned n);
std::vector<Partition> partitions_in_box(unsigned max_len, unsigned max_part);

// Finite abelian group in primary form: prime -> descending partition.
class FinAbGroup {
public:
    using Parts = std::map<u64, Partition>;

    FinAbGroup() = default;
    static FinAbGroup from_parts(Parts parts);   // validates and normalizes
    static FinAbGroup cyclic(u64 n);
    static FinAbGroup p_group(u64 p, Partition lambda);
    static FinAbGroup elementary(u64 p, unsigned rank);

    const Parts& parts() const { return parts_; }
    bool trivial() const { return parts_.empty(); }
    u64 order() const;
    Partition partition(u64 p) const;            // empty if p does not divide the order
    unsigned rank(u64 p) const { return static_cast<unsigned>(partition(p).size()); }
    unsigned exponent_at(u64 p) const;           // lambda_1
    std::vector<u64> primes() const;
    std::vector<u64> cyclic_orders() const;      // p^lambda_i, primes ascending, parts descending

    std::string str() const;                     // "2:[2,1];3:[1]", trivial = "1"
    std::string pretty() const;                  // "Z/4+Z/2"
    static FinAbGroup parse(std::string_view text);

    bool operator==(const FinAbGroup& o) const { return parts_ == o.parts_; }
    // order first, then partitions by ascending prime
    std::strong_ordering operator<=>(const FinAbGroup& o) const;

private:
    Parts parts_;
};

FinAbGroup canonicalize(const std::vector<long long>& cyclic_orders);
bool epi_exists(const FinAbGroup& G, const FinAbGroup& H);
FinAbGroup product(const FinAbGroup& G, const FinAbGroup& H);
std::vector<FinAbGroup> quotient_classes(const FinAbGroup& G);

// all abelian groups of order <= cap, sorted
std::vector<FinAbGroup> abelian_groups_up_to(u64 cap);
std::vector<FinAbGroup> p_groups_up_to(u64 p, u64 cap);

// Number of subgroups N <= H with H/N isomorphic to G (equivalently, the
// number of Aut(G)-orbits of surjections H -> G). Closed form per prime.
mpz_class count_quotients_of_type(const FinAbGroup& H, const FinAbGroup& G);
mpz_class gaussian_binomial(unsigned n, unsigned k, u64 p);

// ---- element-level oracle ----

class ElementTable {
public:
    explicit ElementTable(const FinAbGroup& G);

    const FinAbGroup& group() const { return group_; }
    size_t order() const { return order_; }
    const std::vector<u64>& moduli() const { return moduli_; }
    size_t rank() const { return moduli_.size(); }
    size_t generator(size_t i) const { return strides_[i]; }

    std::vector<u64> digits(size_t x) const;
    size_t encode(const std::vector<u64>& d) const;
    size_t add(size_t a, size_t b) const;
    size_t neg(size_t a) const;
    size_t mul(size_t a, u64 k) const;
    u64 element_order(size_t a) const;

    // membership mask of the subgroup generated by gens
    std::vector<char> span(const std::vector<size_t>& gens) const;
    static size_t mask_size(const std::vector<char>& mask);

    // isomorphism type of a subgroup (mask) and of the quotient by it
    FinAbGroup subgroup_type(const std::vector<char>& mask) const;
    FinAbGroup quotient_type(const std::vector<char>& mask) const;

private:
    FinAbGroup group_;
    std::vector<u64> moduli_;
    std::vector<size_t> strides_;
    size_t order_ = 1;
};

// A homomorphism between abelian groups, stored as the images of the
// source table's generators in the target table.
struct Hom {
    std::vector<size_t> images;
    bool operator==(const Hom&) const = default;
    auto operator<=>(const Hom&) const = default;
};

size_t apply(const ElementTable& src, const ElementTable& tgt, const Hom& f, size_t x);
Hom compose(const ElementTable& a, const ElementTable& b, const ElementTable& c,
            const Hom& g, const Hom& f); // g o f : a -> b -> c
std::vector<char> kernel_mask(const ElementTable& src, const ElementTable& tgt, const Hom& f);
bool is_surjective(const ElementTable& src, const ElementTable& tgt, const Hom& f);

bool oracle_epi_exists(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap);
std::vector<Hom> oracle_epimorphisms(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap);
u64 oracle_count_epis(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap);
std::vector<FinAbGroup> oracle_wide_subgroups(const FinAbGroup& G, const FinAbGroup& K, u64 order_cap);
std::vector<std::vector<char>> oracle_subgroups(const ElementTable& T);
std::vector<FinAbGroup> oracle_quotient_classes(const FinAbGroup& G, u64 order_cap);

// invariant factors d1 | d2 | ... (length min(rows, cols))
std::vector<long long> smith_normal_form(const std::vector<std::vector<long long>>& M);
// type of G / <gens> computed through a relation matrix and SNF
FinAbGroup snf_quotient_type(const FinAbGroup& G, const std::vector<std::vector<long long>>& gens);

} // namespace ttgeo
