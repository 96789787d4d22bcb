#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ttgeo/abgroup.hpp"

namespace ttgeo {

// An object of an extensional table, identified by its label.
struct TableObject {
    std::string label;
    bool operator==(const TableObject&) const = default;
    auto operator<=>(const TableObject&) const = default;
};

using Member = std::variant<FinAbGroup, TableObject>;

std::string member_str(const Member& m);
const FinAbGroup& as_group(const Member& m); // throws unsupported-group for table objects

enum class FamilyKind {
    elementary_abelian,
    cyclic_p,
    cyclic_prime_order,
    cyclic_all,
    abelian_p_rank,
    abelian_rank,
    abelian_p_exponent,
    abelian_p,  // all abelian p-groups; ambient family of the Krull chain
    extensional
};

std::string kind_name(FamilyKind k);

enum class Predicate { widely_closed, unital, downward_closed, multiplicative_global, r_submultiplicative };
std::string predicate_name(Predicate p);
Predicate parse_predicate(const std::string& s);

struct PredicateResult {
    enum class Status { certified, refuted, unknown_at_cap };
    Status status = Status::unknown_at_cap;
    std::vector<Member> witness;
    std::string basis; // theorem citation, "exhaustive", or the reason for a refutation
};
std::string status_name(PredicateResult::Status s);

struct ExtensionalTable {
    std::vector<std::string> objects;
    std::vector<std::optional<FinAbGroup>> groups;      // set when the label is a group literal
    std::vector<std::vector<char>> epi;                 // reflexive, validated transitive
    std::map<std::string, size_t> index;
    std::map<std::pair<size_t, size_t>, u64> orbit_counts;       // optional metadata
    std::map<size_t, std::vector<std::string>> declared_quotients; // optional metadata
    std::optional<size_t> trivial;

    size_t at(const std::string& label) const;
    static std::shared_ptr<const ExtensionalTable> build(
        std::vector<std::string> objects, const std::vector<std::pair<std::string, std::string>>& epis,
        std::map<std::pair<std::string, std::string>, u64> orbit_counts = {},
        std::map<std::string, std::vector<std::string>> quotients = {});
    static std::shared_ptr<const ExtensionalTable> from_groups(const std::vector<FinAbGroup>& groups);
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::cyclic_p;
    u64 p = 0;
    unsigned r = 0;
    unsigned l = 0;
    std::shared_ptr<const ExtensionalTable> table;

    static FamilySpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

class Family;
using FamilyPtr = std::shared_ptr<const Family>;

struct FiltrationStage {
    u64 index = 1;
    std::vector<Member> members;
};

struct MinimalComplement {
    std::vector<Member> minimal;
    bool unbounded = false;
    bool complete = false;
    std::string certificate;
};

class Family : public std::enable_shared_from_this<Family> {
public:
    static FamilyPtr make(const FamilySpec& spec);
    static FamilyPtr from_json(const nlohmann::json& j) { return make(FamilySpec::from_json(j)); }

    const FamilySpec& spec() const { return spec_; }
    FamilyKind kind() const { return spec_.kind; }
    bool extensional() const { return spec_.kind == FamilyKind::extensional; }
    const ExtensionalTable& table() const;
    std::string key() const; // canonical identity used to reject cross-family mixing

    bool contains(const Member& G) const;
    void require(const Member& G) const; // throws membership-failure
    bool epi(const Member& a, const Member& b) const; // a >> b

    // Abelian kinds are described by a prime set, a rank bound, an exponent
    // bound and a bound on the number of primes involved.
    bool single_prime() const { return shape_.single; }
    u64 prime() const { return spec_.p; }
    std::optional<unsigned> rank_bound() const { return shape_.rank; }
    std::optional<unsigned> exponent_bound() const { return shape_.exponent; }
    bool allows_prime(u64 q) const;

    bool has_finite_filtration() const;
    unsigned exponent_cap(u64 q, u64 n) const; // l_q(n)
    FiltrationStage stage(u64 n) const;
    Member reflect(u64 n, const Member& G) const;
    u64 least_stage(const Member& G) const;

    // members of order <= cap (abelian kinds) or all objects (extensional)
    std::vector<Member> members_up_to(u64 order_cap) const;

    bool unital() const;
    const PredicateResult& flag(Predicate p) const;
    const std::map<Predicate, PredicateResult>& flags() const; // tables compute these lazily

    // Oracle route to the standard filtration: K_n(G) is the intersection of
    // all kernels N with G/N in the family of order <= n.
    std::vector<Member> oracle_stage_members(u64 n, u64 order_cap) const;
    Member oracle_reflect(u64 n, const Member& G) const;

    // number of Aut(G)-orbits of epis H -> G
    mpz_class orbit_count(const Member& H, const Member& G) const;
    bool has_orbit_counts(const Member& G) const;

private:
    struct Shape {
        bool single = true;
        std::optional<unsigned> rank, exponent, max_primes;
    };
    explicit Family(FamilySpec spec);

    FamilySpec spec_;
    Shape shape_;
    mutable std::map<Predicate, PredicateResult> flags_;
    mutable std::recursive_mutex flags_mu_;
    mutable std::mutex cache_mu_;
    mutable std::map<u64, FiltrationStage> cache_;
};

PredicateResult check_predicate(const Family& F, Predicate pred, u64 order_cap, unsigned r = 1);
MinimalComplement minimal_complement(const Family& F, const Member& G, u64 order_cap);

// F is a subfamily of F2 and downward closed inside it
bool is_downward_closed_in(const Family& F, const Family& F2, u64 order_cap = 64);

} // namespace ttgeo
