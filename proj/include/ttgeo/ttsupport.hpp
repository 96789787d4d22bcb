#pragma once

#include <memory>
#include <set>
#include <string_view>
#include <variant>

#include "ttgeo/spectrum.hpp"

namespace ttgeo {

class ObjectExpr;
using ExprPtr = std::shared_ptr<const ObjectExpr>;

// A formal compact object. Every constructor has an exactly computable support.
class ObjectExpr {
public:
    enum class Kind { zero, unit, gen, gen_twisted, chi, aug_cone, shift, sum, tensor };

    static ExprPtr zero();
    static ExprPtr unit();
    static ExprPtr gen(Member G);
    static ExprPtr gen_twisted(Member G, unsigned dim);
    static ExprPtr chi(Member G);
    static ExprPtr aug_cone(Member G);
    static ExprPtr shift(ExprPtr X, int k = 1);
    static ExprPtr sum(ExprPtr X, ExprPtr Y);
    static ExprPtr tensor(ExprPtr X, ExprPtr Y);

    Kind kind() const { return kind_; }
    const Member& group() const { return G_; }
    unsigned dim() const { return dim_; }
    int shift_amount() const { return shift_; }
    const ExprPtr& lhs() const { return a_; }
    const ExprPtr& rhs() const { return b_; }

    std::string str() const; // parses back with parse_expr
    std::vector<Member> leaves() const;

private:
    Kind kind_ = Kind::zero;
    Member G_;
    unsigned dim_ = 1;
    int shift_ = 0;
    ExprPtr a_, b_;
};

// Grammar: sum := tensor ("(+)" tensor)* ; tensor := factor ("(x)" factor)* ;
// factor := "shift" ["[" int "]"] factor | "(" sum ")" | "zero" | "unit"
//         | "e[" arg ["," dim] "]" | "aug[" arg "]" | "chi[" arg "]".
// Over elementary_abelian(p) a bare integer n stands for (Z/p)^n.
ExprPtr parse_expr(const Family& F, std::string_view text);
Member parse_member(const Family& F, const std::string& text);

void validate_expr(const Family& F, const ObjectExpr& X);

// pointwise: is X(H) nonzero?
bool in_support(const Family& F, const ObjectExpr& X, const Member& H);

// Finite or cofinite subset of N.
class NatSubset {
public:
    static NatSubset finite(std::set<u64> s);
    static NatSubset cofinite(std::set<u64> excluded);
    static NatSubset empty() { return finite({}); }
    static NatSubset all() { return cofinite({}); }

    bool is_cofinite() const { return cofinite_; }
    const std::set<u64>& listed() const { return listed_; } // members, or the excluded set if cofinite
    bool contains(u64 n) const { return cofinite_ != (listed_.count(n) > 0); }
    bool is_empty() const { return !cofinite_ && listed_.empty(); }
    bool is_all() const { return cofinite_ && listed_.empty(); }
    bool subset_of(const NatSubset& o) const;
    NatSubset unite(const NatSubset& o) const;
    NatSubset intersect(const NatSubset& o) const;
    std::string str() const; // "{}", "N", "{n >= 3}", "N \ {2,4}", "{1,5}"
    bool operator==(const NatSubset&) const = default;

private:
    bool cofinite_ = false;
    std::set<u64> listed_;
};

using Support = std::variant<ClopenSet, NatSubset>;
std::string support_str(const Support& s);

u64 defining_stage(const Family& F, const ObjectExpr& X);
ClopenSet hsupp_at_stage(const FamilyPtr& F, const ObjectExpr& X, u64 m);
Support hsupp(const FamilyPtr& F, const ExprPtr& X);
bool support_subset(const Support& a, const Support& b);
bool support_equal(const Support& a, const Support& b);

class ThickIdeal {
public:
    static ThickIdeal of(FamilyPtr F, std::vector<ExprPtr> gens);
    static ThickIdeal from_open(OpenSet U); // e.g. a directed union of clopens

    const FamilyPtr& family() const { return F_; }
    const std::vector<ExprPtr>& generators() const { return gens_; }
    const std::optional<Support>& support() const { return supp_; } // set when finitely generated
    const std::optional<OpenSet>& open() const { return open_; }
    bool is_whole() const;
    std::string str() const;

private:
    FamilyPtr F_;
    std::vector<ExprPtr> gens_;
    std::optional<Support> supp_;
    std::optional<OpenSet> open_;
};

ThickIdeal ideal_of(const FamilyPtr& F, std::vector<ExprPtr> gens);
Tri member(const ExprPtr& X, const ThickIdeal& I);
Tri leq(const ThickIdeal& I, const ThickIdeal& J);

class PrimeIdeal {
public:
    enum class Kind { point, family };

    const FamilyPtr& family() const { return F_; }
    Kind kind() const { return kind_; }
    const ProfinitePoint& point() const { return *x_; }
    const FamilyPtr& subfamily() const { return V_; }
    bool is_zero_ideal() const;
    std::string str() const;

    friend PrimeIdeal prime_of_point(const FamilyPtr& F, const ProfinitePoint& x);
    friend PrimeIdeal family_prime(const FamilyPtr& F, const FamilyPtr& V);

private:
    FamilyPtr F_;
    Kind kind_ = Kind::point;
    std::optional<ProfinitePoint> x_;
    FamilyPtr V_;
};

PrimeIdeal prime_of_point(const FamilyPtr& F, const ProfinitePoint& x);
PrimeIdeal family_prime(const FamilyPtr& F, const FamilyPtr& V);
bool member(const ExprPtr& X, const PrimeIdeal& P);

// A large member of V that lies in hsupp(X) iff hsupp(X) meets V.
FinAbGroup generic_member(const Family& V, const ObjectExpr& X);

struct ChainLink {
    PrimeIdeal prime;
    ExprPtr witness;          // lies in the previous prime but not in this one
    bool in_previous = false;
    bool not_in_this = false;
};
std::vector<ChainLink> krull_chain(u64 p, unsigned L);

NatSubset vi_class(u64 p, const ExprPtr& X);

struct IdealLattice {
    std::string family;
    std::string opens;              // the ideal lattice as opens of the spectrum
    std::string finitely_generated; // the sublattice of finitely generated ideals
    std::string on_group_points;
    std::optional<SpaceDesc> space;
};
IdealLattice classify_ideals(const Family& F, bool ascii = false);

// every clopen defined at stage n, in normal form, deduplicated
std::vector<ClopenSet> clopens_at_stage(const FamilyPtr& F, u64 n);

} // namespace ttgeo
