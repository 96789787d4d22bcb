#pragma once

#include <climits>
#include <functional>
#include <set>

#include "ttgeo/family.hpp"

namespace ttgeo {

constexpr unsigned kInf = UINT_MAX;
using ExpVec = std::vector<unsigned>; // descending, entries in N or kInf, no zeros
using Coords = std::map<u64, ExpVec>;

// A point of the profinite extension: a finite group, a per-prime vector
// with infinite entries (Z_p factors), or an explicit thread of stage members.
class ProfinitePoint {
public:
    enum class Kind { stabilizing, symbolic, thread };

    static ProfinitePoint stabilizing(Member G);
    static ProfinitePoint symbolic(Coords coords); // all-finite input collapses to stabilizing
    static ProfinitePoint thread(std::string name, std::function<Member(u64)> rule, u64 cap);
    static ProfinitePoint parse(std::string_view text); // "2:[inf,1]" or a group literal

    Kind kind() const { return kind_; }
    const Member& member() const;
    const Coords& coords() const { return coords_; }
    u64 cap() const { return cap_; }
    Member at(u64 n) const;

    std::string str() const;    // "Z_2+Z/2"
    std::string coord_str() const; // "2:[inf,1]"

    bool operator==(const ProfinitePoint& o) const;
    bool operator<(const ProfinitePoint& o) const;

private:
    Kind kind_ = Kind::stabilizing;
    Member member_;
    Coords coords_;
    std::string name_;
    std::function<Member(u64)> rule_;
    u64 cap_ = 0;
};

Coords coords_of(const FinAbGroup& G);
void require_point(const Family& F, const ProfinitePoint& x);
Member truncate(const Family& F, const ProfinitePoint& x, u64 n);

class ClopenSet {
public:
    ClopenSet(FamilyPtr F, u64 n, std::set<Member> S);
    static ClopenSet whole(FamilyPtr F);
    static ClopenSet empty(FamilyPtr F);

    const FamilyPtr& family() const { return F_; }
    u64 stage() const { return n_; }
    const std::set<Member>& members() const { return S_; }
    bool is_empty() const { return S_.empty(); }

    ClopenSet pullback(u64 m) const;  // m >= n
    ClopenSet normalized() const;     // least defining stage
    std::string str() const;

private:
    FamilyPtr F_;
    u64 n_;
    std::set<Member> S_;
};

ClopenSet meet(const ClopenSet& a, const ClopenSet& b);
ClopenSet join(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
bool equals(const ClopenSet& a, const ClopenSet& b);
bool subset(const ClopenSet& a, const ClopenSet& b);
bool member(const ProfinitePoint& x, const ClopenSet& C);

// stage members reflecting onto s (the fiber of q_{n<-m} over s)
std::vector<Member> stage_fiber(const Family& F, const Member& s, u64 n, u64 m);
// closed form: is the fiber of truncation over s at stage n a single point?
bool fiber_is_singleton(const Family& F, const Member& s, u64 n);

enum class Tri { yes, no, unknown };
std::string tri_name(Tri t);

class OpenSet {
public:
    enum class Kind { clopen, directed_union, isolated_family, whole };

    static OpenSet clopen(ClopenSet C);
    static OpenSet directed_union(FamilyPtr F, std::function<ClopenSet(u64)> enumerator, u64 budget = 16);
    static OpenSet isolated_family(FamilyPtr F, std::function<bool(const Member&)> pred, u64 budget = 16);
    static OpenSet whole(FamilyPtr F);

    Kind kind() const { return kind_; }
    const FamilyPtr& family() const { return F_; }
    const ClopenSet& as_clopen() const;
    ClopenSet at(u64 k) const;                  // directed union enumerator
    bool pred(const Member& m) const { return pred_(m); }
    u64 budget() const { return budget_; }

private:
    Kind kind_ = Kind::whole;
    FamilyPtr F_;
    std::optional<ClopenSet> clopen_;
    std::function<ClopenSet(u64)> enum_;
    std::function<bool(const Member&)> pred_;
    u64 budget_ = 16;
};

Tri member(const ProfinitePoint& x, const OpenSet& U);
Tri leq(const OpenSet& a, const OpenSet& b);
bool group_points_isolated(const Family& F);

struct PointSpace {
    std::vector<Member> finite_points;
    std::vector<ProfinitePoint> symbolic_points;
    bool extra_closed_point = false;
    std::string symbolic_description;
};

PointSpace point_space(const Family& F, u64 stage_cap);
bool is_isolated(const Family& F, const ProfinitePoint& x);

struct SpaceDesc {
    enum class Kind {
        finite_discrete,
        one_point_compactification, // of countably many copies of the child
        monotone_vectors,
        finite_product,
        prime_indexed_product,
        all_monotone_vectors // union of every monotone-vector space: families containing A(p)
    };
    Kind kind = Kind::finite_discrete;
    u64 k = 1;
    unsigned r = 0;
    std::vector<SpaceDesc> children;

    static SpaceDesc finite_discrete(u64 k);
    static SpaceDesc opc(SpaceDesc x);
    static SpaceDesc monotone(unsigned r);
    static SpaceDesc product(std::vector<SpaceDesc> xs);
    static SpaceDesc prime_product(SpaceDesc x);
    static SpaceDesc all_monotone();

    SpaceDesc unfold() const; // one step of S_r = (coprod S_{r-1})^+
    std::string str(bool ascii = false) const;
    bool operator==(const SpaceDesc&) const = default;
};

SpaceDesc space_description(const Family& F);

struct CbRank {
    bool omega = false;
    long value = 0; // -1 for the empty space
    std::string str() const { return omega ? "omega" : std::to_string(value); }
    bool operator==(const CbRank&) const = default;
};
CbRank cb_rank(const SpaceDesc& d);

ProfinitePoint embed_spectrum(const Family& F, const Family& F2, const ProfinitePoint& x);

} // namespace ttgeo
