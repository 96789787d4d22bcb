#include "ttgeo/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ttgeo {

// ---------------- points ----------------

Coords coords_of(const FinAbGroup& G)
{
    Coords c;
    for (auto& [p, lam] : G.parts()) c[p] = ExpVec(lam.begin(), lam.end());
    return c;
}

static Coords clean(Coords c)
{
    Coords out;
    for (auto& [p, v] : c) {
        if (!is_prime(p)) throw Error("invalid-spec", "not a prime: " + std::to_string(p));
        ExpVec w;
        for (unsigned x : v) if (x != 0) w.push_back(x);
        std::sort(w.begin(), w.end(), std::greater<>());
        if (!w.empty()) out[p] = w;
    }
    return out;
}

static bool all_finite(const Coords& c)
{
    for (auto& [p, v] : c)
        for (unsigned x : v) if (x == kInf) return false;
    return true;
}

ProfinitePoint ProfinitePoint::stabilizing(Member G)
{
    ProfinitePoint x;
    x.kind_ = Kind::stabilizing;
    x.member_ = std::move(G);
    if (auto g = std::get_if<FinAbGroup>(&x.member_)) x.coords_ = coords_of(*g);
    return x;
}

ProfinitePoint ProfinitePoint::symbolic(Coords coords)
{
    coords = clean(std::move(coords));
    if (all_finite(coords)) {
        FinAbGroup::Parts parts;
        for (auto& [p, v] : coords) parts[p] = Partition(v.begin(), v.end());
        return stabilizing(FinAbGroup::from_parts(parts));
    }
    ProfinitePoint x;
    x.kind_ = Kind::symbolic;
    x.coords_ = std::move(coords);
    return x;
}

ProfinitePoint ProfinitePoint::thread(std::string name, std::function<Member(u64)> rule, u64 cap)
{
    ProfinitePoint x;
    x.kind_ = Kind::thread;
    x.name_ = std::move(name);
    x.rule_ = std::move(rule);
    x.cap_ = cap;
    return x;
}

ProfinitePoint ProfinitePoint::parse(std::string_view text)
{
    std::string t;
    for (char c : text) if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.find("inf") == std::string::npos) return stabilizing(FinAbGroup::parse(t));
    Coords c;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw Error("parse-error", "point literal '" + t + "' at column " + std::to_string(i) + ": " + why);
    };
    auto number = [&]() -> u64 {
        if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i]))) fail("expected a number");
        u64 v = 0;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            v = v * 10 + static_cast<u64>(t[i++] - '0');
            if (v > 1000000) fail("number out of range");
        }
        return v;
    };
    while (i < t.size()) {
        u64 p = number();
        if (!is_prime(p)) fail("not a prime");
        if (t.compare(i, 2, ":[") != 0) fail("expected ':['");
        i += 2;
        ExpVec v;
        while (true) {
            if (t.compare(i, 3, "inf") == 0) { v.push_back(kInf); i += 3; }
            else {
                u64 e = number();
                if (e > 64) fail("exponent out of range");
                v.push_back(static_cast<unsigned>(e));
            }
            if (i < t.size() && t[i] == ',') { ++i; continue; }
            if (i < t.size() && t[i] == ']') { ++i; break; }
            fail("expected ',' or ']'");
        }
        if (c.count(p)) fail("repeated prime");
        c[p] = v;
        if (i < t.size()) {
            if (t[i] != ';') fail("expected ';'");
            ++i;
        }
    }
    return symbolic(c);
}

const Member& ProfinitePoint::member() const
{
    if (kind_ != Kind::stabilizing) throw Error("invalid-spec", "point is not a finite group");
    return member_;
}

Member ProfinitePoint::at(u64 n) const
{
    if (kind_ != Kind::thread) throw Error("invalid-spec", "point is not a thread");
    if (n > cap_) throw Error("undecidable-at-cap", "thread '" + name_ + "' queried past its cap");
    return rule_(n);
}

std::string ProfinitePoint::str() const
{
    if (kind_ == Kind::thread) return "thread(" + name_ + ")";
    if (kind_ == Kind::stabilizing && std::holds_alternative<TableObject>(member_)) return member_str(member_);
    if (coords_.empty()) return "1";
    std::string s;
    for (auto& [p, v] : coords_)
        for (unsigned x : v) {
            if (!s.empty()) s += "+";
            s += x == kInf ? "Z_" + std::to_string(p) : "Z/" + std::to_string(ipow(p, x));
        }
    return s;
}

std::string ProfinitePoint::coord_str() const
{
    if (kind_ == Kind::thread) return str();
    if (kind_ == Kind::stabilizing && std::holds_alternative<TableObject>(member_)) return member_str(member_);
    if (coords_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [p, v] : coords_) {
        if (!first) os << ';';
        first = false;
        os << p << ":[";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            if (v[i] == kInf) os << "inf";
            else os << v[i];
        }
        os << ']';
    }
    return os.str();
}

bool ProfinitePoint::operator==(const ProfinitePoint& o) const
{
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::thread) return name_ == o.name_;
    if (kind_ == Kind::stabilizing) return member_ == o.member_;
    return coords_ == o.coords_;
}

bool ProfinitePoint::operator<(const ProfinitePoint& o) const
{
    if (kind_ != o.kind_) return kind_ < o.kind_;
    if (kind_ == Kind::thread) return name_ < o.name_;
    if (kind_ == Kind::stabilizing) return member_ < o.member_;
    return coords_ < o.coords_;
}

void require_point(const Family& F, const ProfinitePoint& x)
{
    switch (x.kind()) {
    case ProfinitePoint::Kind::stabilizing: F.require(x.member()); return;
    case ProfinitePoint::Kind::thread: {
        // compatibility: x(n) is a stage member and q_{n<-n+1} x(n+1) = x(n);
        // reflections compose, so consecutive stages suffice
        u64 cap = std::min<u64>(x.cap(), 4096);
        Member prev = x.at(1);
        for (u64 n = 1; n <= cap; ++n) {
            Member cur = n == 1 ? prev : x.at(n);
            F.require(cur);
            if (F.reflect(n, cur) != cur)
                throw Error("incompatible-thread", member_str(cur) + " is not a stage " + std::to_string(n) + " member");
            if (n > 1 && F.reflect(n - 1, cur) != prev)
                throw Error("incompatible-thread", "stages " + std::to_string(n - 1) + " and " + std::to_string(n) +
                                                       " of the thread do not match");
            prev = cur;
        }
        return;
    }
    case ProfinitePoint::Kind::symbolic: break;
    }
    if (F.extensional() || F.exponent_bound())
        throw Error("membership-failure", x.coord_str() + " is not a point of " + F.key());
    if (F.rank_bound() == std::nullopt && F.kind() != FamilyKind::abelian_p)
        throw Error("membership-failure", x.coord_str() + " is not a point of " + F.key());
    for (auto& [p, v] : x.coords()) {
        if (!F.allows_prime(p) || (F.rank_bound() && v.size() > *F.rank_bound()))
            throw Error("membership-failure", x.coord_str() + " is not a point of " + F.key());
    }
}

Member truncate(const Family& F, const ProfinitePoint& x, u64 n)
{
    switch (x.kind()) {
    case ProfinitePoint::Kind::stabilizing: return F.reflect(n, x.member());
    case ProfinitePoint::Kind::thread: return x.at(n);
    case ProfinitePoint::Kind::symbolic: break;
    }
    require_point(F, x);
    FinAbGroup::Parts parts;
    for (auto& [p, v] : x.coords()) {
        unsigned l = F.exponent_cap(p, n);
        Partition mu;
        for (unsigned e : v) mu.push_back(std::min(e, l));
        parts[p] = mu;
    }
    return FinAbGroup::from_parts(parts);
}

// ---------------- clopens ----------------

static void same_family(const ClopenSet& a, const ClopenSet& b)
{
    if (a.family()->key() != b.family()->key())
        throw Error("cross-family", "clopen sets over different families");
}

ClopenSet::ClopenSet(FamilyPtr F, u64 n, std::set<Member> S) : F_(std::move(F)), n_(n), S_(std::move(S))
{
    auto st = F_->stage(n_);
    std::set<Member> all(st.members.begin(), st.members.end());
    for (auto& m : S_)
        if (!all.count(m)) throw Error("membership-failure", member_str(m) + " is not in stage " + std::to_string(n_));
}

ClopenSet ClopenSet::whole(FamilyPtr F)
{
    auto st = F->stage(1);
    return ClopenSet(F, 1, std::set<Member>(st.members.begin(), st.members.end()));
}

ClopenSet ClopenSet::empty(FamilyPtr F)
{
    return ClopenSet(std::move(F), 1, {});
}

ClopenSet ClopenSet::pullback(u64 m) const
{
    if (m < n_) throw Error("invalid-spec", "pullback to an earlier stage");
    if (m == n_) return *this;
    std::set<Member> T;
    for (auto& y : F_->stage(m).members)
        if (S_.count(F_->reflect(n_, y))) T.insert(y);
    return ClopenSet(F_, m, std::move(T));
}

static std::vector<u64> change_points(const Family& F, u64 n)
{
    // stage(n) only changes at prime powers
    std::vector<u64> out{1};
    if (F.extensional()) return out;
    for (u64 k = 2; k <= n; ++k) {
        auto f = factorize(k);
        if (f.size() == 1 && F.allows_prime(f[0].first)) out.push_back(k);
    }
    return out;
}

ClopenSet ClopenSet::normalized() const
{
    for (u64 k : change_points(*F_, n_)) {
        if (k >= n_) break;
        std::set<Member> T;
        for (auto& s : S_) T.insert(F_->reflect(k, s));
        ClopenSet c(F_, k, T);
        if (c.pullback(n_).S_ == S_) return c;
    }
    // n itself may not be a change point: drop to the largest one below it
    auto cps = change_points(*F_, n_);
    u64 k = cps.back();
    if (k < n_) {
        std::set<Member> T(S_.begin(), S_.end());
        return ClopenSet(F_, k, T);
    }
    return *this;
}

std::string ClopenSet::str() const
{
    std::string s = "stage " + std::to_string(n_) + ": {";
    bool first = true;
    for (auto& m : S_) {
        s += (first ? "" : ", ") + member_str(m);
        first = false;
    }
    return s + "}";
}

ClopenSet meet(const ClopenSet& a, const ClopenSet& b)
{
    same_family(a, b);
    u64 m = std::max(a.stage(), b.stage());
    auto A = a.pullback(m), B = b.pullback(m);
    std::set<Member> T;
    for (auto& x : A.members()) if (B.members().count(x)) T.insert(x);
    return ClopenSet(a.family(), m, T).normalized();
}

ClopenSet join(const ClopenSet& a, const ClopenSet& b)
{
    same_family(a, b);
    u64 m = std::max(a.stage(), b.stage());
    auto A = a.pullback(m), B = b.pullback(m);
    std::set<Member> T = A.members();
    T.insert(B.members().begin(), B.members().end());
    return ClopenSet(a.family(), m, T).normalized();
}

ClopenSet complement(const ClopenSet& a)
{
    std::set<Member> T;
    for (auto& y : a.family()->stage(a.stage()).members)
        if (!a.members().count(y)) T.insert(y);
    return ClopenSet(a.family(), a.stage(), T).normalized();
}

bool equals(const ClopenSet& a, const ClopenSet& b)
{
    same_family(a, b);
    u64 m = std::max(a.stage(), b.stage());
    return a.pullback(m).members() == b.pullback(m).members();
}

bool subset(const ClopenSet& a, const ClopenSet& b)
{
    same_family(a, b);
    u64 m = std::max(a.stage(), b.stage());
    auto A = a.pullback(m), B = b.pullback(m);
    return std::includes(B.members().begin(), B.members().end(), A.members().begin(), A.members().end());
}

bool member(const ProfinitePoint& x, const ClopenSet& C)
{
    return C.members().count(truncate(*C.family(), x, C.stage())) > 0;
}

std::vector<Member> stage_fiber(const Family& F, const Member& s, u64 n, u64 m)
{
    std::vector<Member> out;
    for (auto& y : F.stage(m).members)
        if (F.reflect(n, y) == s) out.push_back(y);
    return out;
}

bool fiber_is_singleton(const Family& F, const Member& s, u64 n)
{
    F.require(s);
    if (F.extensional()) return true;
    if (!F.has_finite_filtration()) throw Error("unsupported", "family has no finite stages");
    auto& g = as_group(s);
    auto e = F.exponent_bound();
    auto can_grow = [&](u64 q, unsigned coord) {
        unsigned l = F.exponent_cap(q, n);
        return coord == l && (!e || l < *e);
    };
    for (auto& [q, lam] : g.parts()) {
        unsigned r = *F.rank_bound();
        for (unsigned i = 0; i < r; ++i)
            if (can_grow(q, i < lam.size() ? lam[i] : 0)) return false;
    }
    if (F.single_prime()) {
        if (g.parts().empty()) return !can_grow(F.prime(), 0);
        return true;
    }
    // a new prime can always be adjoined unless the prime budget is used up
    auto mp = F.kind() == FamilyKind::cyclic_prime_order ? std::optional<size_t>(1) : std::nullopt;
    return mp && g.parts().size() >= *mp;
}

std::string tri_name(Tri t)
{
    return t == Tri::yes ? "true" : t == Tri::no ? "false" : "unknown-at-cap";
}

// ---------------- open sets ----------------

bool group_points_isolated(const Family& F)
{
    if (F.extensional() || F.kind() == FamilyKind::elementary_abelian) return true;
    return F.single_prime() && F.rank_bound().has_value();
}

OpenSet OpenSet::clopen(ClopenSet C)
{
    OpenSet U;
    U.kind_ = Kind::clopen;
    U.F_ = C.family();
    U.clopen_ = std::move(C);
    return U;
}

OpenSet OpenSet::directed_union(FamilyPtr F, std::function<ClopenSet(u64)> enumerator, u64 budget)
{
    OpenSet U;
    U.kind_ = Kind::directed_union;
    U.F_ = std::move(F);
    U.enum_ = std::move(enumerator);
    U.budget_ = budget;
    return U;
}

OpenSet OpenSet::isolated_family(FamilyPtr F, std::function<bool(const Member&)> pred, u64 budget)
{
    if (!group_points_isolated(*F))
        throw Error("unsupported", "group points of " + F->key() + " are not all isolated");
    OpenSet U;
    U.kind_ = Kind::isolated_family;
    U.F_ = std::move(F);
    U.pred_ = std::move(pred);
    U.budget_ = budget;
    return U;
}

OpenSet OpenSet::whole(FamilyPtr F)
{
    OpenSet U;
    U.kind_ = Kind::whole;
    U.F_ = std::move(F);
    return U;
}

const ClopenSet& OpenSet::as_clopen() const
{
    if (!clopen_) throw Error("invalid-spec", "open set is not clopen");
    return *clopen_;
}

ClopenSet OpenSet::at(u64 k) const
{
    if (kind_ != Kind::directed_union) throw Error("invalid-spec", "open set is not a directed union");
    return enum_(k);
}

Tri member(const ProfinitePoint& x, const OpenSet& U)
{
    switch (U.kind()) {
    case OpenSet::Kind::whole: return Tri::yes;
    case OpenSet::Kind::clopen: return member(x, U.as_clopen()) ? Tri::yes : Tri::no;
    case OpenSet::Kind::isolated_family:
        if (x.kind() != ProfinitePoint::Kind::stabilizing) return Tri::no;
        return U.pred(x.member()) ? Tri::yes : Tri::no;
    case OpenSet::Kind::directed_union:
        for (u64 k = 1; k <= U.budget(); ++k)
            if (member(x, U.at(k))) return Tri::yes;
        return Tri::unknown;
    }
    return Tri::unknown;
}

// finite list of the points of a clopen, or nullopt if it has a non-isolated point
static std::optional<std::vector<Member>> finite_points(const ClopenSet& C)
{
    std::vector<Member> out;
    for (auto& s : C.members()) {
        if (!fiber_is_singleton(*C.family(), s, C.stage())) return std::nullopt;
        out.push_back(s);
    }
    return out;
}

Tri leq(const OpenSet& a, const OpenSet& b)
{
    if (a.family()->key() != b.family()->key()) throw Error("cross-family", "open sets over different families");
    using K = OpenSet::Kind;
    auto whole_clopen = [&](const ClopenSet& c) { return complement(c).is_empty(); };
    if (b.kind() == K::whole) return Tri::yes;
    if (a.kind() == K::whole) {
        if (b.kind() == K::clopen) return whole_clopen(b.as_clopen()) ? Tri::yes : Tri::no;
        if (b.kind() == K::isolated_family) return group_points_isolated(*a.family()) && a.family()->has_finite_filtration() &&
                                                           !finite_points(ClopenSet::whole(a.family()))
                                                       ? Tri::no
                                                       : Tri::unknown;
        for (u64 k = 1; k <= b.budget(); ++k)
            if (whole_clopen(b.at(k))) return Tri::yes;
        return Tri::unknown;
    }
    if (a.kind() == K::clopen) {
        auto& A = a.as_clopen();
        if (b.kind() == K::clopen) return subset(A, b.as_clopen()) ? Tri::yes : Tri::no;
        if (b.kind() == K::isolated_family) {
            auto pts = finite_points(A);
            if (!pts) return Tri::no; // A has a non-isolated point, b has none
            for (auto& m : *pts)
                if (!b.pred(m)) return Tri::no;
            return Tri::yes;
        }
        // compact clopen inside a directed union lies in one member
        for (u64 k = 1; k <= b.budget(); ++k)
            if (subset(A, b.at(k))) return Tri::yes;
        return Tri::unknown;
    }
    // a is a directed union or an isolated family: only refutations are decidable
    if (a.kind() == K::directed_union) {
        for (u64 k = 1; k <= a.budget(); ++k) {
            auto Ak = OpenSet::clopen(a.at(k));
            if (leq(Ak, b) == Tri::no) return Tri::no;
        }
        return Tri::unknown;
    }
    // isolated family: search its points over the stages up to the budget
    auto& F = *a.family();
    if (!F.has_finite_filtration()) return Tri::unknown;
    for (u64 k = 1; k <= a.budget(); ++k)
        for (auto& m : F.stage(k).members) {
            if (!a.pred(m)) continue;
            if (member(ProfinitePoint::stabilizing(m), b) == Tri::no) return Tri::no;
        }
    return Tri::unknown;
}

// ---------------- point space ----------------

static std::vector<ExpVec> vectors_with_inf(unsigned len, unsigned l)
{
    // weakly decreasing vectors of length <= len over {1..l, inf}, zeros dropped
    std::vector<ExpVec> out;
    ExpVec cur;
    std::function<void(unsigned)> rec = [&](unsigned bound) {
        out.push_back(cur);
        if (cur.size() == len) return;
        std::vector<unsigned> vals;
        if (bound == kInf) vals.push_back(kInf);
        for (unsigned v = std::min(bound == kInf ? l : bound, l); v >= 1; --v) vals.push_back(v);
        for (unsigned v : vals) {
            cur.push_back(v);
            rec(v);
            cur.pop_back();
        }
    };
    rec(kInf);
    return out;
}

PointSpace point_space(const Family& F, u64 stage_cap)
{
    PointSpace ps;
    if (F.kind() == FamilyKind::elementary_abelian) {
        for (unsigned k = 0; k <= stage_cap; ++k) ps.finite_points.push_back(FinAbGroup::elementary(F.prime(), k));
        ps.extra_closed_point = true;
        ps.symbolic_description = "one extra closed point: the zero ideal";
        return ps;
    }
    if (!F.has_finite_filtration()) throw Error("unsupported", "no point-space backend for " + F.key());
    ps.finite_points = F.stage(stage_cap).members;
    if (F.extensional() || F.exponent_bound()) {
        ps.symbolic_description = "none";
        return ps;
    }
    unsigned r = *F.rank_bound();
    std::vector<u64> qs = F.single_prime() ? std::vector<u64>{F.prime()} : primes_up_to(stage_cap);
    std::vector<Coords> acc{Coords{}};
    for (u64 q : qs) {
        unsigned l = F.exponent_cap(q, stage_cap);
        std::vector<Coords> next;
        for (auto& base : acc)
            for (auto& v : vectors_with_inf(r, l)) {
                if (l == 0 && !v.empty() && v.front() != kInf) continue;
                Coords c = base;
                if (!v.empty()) c[q] = v;
                next.push_back(c);
            }
        acc = std::move(next);
    }
    for (auto& c : acc)
        if (!all_finite(c)) ps.symbolic_points.push_back(ProfinitePoint::symbolic(c));
    std::sort(ps.symbolic_points.begin(), ps.symbolic_points.end());
    switch (F.kind()) {
    case FamilyKind::cyclic_p: ps.symbolic_description = "Z_p"; break;
    case FamilyKind::abelian_p_rank:
        ps.symbolic_description = "monotone vectors with an infinite entry (Z_p factors), finite entries <= stage exponent";
        break;
    default:
        ps.symbolic_description = "per-prime monotone vectors with an infinite entry, almost all zero";
        break;
    }
    return ps;
}

bool is_isolated(const Family& F, const ProfinitePoint& x)
{
    if (x.kind() == ProfinitePoint::Kind::thread)
        throw Error("undecidable-at-cap", "isolation of a generic thread needs a stabilization witness");
    require_point(F, x);
    if (F.extensional() || F.kind() == FamilyKind::elementary_abelian) return true;
    if (!F.has_finite_filtration()) throw Error("unsupported", "no isolation criterion for " + F.key());
    if (x.kind() == ProfinitePoint::Kind::symbolic) return false;
    if (F.single_prime()) return true;
    if (F.kind() == FamilyKind::cyclic_prime_order) return !as_group(x.member()).trivial();
    return false;
}

// ---------------- space descriptions ----------------

SpaceDesc SpaceDesc::finite_discrete(u64 k) { SpaceDesc d; d.kind = Kind::finite_discrete; d.k = k; return d; }
SpaceDesc SpaceDesc::opc(SpaceDesc x) { SpaceDesc d; d.kind = Kind::one_point_compactification; d.children = {std::move(x)}; return d; }
SpaceDesc SpaceDesc::monotone(unsigned r) { SpaceDesc d; d.kind = Kind::monotone_vectors; d.r = r; return d; }
SpaceDesc SpaceDesc::product(std::vector<SpaceDesc> xs) { SpaceDesc d; d.kind = Kind::finite_product; d.children = std::move(xs); return d; }
SpaceDesc SpaceDesc::prime_product(SpaceDesc x) { SpaceDesc d; d.kind = Kind::prime_indexed_product; d.children = {std::move(x)}; return d; }
SpaceDesc SpaceDesc::all_monotone() { SpaceDesc d; d.kind = Kind::all_monotone_vectors; return d; }

SpaceDesc SpaceDesc::unfold() const
{
    if (kind != Kind::monotone_vectors) return *this;
    if (r == 0) return finite_discrete(1);
    return opc(monotone(r - 1));
}

std::string SpaceDesc::str(bool ascii) const
{
    switch (kind) {
    case Kind::finite_discrete: return k == 1 ? "pt" : "D(" + std::to_string(k) + ")";
    case Kind::one_point_compactification:
        if (children[0] == finite_discrete(1) || children[0] == monotone(0)) return ascii ? "N+" : "ℕ⁺";
        return (ascii ? "(coprod_N " : "(⊔_ℕ ") + children[0].str(ascii) + (ascii ? ")^+" : ")⁺");
    case Kind::monotone_vectors:
        if (r == 0) return "pt";
        if (r == 1) return ascii ? "N+" : "ℕ⁺";
        return ascii ? "S_{<=" + std::to_string(r) + "}" : "Ŝ_{≤" + std::to_string(r) + "}";
    case Kind::finite_product: {
        std::string s;
        for (auto& c : children) s += (s.empty() ? "" : (ascii ? " x " : " × ")) + c.str(ascii);
        return s.empty() ? "pt" : s;
    }
    case Kind::prime_indexed_product: return (ascii ? "prod_p " : "∏_p ") + children[0].str(ascii);
    case Kind::all_monotone_vectors: return ascii ? "union_r S_{<=r}" : "⋃_r Ŝ_{≤r}";
    }
    return "?";
}

SpaceDesc space_description(const Family& F)
{
    switch (F.kind()) {
    case FamilyKind::cyclic_p:
    case FamilyKind::cyclic_prime_order: return SpaceDesc::opc(SpaceDesc::finite_discrete(1));
    case FamilyKind::abelian_p_rank: return SpaceDesc::monotone(F.spec().r);
    case FamilyKind::cyclic_all: return SpaceDesc::prime_product(SpaceDesc::monotone(1));
    case FamilyKind::abelian_rank: return SpaceDesc::prime_product(SpaceDesc::monotone(F.spec().r));
    case FamilyKind::extensional: return SpaceDesc::finite_discrete(F.table().objects.size());
    case FamilyKind::abelian_p: return SpaceDesc::all_monotone();
    case FamilyKind::elementary_abelian:
        throw Error("unsupported", "the spectrum of elementary_abelian is not profinite (see point_space)");
    case FamilyKind::abelian_p_exponent:
        throw Error("unsupported", "no structural description for abelian_p_exponent");
    }
    throw Error("unsupported", "unknown family");
}

CbRank cb_rank(const SpaceDesc& d)
{
    switch (d.kind) {
    case SpaceDesc::Kind::finite_discrete: return {false, d.k == 0 ? -1 : 0};
    case SpaceDesc::Kind::one_point_compactification: {
        auto c = cb_rank(d.children.at(0));
        if (c.omega) return c;
        if (c.value < 0) return {false, 0};
        return {false, c.value + 1};
    }
    case SpaceDesc::Kind::monotone_vectors: return cb_rank(d.unfold());
    case SpaceDesc::Kind::finite_product: {
        CbRank total{false, 0};
        for (auto& c : d.children) {
            auto x = cb_rank(c);
            if (x.value < 0 && !x.omega) return {false, -1};
            if (x.omega) total.omega = true;
            else total.value += x.value;
        }
        if (total.omega) total.value = 0;
        return total;
    }
    case SpaceDesc::Kind::prime_indexed_product:
        throw Error("unsupported-term", "Cantor-Bendixson rank of a prime-indexed product is not determined");
    case SpaceDesc::Kind::all_monotone_vectors: return {true, 0};
    }
    throw Error("unsupported-term", "unknown term");
}

ProfinitePoint embed_spectrum(const Family& F, const Family& F2, const ProfinitePoint& x)
{
    if (!is_downward_closed_in(F, F2)) throw Error("not-downward-closed", F.key() + " is not downward closed in " + F2.key());
    require_point(F, x);
    if (x.kind() == ProfinitePoint::Kind::thread)
        return ProfinitePoint::thread("embedded", [&F2, x](u64 n) { return F2.reflect(n, x.at(n)); }, x.cap());
    if (x.kind() == ProfinitePoint::Kind::stabilizing) {
        const Member& m = x.member();
        if (F.extensional() && !F2.extensional()) {
            auto g = F.table().groups[F.table().at(member_str(m))];
            if (!g) throw Error("unsupported-group", "table object without group data");
            return ProfinitePoint::stabilizing(*g);
        }
        if (!F.extensional() && F2.extensional()) {
            for (auto& o : F2.table().objects)
                if (F2.table().groups[F2.table().at(o)] == std::optional<FinAbGroup>(as_group(m)))
                    return ProfinitePoint::stabilizing(TableObject{o});
            throw Error("membership-failure", member_str(m) + " not in target table");
        }
        return x;
    }
    auto y = ProfinitePoint::symbolic(x.coords());
    require_point(F2, y);
    return y;
}

} // namespace ttgeo
