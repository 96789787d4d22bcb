#include "ttgeo/ttsupport.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ttgeo {

// ---------------- expressions ----------------

ExprPtr ObjectExpr::zero()
{
    return std::make_shared<ObjectExpr>();
}

ExprPtr ObjectExpr::unit()
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::unit;
    return e;
}

ExprPtr ObjectExpr::gen(Member G)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::gen;
    e->G_ = std::move(G);
    return e;
}

ExprPtr ObjectExpr::gen_twisted(Member G, unsigned dim)
{
    if (dim == 0) throw Error("invalid-spec", "twisted generator needs a nonzero module");
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::gen_twisted;
    e->G_ = std::move(G);
    e->dim_ = dim;
    return e;
}

ExprPtr ObjectExpr::chi(Member G)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::chi;
    e->G_ = std::move(G);
    return e;
}

ExprPtr ObjectExpr::aug_cone(Member G)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::aug_cone;
    e->G_ = std::move(G);
    return e;
}

ExprPtr ObjectExpr::shift(ExprPtr X, int k)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::shift;
    e->a_ = std::move(X);
    e->shift_ = k;
    return e;
}

ExprPtr ObjectExpr::sum(ExprPtr X, ExprPtr Y)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::sum;
    e->a_ = std::move(X);
    e->b_ = std::move(Y);
    return e;
}

ExprPtr ObjectExpr::tensor(ExprPtr X, ExprPtr Y)
{
    auto e = std::make_shared<ObjectExpr>();
    e->kind_ = Kind::tensor;
    e->a_ = std::move(X);
    e->b_ = std::move(Y);
    return e;
}

// the trivial group prints as "{}" so that "1" never reads back as a rank
static std::string arg_str(const Member& m)
{
    if (auto g = std::get_if<FinAbGroup>(&m); g && g->order() == 1) return "{}";
    return member_str(m);
}

std::string ObjectExpr::str() const
{
    switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::unit: return "unit";
    case Kind::gen: return "e[" + arg_str(G_) + "]";
    case Kind::gen_twisted: return "e[" + arg_str(G_) + "," + std::to_string(dim_) + "]";
    case Kind::chi: return "chi[" + arg_str(G_) + "]";
    case Kind::aug_cone: return "aug[" + arg_str(G_) + "]";
    case Kind::shift:
        return (shift_ == 1 ? std::string("shift ") : "shift[" + std::to_string(shift_) + "] ") + a_->str();
    case Kind::sum: return "(" + a_->str() + " (+) " + b_->str() + ")";
    case Kind::tensor: return "(" + a_->str() + " (x) " + b_->str() + ")";
    }
    return "?";
}

std::vector<Member> ObjectExpr::leaves() const
{
    std::vector<Member> out;
    std::function<void(const ObjectExpr&)> rec = [&](const ObjectExpr& e) {
        switch (e.kind_) {
        case Kind::gen:
        case Kind::gen_twisted:
        case Kind::chi:
        case Kind::aug_cone: out.push_back(e.G_); break;
        case Kind::shift: rec(*e.a_); break;
        case Kind::sum:
        case Kind::tensor: rec(*e.a_); rec(*e.b_); break;
        default: break;
        }
    };
    rec(*this);
    return out;
}

// "C4", "C2xC6": products of cyclic groups
static std::optional<FinAbGroup> cyclic_shorthand(const std::string& t)
{
    if (t.empty() || t[0] != 'C') return std::nullopt;
    std::vector<long long> orders;
    size_t i = 0;
    while (i < t.size()) {
        if (t[i] != 'C') return std::nullopt;
        size_t j = ++i;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        if (j == i) return std::nullopt;
        if (j - i > 18) throw Error("parse-error", "cyclic order out of range: " + t);
        orders.push_back(std::stoll(t.substr(i, j - i)));
        if (orders.back() == 0) throw Error("parse-error", "cyclic order must be positive: " + t);
        i = j;
        if (i < t.size()) {
            if (t[i] != 'x') return std::nullopt;
            ++i;
            if (i == t.size()) return std::nullopt;
        }
    }
    return canonicalize(orders);
}

Member parse_member(const Family& F, const std::string& raw)
{
    std::string t;
    for (char c : raw) if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (F.extensional()) {
        auto& tab = F.table();
        if (tab.index.count(t)) return TableObject{t};
        std::optional<FinAbGroup> g = cyclic_shorthand(t);
        if (!g) try { g = FinAbGroup::parse(t); } catch (const Error&) {}
        if (g)
            for (size_t i = 0; i < tab.objects.size(); ++i)
                if (tab.groups[i] == g) return TableObject{tab.objects[i]};
        throw Error("membership-failure", "'" + t + "' is not an object of the table");
    }
    bool digits = !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    Member m;
    if (F.kind() == FamilyKind::elementary_abelian && digits) {
        if (t.size() > 3) throw Error("parse-error", "rank out of range: " + t);
        m = FinAbGroup::elementary(F.prime(), static_cast<unsigned>(std::stoul(t)));
    } else if (auto c = cyclic_shorthand(t)) {
        m = *c;
    } else {
        m = FinAbGroup::parse(t);
    }
    F.require(m);
    return m;
}

namespace {

class Parser {
public:
    Parser(const Family& F, std::string_view s) : F_(F), s_(s) {}

    ExprPtr run()
    {
        auto e = parse_sum();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const Family& F_;
    std::string_view s_;
    size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw Error("parse-error", "expression at column " + std::to_string(i_ + 1) + ": " + why);
    }
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(std::string_view w)
    {
        skip();
        return s_.substr(i_, w.size()) == w;
    }
    bool eat(std::string_view w)
    {
        if (!peek(w)) return false;
        i_ += w.size();
        return true;
    }
    bool eat_word(std::string_view w)
    {
        skip();
        if (s_.substr(i_, w.size()) != w) return false;
        size_t j = i_ + w.size();
        if (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) return false;
        i_ = j;
        return true;
    }
    // bracket argument up to a top-level ',' or ']'
    std::string arg()
    {
        std::string out;
        int depth = 0;
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (depth == 0 && (c == ']' || c == ',')) return out;
            if (c == '[') ++depth;
            if (c == ']') --depth;
            out += c;
            ++i_;
        }
        fail("unterminated '['");
    }
    Member member_arg()
    {
        size_t at = i_;
        std::string a = arg();
        if (a.empty()) fail("missing group argument");
        try {
            return parse_member(F_, a);
        } catch (const Error& e) {
            i_ = at;
            fail(e.what());
        }
    }
    long number()
    {
        skip();
        size_t st = i_;
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ == st || (i_ == st + 1 && s_[st] == '-')) fail("expected an integer");
        if (i_ - st > 6) fail("integer out of range");
        return std::stol(std::string(s_.substr(st, i_ - st)));
    }

    ExprPtr parse_sum()
    {
        auto e = parse_tensor();
        while (eat("(+)")) e = ObjectExpr::sum(e, parse_tensor());
        return e;
    }
    ExprPtr parse_tensor()
    {
        auto e = parse_factor();
        while (eat("(x)")) e = ObjectExpr::tensor(e, parse_factor());
        return e;
    }
    ExprPtr parse_factor()
    {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        if (eat_word("shift")) {
            int k = 1;
            if (eat("[")) {
                k = static_cast<int>(number());
                if (!eat("]")) fail("expected ']'");
            }
            return ObjectExpr::shift(parse_factor(), k);
        }
        if (peek("(+)") || peek("(x)")) fail("operator without left operand");
        if (eat("(")) {
            auto e = parse_sum();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (eat_word("zero")) return ObjectExpr::zero();
        if (eat_word("unit")) return ObjectExpr::unit();
        if (eat("e[")) {
            auto G = member_arg();
            if (eat(",")) {
                long d = number();
                if (d < 1) fail("module dimension must be >= 1");
                if (!eat("]")) fail("expected ']'");
                return ObjectExpr::gen_twisted(G, static_cast<unsigned>(d));
            }
            if (!eat("]")) fail("expected ']'");
            return ObjectExpr::gen(G);
        }
        if (eat("aug[")) {
            auto G = member_arg();
            if (!eat("]")) fail("expected ']'");
            return ObjectExpr::aug_cone(G);
        }
        if (eat("chi[")) {
            auto G = member_arg();
            if (!eat("]")) fail("expected ']'");
            return ObjectExpr::chi(G);
        }
        fail("expected an object");
    }
};

} // namespace

ExprPtr parse_expr(const Family& F, std::string_view text)
{
    auto e = Parser(F, text).run();
    validate_expr(F, *e);
    return e;
}

void validate_expr(const Family& F, const ObjectExpr& X)
{
    using K = ObjectExpr::Kind;
    switch (X.kind()) {
    case K::zero: return;
    case K::unit:
        if (!F.unital()) throw Error("not-unital", "unit needs a family containing the trivial group");
        return;
    case K::gen:
    case K::gen_twisted: F.require(X.group()); return;
    case K::chi:
        if (!F.extensional()) throw Error("unsupported-constructor", "chi objects need an essentially finite table");
        F.require(X.group());
        return;
    case K::aug_cone:
        F.require(X.group());
        if (!F.unital()) throw Error("not-unital", "augmentation cone needs the unit");
        if (!F.has_orbit_counts(X.group()))
            throw Error("needs-metadata", "epi orbit counts onto " + member_str(X.group()) + " are missing");
        return;
    case K::shift: validate_expr(F, *X.lhs()); return;
    case K::sum:
    case K::tensor:
        validate_expr(F, *X.lhs());
        validate_expr(F, *X.rhs());
        return;
    }
}

bool in_support(const Family& F, const ObjectExpr& X, const Member& H)
{
    using K = ObjectExpr::Kind;
    switch (X.kind()) {
    case K::zero: return false;
    case K::unit: return true;
    case K::gen:
    case K::gen_twisted: return F.epi(H, X.group());
    case K::chi: return H == X.group();
    case K::aug_cone: return F.orbit_count(H, X.group()) != 1;
    case K::shift: return in_support(F, *X.lhs(), H);
    case K::sum: return in_support(F, *X.lhs(), H) || in_support(F, *X.rhs(), H);
    case K::tensor: return in_support(F, *X.lhs(), H) && in_support(F, *X.rhs(), H);
    }
    return false;
}

// ---------------- N subsets ----------------

NatSubset NatSubset::finite(std::set<u64> s)
{
    NatSubset n;
    n.listed_ = std::move(s);
    return n;
}

NatSubset NatSubset::cofinite(std::set<u64> excluded)
{
    NatSubset n;
    n.cofinite_ = true;
    n.listed_ = std::move(excluded);
    return n;
}

bool NatSubset::subset_of(const NatSubset& o) const
{
    if (!cofinite_) {
        for (u64 x : listed_) if (!o.contains(x)) return false;
        return true;
    }
    if (!o.cofinite_) return false;
    // complement of o must lie in complement of this
    return std::includes(listed_.begin(), listed_.end(), o.listed_.begin(), o.listed_.end());
}

NatSubset NatSubset::unite(const NatSubset& o) const
{
    if (!cofinite_ && !o.cofinite_) {
        auto s = listed_;
        s.insert(o.listed_.begin(), o.listed_.end());
        return finite(s);
    }
    std::set<u64> ex;
    if (cofinite_ && o.cofinite_) {
        for (u64 x : listed_) if (o.listed_.count(x)) ex.insert(x);
    } else {
        auto& c = cofinite_ ? *this : o;
        auto& f = cofinite_ ? o : *this;
        for (u64 x : c.listed_) if (!f.listed_.count(x)) ex.insert(x);
    }
    return cofinite(ex);
}

NatSubset NatSubset::intersect(const NatSubset& o) const
{
    if (cofinite_ && o.cofinite_) {
        auto s = listed_;
        s.insert(o.listed_.begin(), o.listed_.end());
        return cofinite(s);
    }
    std::set<u64> in;
    if (!cofinite_ && !o.cofinite_) {
        for (u64 x : listed_) if (o.listed_.count(x)) in.insert(x);
    } else {
        auto& c = cofinite_ ? *this : o;
        auto& f = cofinite_ ? o : *this;
        for (u64 x : f.listed_) if (!c.listed_.count(x)) in.insert(x);
    }
    return finite(in);
}

static std::string brace_list(const std::set<u64>& s)
{
    std::string out = "{";
    bool first = true;
    for (u64 x : s) {
        out += (first ? "" : ",") + std::to_string(x);
        first = false;
    }
    return out + "}";
}

std::string NatSubset::str() const
{
    if (!cofinite_) return brace_list(listed_);
    if (listed_.empty()) return "N";
    // an initial segment {0..k-1} removed
    if (*listed_.begin() == 0 && *listed_.rbegin() == listed_.size() - 1)
        return "{n >= " + std::to_string(listed_.size()) + "}";
    return "N \\ " + brace_list(listed_);
}

std::string support_str(const Support& s)
{
    if (auto n = std::get_if<NatSubset>(&s)) return n->str();
    return std::get<ClopenSet>(s).str();
}

// ---------------- hsupp ----------------

u64 defining_stage(const Family& F, const ObjectExpr& X)
{
    if (F.extensional()) return 1;
    if (!F.has_finite_filtration()) throw Error("unsupported", "no finite stages for " + F.key());
    u64 n = 1;
    for (auto& G : X.leaves()) n = std::max(n, F.least_stage(G));
    return n;
}

ClopenSet hsupp_at_stage(const FamilyPtr& F, const ObjectExpr& X, u64 m)
{
    validate_expr(*F, X);
    std::set<Member> S;
    for (auto& H : F->stage(m).members)
        if (in_support(*F, X, H)) S.insert(H);
    return ClopenSet(F, m, std::move(S));
}

static NatSubset elementary_support(const Family& F, const ObjectExpr& X)
{
    u64 M = 0;
    for (auto& G : X.leaves()) M = std::max<u64>(M, as_group(G).rank(F.prime()));
    M += 1;
    // constant from M on: every leaf is decided by m >= rank or m != rank
    auto at = [&](u64 m) { return in_support(F, X, FinAbGroup::elementary(F.prime(), static_cast<unsigned>(m))); };
    std::set<u64> listed;
    bool tail = at(M);
    for (u64 m = 0; m < M; ++m)
        if (at(m) != tail) listed.insert(m);
    return tail ? NatSubset::cofinite(listed) : NatSubset::finite(listed);
}

Support hsupp(const FamilyPtr& F, const ExprPtr& X)
{
    validate_expr(*F, *X);
    if (F->kind() == FamilyKind::elementary_abelian) return elementary_support(*F, *X);
    return hsupp_at_stage(F, *X, defining_stage(*F, *X)).normalized();
}

bool support_subset(const Support& a, const Support& b)
{
    if (a.index() != b.index()) throw Error("cross-family", "supports of different shapes");
    if (auto n = std::get_if<NatSubset>(&a)) return n->subset_of(std::get<NatSubset>(b));
    return subset(std::get<ClopenSet>(a), std::get<ClopenSet>(b));
}

bool support_equal(const Support& a, const Support& b)
{
    return support_subset(a, b) && support_subset(b, a);
}

static Support empty_support(const FamilyPtr& F)
{
    if (F->kind() == FamilyKind::elementary_abelian) return NatSubset::empty();
    return ClopenSet::empty(F);
}

static Support support_union(const Support& a, const Support& b)
{
    if (auto n = std::get_if<NatSubset>(&a)) return n->unite(std::get<NatSubset>(b));
    return join(std::get<ClopenSet>(a), std::get<ClopenSet>(b));
}

// ---------------- ideals ----------------

ThickIdeal ThickIdeal::of(FamilyPtr F, std::vector<ExprPtr> gens)
{
    ThickIdeal I;
    I.F_ = F;
    Support s = empty_support(F);
    for (auto& g : gens) s = support_union(s, hsupp(F, g));
    I.supp_ = s;
    I.gens_ = std::move(gens);
    return I;
}

ThickIdeal ThickIdeal::from_open(OpenSet U)
{
    ThickIdeal I;
    I.F_ = U.family();
    if (U.kind() == OpenSet::Kind::clopen) I.supp_ = U.as_clopen();
    I.open_ = std::move(U);
    return I;
}

bool ThickIdeal::is_whole() const
{
    if (!supp_) return open_->kind() == OpenSet::Kind::whole;
    if (auto n = std::get_if<NatSubset>(&*supp_)) return n->is_all();
    return complement(std::get<ClopenSet>(*supp_)).is_empty();
}

std::string ThickIdeal::str() const
{
    if (supp_) return "ideal with support " + support_str(*supp_);
    return "ideal of an open set";
}

ThickIdeal ideal_of(const FamilyPtr& F, std::vector<ExprPtr> gens)
{
    return ThickIdeal::of(F, std::move(gens));
}

static OpenSet as_open(const ThickIdeal& I)
{
    if (I.open()) return *I.open();
    if (auto c = std::get_if<ClopenSet>(&*I.support())) return OpenSet::clopen(*c);
    throw Error("unsupported", "ideal is not backed by an open of a profinite space");
}

Tri member(const ExprPtr& X, const ThickIdeal& I)
{
    auto s = hsupp(I.family(), X);
    if (I.support()) return support_subset(s, *I.support()) ? Tri::yes : Tri::no;
    return leq(OpenSet::clopen(std::get<ClopenSet>(s)), *I.open());
}

Tri leq(const ThickIdeal& I, const ThickIdeal& J)
{
    if (I.family()->key() != J.family()->key()) throw Error("cross-family", "ideals over different families");
    if (I.support() && J.support()) return support_subset(*I.support(), *J.support()) ? Tri::yes : Tri::no;
    return leq(as_open(I), as_open(J));
}

// ---------------- primes ----------------

PrimeIdeal prime_of_point(const FamilyPtr& F, const ProfinitePoint& x)
{
    require_point(*F, x);
    PrimeIdeal P;
    P.F_ = F;
    P.kind_ = PrimeIdeal::Kind::point;
    P.x_ = x;
    return P;
}

PrimeIdeal family_prime(const FamilyPtr& F, const FamilyPtr& V)
{
    if (V->flag(Predicate::multiplicative_global).status != PredicateResult::Status::certified)
        throw Error("not-certified-prime", V->key() + " has no multiplicative global certificate");
    if (!is_downward_closed_in(*V, *F))
        throw Error("invalid-spec", V->key() + " is not a downward closed subfamily of " + F->key());
    if (V->extensional() || !V->single_prime())
        throw Error("unsupported", "family primes are implemented for p-group families");
    PrimeIdeal P;
    P.F_ = F;
    P.kind_ = PrimeIdeal::Kind::family;
    P.V_ = V;
    return P;
}

bool PrimeIdeal::is_zero_ideal() const
{
    return kind_ == Kind::family && V_->key() == F_->key();
}

std::string PrimeIdeal::str() const
{
    if (kind_ == Kind::point) return "p_{" + x_->str() + "}";
    if (is_zero_ideal()) return "(0)";
    std::string p = std::to_string(V_->prime());
    switch (V_->kind()) {
    case FamilyKind::elementary_abelian: return "p_{E_" + p + "}";
    case FamilyKind::abelian_p_exponent: return "p_{exp<=" + p + "^" + std::to_string(V_->spec().l) + "}";
    case FamilyKind::abelian_p_rank: return "p_{rank<=" + std::to_string(V_->spec().r) + "," + p + "}";
    case FamilyKind::cyclic_p: return "p_{C_" + p + "}";
    default: return "p_{" + V_->key() + "}";
    }
}

FinAbGroup generic_member(const Family& V, const ObjectExpr& X)
{
    u64 p = V.prime();
    unsigned lmax = 0, rmax = 0;
    for (auto& G : X.leaves()) {
        auto& g = as_group(G);
        lmax = std::max(lmax, g.exponent_at(p));
        rmax = std::max(rmax, g.rank(p));
    }
    unsigned e = lmax + 1;
    if (V.exponent_bound()) e = std::min(e, *V.exponent_bound());
    unsigned r = rmax + 1;
    if (V.rank_bound()) r = std::min(r, *V.rank_bound());
    if (e == 0) return FinAbGroup();
    return FinAbGroup::p_group(p, Partition(r, e));
}

bool member(const ExprPtr& X, const PrimeIdeal& P)
{
    auto& F = *P.family();
    validate_expr(F, *X);
    if (P.kind() == PrimeIdeal::Kind::family) {
        // hsupp(X) meets V iff it contains the generic member (supports of leaves are
        // up-closed at large members and the formula is monotone)
        return !in_support(F, *X, generic_member(*P.subfamily(), *X));
    }
    auto& x = P.point();
    if (x.kind() == ProfinitePoint::Kind::stabilizing) return !in_support(F, *X, x.member());
    auto s = hsupp(P.family(), X);
    return !member(x, std::get<ClopenSet>(s));
}

std::vector<ChainLink> krull_chain(u64 p, unsigned L)
{
    if (L < 1) throw Error("invalid-spec", "chain length must be >= 1");
    FamilySpec as;
    as.kind = FamilyKind::abelian_p;
    as.p = p;
    auto F = Family::make(as);
    std::vector<ChainLink> out;
    PrimeIdeal prev = prime_of_point(F, ProfinitePoint::stabilizing(FinAbGroup()));
    for (unsigned l = 1; l <= L; ++l) {
        FamilySpec vs;
        vs.p = p;
        if (l == 1) vs.kind = FamilyKind::elementary_abelian;
        else {
            vs.kind = FamilyKind::abelian_p_exponent;
            vs.l = l;
        }
        auto P = family_prime(F, Family::make(vs));
        auto w = ObjectExpr::gen(FinAbGroup::p_group(p, {l}));
        ChainLink link{P, w, member(w, prev), !member(w, P)};
        out.push_back(link);
        prev = P;
    }
    return out;
}

NatSubset vi_class(u64 p, const ExprPtr& X)
{
    FamilySpec s;
    s.kind = FamilyKind::elementary_abelian;
    s.p = p;
    auto F = Family::make(s);
    auto sup = std::get<NatSubset>(hsupp(F, X));
    if (!sup.is_cofinite() && !sup.is_empty())
        throw Error("classification-violation", "finite nonempty support " + sup.str() + " for " + X->str());
    return sup;
}

IdealLattice classify_ideals(const Family& F, bool ascii)
{
    IdealLattice L;
    L.family = F.key();
    if (F.kind() == FamilyKind::elementary_abelian) {
        L.opens = "all subsets of N, plus whole space";
        L.finitely_generated = "empty or cofinite supports; support N is the whole ideal";
        L.on_group_points = "quasi-compact opens: finite subsets of N, plus whole space";
        return L;
    }
    if (!F.has_finite_filtration()) throw Error("unsupported", "no ideal classification for " + F.key());
    if (F.extensional()) {
        L.space = space_description(F);
        L.opens = "all subsets of the " + std::to_string(F.table().objects.size()) + " objects";
        L.finitely_generated = L.opens;
        L.on_group_points = L.opens;
        return L;
    }
    L.space = space_description(F);
    std::string sp = L.space->str(ascii);
    L.opens = "opens of " + sp;
    L.finitely_generated = "clopens of " + sp;
    L.on_group_points = "asymptotic subsets of pi0 U (clopens restricted to group points)";
    return L;
}

std::vector<ClopenSet> clopens_at_stage(const FamilyPtr& F, u64 n)
{
    auto members = F->stage(n).members;
    if (members.size() > 16) throw Error("cap-exceeded", "stage has too many members to list every clopen");
    std::vector<ClopenSet> out;
    std::set<std::pair<u64, std::set<Member>>> seen;
    for (u64 mask = 0; mask < (u64(1) << members.size()); ++mask) {
        std::set<Member> S;
        for (size_t i = 0; i < members.size(); ++i)
            if (mask >> i & 1) S.insert(members[i]);
        auto c = ClopenSet(F, n, S).normalized();
        if (seen.insert({c.stage(), c.members()}).second) out.push_back(c);
    }
    return out;
}

} // namespace ttgeo
