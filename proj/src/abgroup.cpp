#include "ttgeo/abgroup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ttgeo {

bool is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<u64> primes_up_to(u64 n)
{
    std::vector<u64> out;
    for (u64 k = 2; k <= n; ++k)
        if (is_prime(k)) out.push_back(k);
    return out;
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n)
{
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) { n /= d; ++e; }
        if (e) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

u64 ipow(u64 base, unsigned e)
{
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (base != 0 && r > UINT64_MAX / base) throw Error("overflow", "integer power exceeds 64 bits");
        r *= base;
    }
    return r;
}

unsigned floor_log(u64 p, u64 n)
{
    unsigned l = 0;
    u64 v = 1;
    while (v <= n / p) { v *= p; ++l; }
    return l;
}

Partition conjugate(const Partition& lambda)
{
    Partition out;
    if (lambda.empty()) return out;
    for (unsigned k = 1; k <= lambda.front(); ++k) {
        unsigned c = 0;
        for (unsigned x : lambda) if (x >= k) ++c;
        out.push_back(c);
    }
    return out;
}

bool dominated(const Partition& mu, const Partition& lambda)
{
    if (mu.size() > lambda.size()) return false;
    for (size_t i = 0; i < mu.size(); ++i)
        if (mu[i] > lambda[i]) return false;
    return true;
}

static void parts_rec(unsigned left, unsigned maxpart, Partition& cur, std::vector<Partition>& out)
{
    if (left == 0) { out.push_back(cur); return; }
    for (unsigned k = std::min(left, maxpart); k >= 1; --k) {
        cur.push_back(k);
        parts_rec(left - k, k, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> partitions_of(unsigned n)
{
    std::vector<Partition> out;
    Partition cur;
    parts_rec(n, n, cur, out);
    return out;
}

static void box_rec(unsigned len, unsigned maxpart, Partition& cur, std::vector<Partition>& out)
{
    out.push_back(cur);
    if (len == 0) return;
    for (unsigned k = 1; k <= maxpart; ++k) {
        cur.push_back(k);
        box_rec(len - 1, k, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> partitions_in_box(unsigned max_len, unsigned max_part)
{
    std::vector<Partition> out;
    Partition cur;
    box_rec(max_len, max_part, cur, out);
    std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
        unsigned sa = std::accumulate(a.begin(), a.end(), 0u), sb = std::accumulate(b.begin(), b.end(), 0u);
        if (sa != sb) return sa < sb;
        return a < b;
    });
    return out;
}

// ---------------- FinAbGroup ----------------

FinAbGroup FinAbGroup::from_parts(Parts parts)
{
    FinAbGroup g;
    for (auto& [p, lam] : parts) {
        if (!is_prime(p)) throw Error("invalid-spec", "not a prime: " + std::to_string(p));
        Partition clean;
        for (unsigned x : lam) if (x > 0) clean.push_back(x);
        std::sort(clean.begin(), clean.end(), std::greater<>());
        if (!clean.empty()) g.parts_[p] = std::move(clean);
    }
    return g;
}

FinAbGroup FinAbGroup::cyclic(u64 n) { return canonicalize({static_cast<long long>(n)}); }

FinAbGroup FinAbGroup::p_group(u64 p, Partition lambda) { return from_parts({{p, std::move(lambda)}}); }

FinAbGroup FinAbGroup::elementary(u64 p, unsigned rank) { return p_group(p, Partition(rank, 1)); }

u64 FinAbGroup::order() const
{
    u64 n = 1;
    for (auto& [p, lam] : parts_)
        for (unsigned x : lam) {
            u64 f = ipow(p, x);
            if (n > UINT64_MAX / f) throw Error("overflow", "group order exceeds 64 bits");
            n *= f;
        }
    return n;
}

Partition FinAbGroup::partition(u64 p) const
{
    auto it = parts_.find(p);
    return it == parts_.end() ? Partition{} : it->second;
}

unsigned FinAbGroup::exponent_at(u64 p) const
{
    auto it = parts_.find(p);
    return it == parts_.end() ? 0 : it->second.front();
}

std::vector<u64> FinAbGroup::primes() const
{
    std::vector<u64> out;
    for (auto& kv : parts_) out.push_back(kv.first);
    return out;
}

std::vector<u64> FinAbGroup::cyclic_orders() const
{
    std::vector<u64> out;
    for (auto& [p, lam] : parts_)
        for (unsigned x : lam) out.push_back(ipow(p, x));
    return out;
}

std::string FinAbGroup::str() const
{
    if (parts_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto& [p, lam] : parts_) {
        if (!first) os << ';';
        first = false;
        os << p << ":[";
        for (size_t i = 0; i < lam.size(); ++i) os << (i ? "," : "") << lam[i];
        os << ']';
    }
    return os.str();
}

std::string FinAbGroup::pretty() const
{
    if (parts_.empty()) return "1";
    std::string s;
    for (u64 c : cyclic_orders()) {
        if (!s.empty()) s += "+";
        s += "Z/" + std::to_string(c);
    }
    return s;
}

FinAbGroup FinAbGroup::parse(std::string_view text)
{
    std::string t;
    for (char c : text) if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw Error("parse-error", "empty group literal");
    if (t == "1" || t == "{}") return {};
    Parts parts;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw Error("parse-error", "group literal '" + std::string(text) + "' at column " +
                                       std::to_string(i + 1) + ": " + why);
    };
    auto number = [&]() -> u64 {
        if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i]))) fail("expected a number");
        u64 v = 0;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            v = v * 10 + static_cast<u64>(t[i] - '0');
            if (v > (1ull << 40)) fail("number too large");
            ++i;
        }
        return v;
    };
    while (i < t.size()) {
        u64 p = number();
        if (!is_prime(p)) fail("not a prime: " + std::to_string(p));
        if (i >= t.size() || t[i] != ':') fail("expected ':'");
        ++i;
        if (i >= t.size() || t[i] != '[') fail("expected '['");
        ++i;
        Partition lam;
        if (i < t.size() && t[i] == ']') {
            ++i;
        } else {
            while (true) {
                u64 v = number();
                if (v == 0 || v > 64) fail("exponent out of range");
                lam.push_back(static_cast<unsigned>(v));
                if (i < t.size() && t[i] == ',') { ++i; continue; }
                if (i < t.size() && t[i] == ']') { ++i; break; }
                fail("expected ',' or ']'");
            }
        }
        if (parts.count(p)) fail("prime repeated");
        parts[p] = lam;
        if (i < t.size()) {
            if (t[i] != ';') fail("expected ';'");
            ++i;
        }
    }
    return from_parts(std::move(parts));
}

std::strong_ordering FinAbGroup::operator<=>(const FinAbGroup& o) const
{
    auto big_order = [](const Parts& ps) {
        mpz_class n = 1;
        for (auto& [p, lam] : ps)
            for (unsigned x : lam) {
                mpz_class f;
                mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p), x);
                n *= f;
            }
        return n;
    };
    int c = cmp(big_order(parts_), big_order(o.parts_));
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    auto a = parts_.begin(), b = o.parts_.begin();
    for (; a != parts_.end() && b != o.parts_.end(); ++a, ++b) {
        if (a->first != b->first) return a->first <=> b->first;
        // more concentrated partitions first: [2] before [1,1]
        if (a->second != b->second) return a->second > b->second ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a == parts_.end() && b == o.parts_.end()) return std::strong_ordering::equal;
    return a == parts_.end() ? std::strong_ordering::less : std::strong_ordering::greater;
}

FinAbGroup canonicalize(const std::vector<long long>& orders)
{
    FinAbGroup::Parts parts;
    for (long long n : orders) {
        if (n < 1) throw Error("invalid-spec", "cyclic order must be >= 1, got " + std::to_string(n));
        for (auto [p, e] : factorize(static_cast<u64>(n))) parts[p].push_back(e);
    }
    return FinAbGroup::from_parts(std::move(parts));
}

bool epi_exists(const FinAbGroup& G, const FinAbGroup& H)
{
    for (auto& [p, mu] : H.parts()) {
        auto it = G.parts().find(p);
        if (it == G.parts().end() || !dominated(mu, it->second)) return false;
    }
    return true;
}

FinAbGroup product(const FinAbGroup& G, const FinAbGroup& H)
{
    FinAbGroup::Parts parts = G.parts();
    for (auto& [p, lam] : H.parts()) {
        auto& dst = parts[p];
        dst.insert(dst.end(), lam.begin(), lam.end());
    }
    return FinAbGroup::from_parts(std::move(parts));
}

std::vector<FinAbGroup> quotient_classes(const FinAbGroup& G)
{
    std::vector<FinAbGroup> out{FinAbGroup{}};
    for (auto& [p, lam] : G.parts()) {
        auto sub = partitions_in_box(static_cast<unsigned>(lam.size()), lam.front());
        std::vector<FinAbGroup> next;
        for (auto& base : out)
            for (auto& mu : sub)
                if (dominated(mu, lam)) {
                    auto parts = base.parts();
                    if (!mu.empty()) parts[p] = mu;
                    next.push_back(FinAbGroup::from_parts(parts));
                }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FinAbGroup> p_groups_up_to(u64 p, u64 cap)
{
    std::vector<FinAbGroup> out;
    unsigned top = floor_log(p, cap);
    for (unsigned n = 0; n <= top; ++n)
        for (auto& lam : partitions_of(n)) out.push_back(FinAbGroup::p_group(p, lam));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FinAbGroup> abelian_groups_up_to(u64 cap)
{
    std::vector<FinAbGroup> out;
    for (u64 n = 1; n <= cap; ++n) {
        std::vector<FinAbGroup> acc{FinAbGroup{}};
        for (auto [p, e] : factorize(n)) {
            std::vector<FinAbGroup> next;
            for (auto& base : acc)
                for (auto& lam : partitions_of(e)) {
                    auto parts = base.parts();
                    parts[p] = lam;
                    next.push_back(FinAbGroup::from_parts(parts));
                }
            acc = std::move(next);
        }
        out.insert(out.end(), acc.begin(), acc.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

mpz_class gaussian_binomial(unsigned n, unsigned k, u64 p)
{
    if (k > n) return 0;
    mpz_class num = 1, den = 1, P = static_cast<unsigned long>(p);
    for (unsigned i = 0; i < k; ++i) {
        mpz_class a, b;
        mpz_pow_ui(a.get_mpz_t(), P.get_mpz_t(), n - i);
        mpz_pow_ui(b.get_mpz_t(), P.get_mpz_t(), i + 1);
        num *= a - 1;
        den *= b - 1;
    }
    return num / den;
}

mpz_class count_quotients_of_type(const FinAbGroup& H, const FinAbGroup& G)
{
    if (!epi_exists(H, G)) return 0;
    mpz_class total = 1;
    for (auto& [p, mu] : G.parts()) {
        Partition lc = conjugate(H.partition(p)), mc = conjugate(mu);
        auto at = [](const Partition& v, size_t i) -> unsigned { return i < v.size() ? v[i] : 0; };
        mpz_class P = static_cast<unsigned long>(p);
        for (size_t i = 0; i < lc.size(); ++i) {
            unsigned li = at(lc, i), mi = at(mc, i), mn = at(mc, i + 1);
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(mn) * (li - mi));
            total *= pw * gaussian_binomial(li - mn, mi - mn, p);
        }
    }
    return total;
}

// ---------------- ElementTable ----------------

ElementTable::ElementTable(const FinAbGroup& G) : group_(G), moduli_(G.cyclic_orders())
{
    for (u64 m : moduli_) {
        strides_.push_back(order_);
        order_ *= m;
    }
}

std::vector<u64> ElementTable::digits(size_t x) const
{
    std::vector<u64> d(moduli_.size());
    for (size_t i = 0; i < moduli_.size(); ++i) { d[i] = x % moduli_[i]; x /= moduli_[i]; }
    return d;
}

size_t ElementTable::encode(const std::vector<u64>& d) const
{
    size_t x = 0;
    for (size_t i = 0; i < moduli_.size(); ++i) x += (d[i] % moduli_[i]) * strides_[i];
    return x;
}

size_t ElementTable::add(size_t a, size_t b) const
{
    size_t x = 0;
    for (size_t i = 0; i < moduli_.size(); ++i) {
        u64 m = moduli_[i];
        x += ((a % m + b % m) % m) * strides_[i];
        a /= m;
        b /= m;
    }
    return x;
}

size_t ElementTable::neg(size_t a) const
{
    size_t x = 0;
    for (size_t i = 0; i < moduli_.size(); ++i) {
        u64 m = moduli_[i];
        x += ((m - a % m) % m) * strides_[i];
        a /= m;
    }
    return x;
}

size_t ElementTable::mul(size_t a, u64 k) const
{
    size_t x = 0;
    for (size_t i = 0; i < moduli_.size(); ++i) {
        u64 m = moduli_[i];
        x += static_cast<size_t>(((a % m) * (k % m)) % m) * strides_[i];
        a /= m;
    }
    return x;
}

u64 ElementTable::element_order(size_t a) const
{
    u64 o = 1;
    for (size_t i = 0; i < moduli_.size(); ++i) {
        u64 m = moduli_[i], d = a % m;
        a /= m;
        u64 oi = m / std::gcd(m, d);
        o = std::lcm(o, oi);
    }
    return o;
}

static void extend_span(const ElementTable& T, std::vector<char>& mask, std::vector<size_t>& elems, size_t g)
{
    if (mask[g]) return;
    std::vector<size_t> base = elems;
    size_t t = g;
    while (!mask[t]) {
        for (size_t s : base) {
            size_t x = T.add(s, t);
            mask[x] = 1;
            elems.push_back(x);
        }
        t = T.add(t, g);
    }
}

std::vector<char> ElementTable::span(const std::vector<size_t>& gens) const
{
    std::vector<char> mask(order_, 0);
    mask[0] = 1;
    std::vector<size_t> elems{0};
    for (size_t g : gens) extend_span(*this, mask, elems, g);
    return mask;
}

size_t ElementTable::mask_size(const std::vector<char>& mask)
{
    return static_cast<size_t>(std::count(mask.begin(), mask.end(), 1));
}

// type from counts c_k = |{x : p^k x = 0}| (subgroup) or |{x : p^k x in S}|/|S| (quotient)
template <class Counter>
static FinAbGroup type_from_counts(const std::vector<std::pair<u64, unsigned>>& fac, Counter count)
{
    FinAbGroup::Parts parts;
    for (auto [p, e] : fac) {
        Partition lc;
        size_t prev = 1;
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            size_t c = count(pk);
            size_t ratio = c / prev;
            if (ratio <= 1) break;
            unsigned r = 0;
            while (ratio > 1) { ratio /= p; ++r; }
            lc.push_back(r);
            prev = c;
        }
        if (!lc.empty()) parts[p] = conjugate(lc);
    }
    return FinAbGroup::from_parts(std::move(parts));
}

FinAbGroup ElementTable::subgroup_type(const std::vector<char>& mask) const
{
    size_t n = mask_size(mask);
    return type_from_counts(factorize(n), [&](u64 pk) {
        size_t c = 0;
        for (size_t x = 0; x < order_; ++x)
            if (mask[x] && mul(x, pk) == 0) ++c;
        return c;
    });
}

FinAbGroup ElementTable::quotient_type(const std::vector<char>& mask) const
{
    size_t n = mask_size(mask);
    size_t q = order_ / n;
    return type_from_counts(factorize(q), [&](u64 pk) {
        size_t c = 0;
        for (size_t x = 0; x < order_; ++x)
            if (mask[mul(x, pk)]) ++c;
        return c / n;
    });
}

size_t apply(const ElementTable& src, const ElementTable& tgt, const Hom& f, size_t x)
{
    auto d = src.digits(x);
    size_t y = 0;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i]) y = tgt.add(y, tgt.mul(f.images[i], d[i]));
    return y;
}

Hom compose(const ElementTable& a, const ElementTable& b, const ElementTable& c, const Hom& g, const Hom& f)
{
    Hom h;
    for (size_t i = 0; i < a.rank(); ++i) h.images.push_back(apply(b, c, g, f.images[i]));
    return h;
}

std::vector<char> kernel_mask(const ElementTable& src, const ElementTable& tgt, const Hom& f)
{
    std::vector<char> mask(src.order(), 0);
    for (size_t x = 0; x < src.order(); ++x) mask[x] = apply(src, tgt, f, x) == 0;
    return mask;
}

bool is_surjective(const ElementTable&, const ElementTable& tgt, const Hom& f)
{
    return ElementTable::mask_size(tgt.span(f.images)) == tgt.order();
}

static void check_cap(const FinAbGroup& G, const FinAbGroup& H, u64 cap)
{
    long double prod = static_cast<long double>(G.order()) * static_cast<long double>(H.order());
    if (prod > static_cast<long double>(cap))
        throw Error("cap-exceeded", "|G|*|H| = " + std::to_string(static_cast<unsigned long long>(prod)) +
                                        " exceeds order cap " + std::to_string(cap));
}

namespace {

struct EpiSearch {
    const ElementTable& S;
    const ElementTable& T;
    std::vector<std::vector<size_t>> candidates; // per source generator
    u64 target_exponent = 1;
};

u64 exponent_of(const ElementTable& T)
{
    u64 e = 1;
    for (u64 m : T.moduli()) e = std::lcm(e, m);
    return e;
}

EpiSearch make_search(const ElementTable& S, const ElementTable& T)
{
    EpiSearch es{S, T, {}, exponent_of(T)};
    for (u64 n : S.moduli()) {
        std::vector<size_t> c;
        for (size_t h = 0; h < T.order(); ++h)
            if (T.mul(h, n) == 0) c.push_back(h);
        es.candidates.push_back(std::move(c));
    }
    return es;
}

// best case growth factor of the remaining generators
long double remaining_bound(const EpiSearch& es, size_t i)
{
    long double b = 1;
    for (size_t j = i; j < es.S.rank(); ++j)
        b *= static_cast<long double>(std::min<u64>(es.S.moduli()[j], es.target_exponent));
    return b;
}

bool exists_rec(const EpiSearch& es, size_t i, const std::vector<char>& mask, const std::vector<size_t>& elems,
                std::vector<std::set<std::vector<char>>>& seen)
{
    if (elems.size() == es.T.order()) return true;
    if (i == es.S.rank()) return false;
    if (static_cast<long double>(elems.size()) * remaining_bound(es, i) < static_cast<long double>(es.T.order()))
        return false;
    if (!seen[i].insert(mask).second) return false;
    for (size_t h : es.candidates[i]) {
        auto m2 = mask;
        auto e2 = elems;
        extend_span(es.T, m2, e2, h);
        if (exists_rec(es, i + 1, m2, e2, seen)) return true;
    }
    return false;
}

void all_rec(const EpiSearch& es, size_t i, const std::vector<char>& mask, const std::vector<size_t>& elems,
             Hom& cur, std::vector<Hom>& out)
{
    if (i == es.S.rank()) {
        if (elems.size() == es.T.order()) out.push_back(cur);
        return;
    }
    if (static_cast<long double>(elems.size()) * remaining_bound(es, i) < static_cast<long double>(es.T.order()))
        return;
    for (size_t h : es.candidates[i]) {
        auto m2 = mask;
        auto e2 = elems;
        extend_span(es.T, m2, e2, h);
        cur.images.push_back(h);
        all_rec(es, i + 1, m2, e2, cur, out);
        cur.images.pop_back();
    }
}

} // namespace

bool oracle_epi_exists(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap)
{
    check_cap(G, H, order_cap);
    ElementTable S(G), T(H);
    auto es = make_search(S, T);
    std::vector<char> mask(T.order(), 0);
    mask[0] = 1;
    std::vector<std::set<std::vector<char>>> seen(S.rank() + 1);
    return exists_rec(es, 0, mask, {0}, seen);
}

std::vector<Hom> oracle_epimorphisms(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap)
{
    check_cap(G, H, order_cap);
    ElementTable S(G), T(H);
    auto es = make_search(S, T);
    std::vector<char> mask(T.order(), 0);
    mask[0] = 1;
    std::vector<Hom> out;
    Hom cur;
    all_rec(es, 0, mask, {0}, cur, out);
    return out;
}

u64 oracle_count_epis(const FinAbGroup& G, const FinAbGroup& H, u64 order_cap)
{
    return oracle_epimorphisms(G, H, order_cap).size();
}

std::vector<std::vector<char>> oracle_subgroups(const ElementTable& T)
{
    std::set<std::vector<char>> seen;
    std::vector<std::vector<char>> queue;
    std::vector<char> triv(T.order(), 0);
    triv[0] = 1;
    seen.insert(triv);
    queue.push_back(triv);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        auto cur = queue[qi];
        std::vector<size_t> elems;
        for (size_t x = 0; x < T.order(); ++x) if (cur[x]) elems.push_back(x);
        for (size_t g = 1; g < T.order(); ++g) {
            if (cur[g]) continue;
            auto m2 = cur;
            auto e2 = elems;
            extend_span(T, m2, e2, g);
            if (seen.insert(m2).second) queue.push_back(std::move(m2));
        }
    }
    return queue;
}

std::vector<FinAbGroup> oracle_quotient_classes(const FinAbGroup& G, u64 order_cap)
{
    check_cap(G, FinAbGroup{}, order_cap);
    ElementTable T(G);
    std::set<FinAbGroup> types;
    for (auto& N : oracle_subgroups(T)) types.insert(T.quotient_type(N));
    return {types.begin(), types.end()};
}

std::vector<FinAbGroup> oracle_wide_subgroups(const FinAbGroup& G, const FinAbGroup& K, u64 order_cap)
{
    check_cap(G, K, order_cap);
    // non-canonical table for G x K keeps the two factors' coordinates apart
    ElementTable TG(G), TK(K);
    const size_t nG = TG.order(), nK = TK.order(), n = nG * nK;
    // element (g, k) encoded as g + nG * k
    auto add = [&](size_t a, size_t b) { return TG.add(a % nG, b % nG) + nG * TK.add(a / nG, b / nG); };
    std::set<std::vector<char>> seen;
    std::vector<std::vector<char>> queue;
    std::vector<char> triv(n, 0);
    triv[0] = 1;
    seen.insert(triv);
    queue.push_back(triv);
    auto extend = [&](std::vector<char>& mask, std::vector<size_t>& elems, size_t g) {
        if (mask[g]) return;
        std::vector<size_t> base = elems;
        size_t t = g;
        while (!mask[t]) {
            for (size_t s : base) {
                size_t x = add(s, t);
                mask[x] = 1;
                elems.push_back(x);
            }
            t = add(t, g);
        }
    };
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        auto cur = queue[qi];
        std::vector<size_t> elems;
        for (size_t x = 0; x < n; ++x) if (cur[x]) elems.push_back(x);
        for (size_t g = 1; g < n; ++g) {
            if (cur[g]) continue;
            auto m2 = cur;
            auto e2 = elems;
            extend(m2, e2, g);
            if (seen.insert(m2).second) queue.push_back(std::move(m2));
        }
    }
    std::set<FinAbGroup> types;
    for (auto& L : queue) {
        std::vector<char> pg(nG, 0), pk(nK, 0);
        size_t size = 0;
        for (size_t x = 0; x < n; ++x)
            if (L[x]) { pg[x % nG] = 1; pk[x / nG] = 1; ++size; }
        if (ElementTable::mask_size(pg) != nG || ElementTable::mask_size(pk) != nK) continue;
        // type of L from its element orders
        auto fac = factorize(size);
        FinAbGroup::Parts parts;
        for (auto [p, e] : fac) {
            Partition lc;
            size_t prev = 1;
            u64 pk2 = 1;
            for (unsigned k = 1; k <= e; ++k) {
                pk2 *= p;
                size_t c = 0;
                for (size_t x = 0; x < n; ++x)
                    if (L[x] && TG.mul(x % nG, pk2) == 0 && TK.mul(x / nG, pk2) == 0) ++c;
                size_t ratio = c / prev;
                if (ratio <= 1) break;
                unsigned r = 0;
                while (ratio > 1) { ratio /= p; ++r; }
                lc.push_back(r);
                prev = c;
            }
            if (!lc.empty()) parts[p] = conjugate(lc);
        }
        types.insert(FinAbGroup::from_parts(parts));
    }
    return {types.begin(), types.end()};
}

std::vector<long long> smith_normal_form(const std::vector<std::vector<long long>>& M)
{
    size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (M[i].size() != cols) throw Error("invalid-spec", "ragged matrix");
        for (size_t j = 0; j < cols; ++j) a[i][j] = static_cast<long>(M[i][j]);
    }
    size_t n = std::min(rows, cols);
    for (size_t t = 0; t < n; ++t) {
        // pivot: smallest nonzero absolute value in the remaining block
        while (true) {
            size_t pi = rows, pj = cols;
            for (size_t i = t; i < rows; ++i)
                for (size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) { pi = i; pj = j; }
            if (pi == rows) break;
            std::swap(a[t], a[pi]);
            for (size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
            bool clean = true;
            for (size_t i = t + 1; i < rows; ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0) for (size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < cols; ++j) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0) for (size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: the pivot must divide the rest of the block
            bool divides = true;
            for (size_t i = t + 1; i < rows && divides; ++i)
                for (size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
    }
    std::vector<long long> d;
    for (size_t t = 0; t < n; ++t) d.push_back(mpz_class(abs(a[t][t])).get_si());
    return d;
}

FinAbGroup snf_quotient_type(const FinAbGroup& G, const std::vector<std::vector<long long>>& gens)
{
    auto mods = G.cyclic_orders();
    size_t k = mods.size();
    std::vector<std::vector<long long>> rel;
    for (size_t i = 0; i < k; ++i) {
        std::vector<long long> r(k, 0);
        r[i] = static_cast<long long>(mods[i]);
        rel.push_back(r);
    }
    for (auto& g : gens) {
        if (g.size() != k) throw Error("invalid-spec", "generator has wrong length");
        rel.push_back(g);
    }
    if (k == 0) return {};
    auto d = smith_normal_form(rel);
    std::vector<long long> orders;
    for (long long x : d) {
        if (x == 0) throw Error("invalid-spec", "relation matrix is not of full rank");
        orders.push_back(x);
    }
    return canonicalize(orders);
}

} // namespace ttgeo
