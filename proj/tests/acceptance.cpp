// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "ttgeo/repcore.hpp"
#include "ttgeo/sample.hpp"

using namespace ttgeo;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// collects the first few failures of a criterion
struct Check {
    bool ok = true;
    std::ostringstream why;
    int shown = 0;
    void expect(bool cond, const std::string& what)
    {
        if (cond) return;
        ok = false;
        if (shown++ < 3) why << (shown > 1 ? "; " : "") << what;
    }
    Outcome done(std::string summary)
    {
        if (!ok) summary += " | " + why.str();
        return {ok, summary};
    }
};

FinAbGroup C(u64 n) { return FinAbGroup::cyclic(n); }

FamilyPtr fam(const json& j) { return Family::from_json(j); }

// ---- 1: closed-form epimorphism test against the element-level oracle ----
Outcome epi_oracle()
{
    Check c;
    size_t pairs = 0;
    for (u64 p : {2, 3}) {
        auto gs = p_groups_up_to(p, 64);
        for (auto& G : gs)
            for (auto& H : gs) {
                ++pairs;
                bool a = epi_exists(G, H), b = oracle_epi_exists(G, H, 64 * 64);
                c.expect(a == b, G.str() + " -> " + H.str());
            }
    }
    return c.done(std::to_string(pairs) + " ordered pairs");
}

// ---- 2: elementary abelian spectrum ----
Outcome elementary_spectrum()
{
    Check c;
    size_t exprs = 0;
    for (u64 p : {2, 3}) {
        auto E = fam({{"kind", "elementary_abelian"}, {"p", p}});
        auto ps = point_space(*E, 12);
        c.expect(ps.extra_closed_point, "no extra closed point");
        c.expect(ps.symbolic_points.empty(), "unexpected symbolic points");
        c.expect(ps.finite_points.size() == 13, "point count at cap 12");
        for (unsigned k = 0; k < ps.finite_points.size(); ++k)
            c.expect(ps.finite_points[k] == Member(FinAbGroup::elementary(p, k)), "point " + std::to_string(k));
        c.expect(classify_ideals(*E).opens == "all subsets of N, plus whole space",
                 "lattice: " + classify_ideals(*E).opens);

        std::mt19937_64 rng(1000 + p);
        ExprSampler S;
        S.F = E;
        for (unsigned r = 0; r <= 5; ++r) S.leaves.push_back(FinAbGroup::elementary(p, r));
        S.max_depth = 3;
        for (int i = 0; i < 100; ++i, ++exprs) {
            auto X = S(rng);
            auto k = vi_class(p, X);
            c.expect(k.is_empty() || k.is_cofinite(), X->str() + " has class " + k.str());
            c.expect(vi_class(p, ObjectExpr::tensor(X, X)) == k, X->str() + " tensor square");
        }
    }
    return c.done("p in {2,3}, " + std::to_string(exprs) + " expressions");
}

// ---- 3: VI classification ----
Outcome vi_classification()
{
    Check c;
    const u64 p = 2;
    const unsigned n_max = 6, window = n_max + 1;
    auto E = fam({{"kind", "elementary_abelian"}, {"p", p}});

    // close the generators under sum and tensor, one representative per class
    std::map<std::pair<bool, std::set<u64>>, ExprPtr> reps;
    std::vector<std::pair<NatSubset, ExprPtr>> order;
    auto add = [&](const ExprPtr& X) {
        auto k = vi_class(p, X);
        auto key = std::make_pair(k.is_cofinite(), k.listed());
        if (reps.count(key)) return false;
        reps[key] = X;
        order.emplace_back(k, X);
        return true;
    };
    for (unsigned n = 0; n <= n_max; ++n) {
        add(ObjectExpr::gen(FinAbGroup::elementary(p, n)));
        add(ObjectExpr::aug_cone(FinAbGroup::elementary(p, n)));
    }
    add(ObjectExpr::zero());
    for (bool grew = true; grew;) {
        grew = false;
        auto snapshot = order;
        for (size_t i = 0; i < snapshot.size(); ++i)
            for (size_t j = i; j < snapshot.size(); ++j) {
                grew |= add(ObjectExpr::sum(snapshot[i].second, snapshot[j].second));
                grew |= add(ObjectExpr::tensor(snapshot[i].second, snapshot[j].second));
            }
    }

    // the target: {} and every cofinite set whose complement lies in [0, n_max]
    std::set<std::pair<bool, std::set<u64>>> target{{false, {}}};
    for (unsigned mask = 0; mask < (1u << (n_max + 1)); ++mask) {
        std::set<u64> out;
        for (unsigned b = 0; b <= n_max; ++b)
            if (mask >> b & 1) out.insert(b);
        target.insert({true, out});
    }
    std::set<std::pair<bool, std::set<u64>>> got;
    for (auto& [k, X] : reps) got.insert(k);
    c.expect(got == target, std::to_string(got.size()) + " classes, want " + std::to_string(target.size()));

    // repcore homology over the rank <= window truncation
    auto W = RepFamily::elementary_window(p, window);
    HomologyMemo memo;
    for (auto& [k, X] : order) {
        auto H = expr_homology(W, *X, &memo);
        for (unsigned r = 0; r <= window; ++r)
            c.expect(k.contains(r) == !H[r].empty(), X->str() + " at rank " + std::to_string(r));
    }

    // distinct classes are distinct ideals: membership follows class inclusion
    size_t checked = 0;
    for (size_t i = 0; i < order.size(); i += 3)
        for (size_t j = 0; j < order.size(); j += 2) {
            ++checked;
            auto I = ideal_of(E, {order[j].second});
            bool want = order[i].first.subset_of(order[j].first);
            c.expect(member(order[i].second, I) == (want ? Tri::yes : Tri::no),
                     order[i].second->str() + " in <" + order[j].second->str() + ">");
        }
    return c.done(std::to_string(order.size()) + " classes, window rank " + std::to_string(window) + ", " +
                  std::to_string(checked) + " ideal memberships");
}

// ---- 4: bounded rank spectra ----
// descending vectors of length <= r over {1..l} and inf (zeros dropped)
std::set<ExpVec> monotone_vectors(unsigned r, unsigned l)
{
    std::set<ExpVec> out;
    std::vector<unsigned> vals;
    for (unsigned v = 1; v <= l; ++v) vals.push_back(v);
    vals.push_back(kInf);
    std::function<void(ExpVec, size_t)> go = [&](ExpVec v, size_t from) {
        out.insert(v);
        if (v.size() == r) return;
        for (size_t i = from; i < vals.size(); ++i) {
            auto w = v;
            w.insert(w.begin(), vals[i]); // build ascending from the small end
            go(w, i);
        }
    };
    go({}, 0);
    return out;
}

Outcome bounded_rank()
{
    Check c;
    size_t points = 0;
    for (u64 p : {2, 3})
        for (unsigned r = 1; r <= 3; ++r) {
            auto F = fam({{"kind", "abelian_p_rank"}, {"p", p}, {"r", r}});
            auto ps = point_space(*F, ipow(p, 5));
            std::set<ExpVec> got;
            for (auto& m : ps.finite_points) {
                auto& G = as_group(m);
                got.insert(G.partition(p));
                c.expect(is_isolated(*F, ProfinitePoint::stabilizing(m)), G.str() + " not isolated");
            }
            for (auto& x : ps.symbolic_points) {
                auto it = x.coords().find(p);
                got.insert(it == x.coords().end() ? ExpVec{} : it->second);
                c.expect(!is_isolated(*F, x), x.coord_str() + " isolated");
            }
            points += got.size();
            c.expect(got.size() == ps.finite_points.size() + ps.symbolic_points.size(), "duplicate points");
            c.expect(got == monotone_vectors(r, 5), "p=" + std::to_string(p) + " r=" + std::to_string(r));
        }
    for (unsigned r = 0; r <= 4; ++r)
        c.expect(cb_rank(SpaceDesc::monotone(r)) == CbRank{false, long(r)}, "cb rank of S_" + std::to_string(r));
    return c.done(std::to_string(points) + " points, cb ranks r <= 4");
}

// ---- 5: cyclic families ----
Outcome cyclic_families()
{
    Check c;
    size_t exprs = 0;
    for (u64 p : {2, 3}) {
        auto F = fam({{"kind", "cyclic_p"}, {"p", p}});
        c.expect(space_description(*F).str() == "ℕ⁺", "cyclic_p space " + space_description(*F).str());
        auto P = prime_of_point(F, ProfinitePoint::parse(std::to_string(p) + ":[inf]"));
        // leaves up to C_{p^3}; the tracked truncation runs two stages further
        std::vector<FinAbGroup> window;
        for (unsigned e = 0; e <= 5 && ipow(p, e) <= 32; ++e) window.push_back(C(ipow(p, e)));
        auto R = RepFamily::from_groups(window);
        std::mt19937_64 rng(50 + p);
        ExprSampler S;
        S.F = F;
        for (unsigned e = 0; e <= 3; ++e) S.leaves.push_back(C(ipow(p, e)));
        S.max_depth = 3;
        for (int i = 0; i < 50; ++i) {
            auto X = S(rng);
            auto Xr = realize(R, *X);
            if (Xr.max_member_dim() > 96) {
                --i;
                continue;
            }
            ++exprs;
            bool eventually_empty = !hsupp_oracle(Xr).count(window.size() - 1);
            c.expect(member(X, P) == eventually_empty, X->str());
        }
    }

    auto Q = fam({{"kind", "cyclic_prime_order"}});
    auto d = space_description(*Q);
    c.expect(d == SpaceDesc::opc(SpaceDesc::finite_discrete(1)), "cyclic_prime_order space " + d.str());
    c.expect(!is_isolated(*Q, ProfinitePoint::stabilizing(C(1))), "trivial group isolated");
    for (u64 q : primes_up_to(50)) c.expect(is_isolated(*Q, ProfinitePoint::stabilizing(C(q))), "C" + std::to_string(q));

    // cyclic_all restricted to primes <= 11 is the product of the cyclic_p stages
    auto A = fam({{"kind", "cyclic_all"}});
    const std::vector<u64> qs{2, 3, 5, 7, 11};
    for (u64 n = 1; n <= 24; ++n) {
        std::set<Member> got;
        for (auto& m : A->stage(n).members) {
            bool small = true;
            for (u64 q : as_group(m).primes()) small &= q <= 11;
            if (small) got.insert(m);
        }
        std::set<FinAbGroup> want{C(1)};
        for (u64 q : qs) {
            std::set<FinAbGroup> next;
            for (auto& m : fam({{"kind", "cyclic_p"}, {"p", q}})->stage(n).members)
                for (auto& g : want) next.insert(product(g, as_group(m)));
            want = std::move(next);
        }
        std::set<Member> wantm(want.begin(), want.end());
        c.expect(got == wantm, "stage " + std::to_string(n));
    }
    return c.done(std::to_string(exprs) + " expressions, stages 1..24");
}

// ---- 6: essentially finite engine ----
Outcome finite_engine()
{
    Check c;
    const u64 p = 2;
    auto R = RepFamily::from_groups({C(1), C(p), C(p * p), FinAbGroup::elementary(p, 2), canonicalize({long(p * p), long(p)})});
    auto F = R->family();
    std::mt19937_64 rng(6);
    auto S = ExprSampler::for_family(F, 1);
    S.use_chi = true;
    S.max_depth = 3;
    std::vector<std::pair<ExprPtr, std::set<size_t>>> pool;
    while (pool.size() < 100) {
        auto X = S(rng);
        auto Xr = realize(R, *X);
        if (Xr.max_member_dim() > 64) continue;
        auto supp = hsupp_oracle(Xr);
        auto T = chi_decompose(Xr);
        std::set<size_t> peeled;
        for (auto& st : T.steps) peeled.insert(st.member);
        c.expect(T.valid && T.steps.size() == supp.size() && peeled == supp, "peeling " + X->str() + " " + T.problem);
        pool.emplace_back(X, supp);
    }
    size_t pairs = 0;
    for (auto& [Y, sy] : pool) {
        auto I = ideal_of(F, {Y});
        for (auto& [X, sx] : pool) {
            ++pairs;
            bool want = std::includes(sy.begin(), sy.end(), sx.begin(), sx.end());
            c.expect(member(X, I) == (want ? Tri::yes : Tri::no), X->str() + " in <" + Y->str() + ">");
        }
    }
    return c.done("100 complexes, " + std::to_string(pairs) + " memberships");
}

// ---- 7: generator identities ----
Outcome generator_identities()
{
    Check c;
    size_t n = 0;
    for (u64 q : {2, 3}) {
        auto F = RepFamily::from_groups({C(1), C(q)});
        for (size_t g = 0; g < F->size(); ++g) {
            auto mods = irreducible_modules(*F, g);
            mods.push_back(OutModule::regular(*F, g));
            for (auto& U : mods)
                for (auto& V : mods) {
                    ++n;
                    c.expect(verify_retraction(F, g, U, V).ok(), F->label(g) + " " + U.name + " " + V.name);
                }
            for (auto& V : mods) c.expect(verify_augmentation_fiber(F, g, V), "fiber " + F->label(g) + " " + V.name);
        }
    }
    return c.done(std::to_string(n) + " retractions");
}

// ---- 8: Krull chain ----
Outcome krull()
{
    Check c;
    auto links = krull_chain(2, 8);
    c.expect(links.size() == 8, "chain length " + std::to_string(links.size()));
    std::set<std::string> names;
    for (size_t i = 0; i < links.size(); ++i) {
        auto& L = links[i];
        names.insert(L.prime.str());
        c.expect(L.in_previous && L.not_in_this, "link " + std::to_string(i) + " flags");
        c.expect(!member(L.witness, L.prime), "witness " + std::to_string(i) + " lies in its prime");
        if (i > 0) c.expect(member(L.witness, links[i - 1].prime), "witness " + std::to_string(i) + " outside previous");
        // later primes sit inside earlier ones: every earlier witness outside
        // the earlier prime is outside the later one too
        for (size_t j = 0; j < i; ++j) c.expect(!member(links[j].witness, L.prime), "nesting " + std::to_string(i));
    }
    c.expect(names.size() == links.size(), "primes not distinct");
    return c.done(std::to_string(links.size()) + " primes");
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_s; // 0: none pinned
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "epi oracle equivalence", 60, epi_oracle},
        {2, "elementary abelian spectrum", 10, elementary_spectrum},
        {3, "VI classification", 0, vi_classification},
        {4, "bounded rank spectra", 5, bounded_rank},
        {5, "cyclic families", 0, cyclic_families},
        {6, "essentially finite engine", 120, finite_engine},
        {7, "generator identities", 0, generator_identities},
        {8, "Krull chain", 1, krull},
    };
    int failed = 0;
    for (auto& k : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = k.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (k.limit_s > 0 && s > k.limit_s) {
            o.ok = false;
            o.detail += " | over the " + std::to_string(int(k.limit_s)) + " s limit";
        }
        std::printf("%s %d %s (%.2f s): %s\n", o.ok ? "PASS" : "FAIL", k.id, k.name, s, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.ok;
    }
    return failed ? 1 : 0;
}
