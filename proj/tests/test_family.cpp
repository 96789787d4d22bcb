#include <doctest.h>

#include <algorithm>
#include <random>

#include "ttgeo/family.hpp"

using namespace ttgeo;
using json = nlohmann::json;

static FinAbGroup G(const char* s) { return FinAbGroup::parse(s); }
static FamilyPtr fam(const char* j) { return Family::from_json(json::parse(j)); }
static Member C(u64 n) { return FinAbGroup::cyclic(n); }

static std::vector<Member> sorted(std::vector<Member> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

TEST_CASE("family specs")
{
    auto F = fam(R"({"kind":"abelian_p_rank","p":2,"r":2})");
    CHECK(F->flag(Predicate::r_submultiplicative).status == PredicateResult::Status::certified);
    CHECK(F->flag(Predicate::downward_closed).status == PredicateResult::Status::certified);

    auto T = fam(R"({"kind":"extensional","objects":["1","2:[1]"],"epis":[["2:[1]","1"]]})");
    CHECK(T->flag(Predicate::downward_closed).status == PredicateResult::Status::certified);
    CHECK(T->flag(Predicate::downward_closed).basis.find("exhaustive") != std::string::npos);

    auto P = fam(R"({"kind":"cyclic_prime_order"})");
    CHECK(P->contains(G("1")));
    for (u64 q : {2, 3, 5, 7, 11, 101}) CHECK(P->contains(C(q)));
    CHECK_FALSE(P->contains(C(4)));
    CHECK_FALSE(P->contains(C(6)));

    for (auto bad : {R"({"kind":"cyclic_p"})", R"({"kind":"cyclic_p","p":4})", R"({"kind":"nope"})",
                     R"({"kind":"cyclic_p","p":2,"extra":1})", R"({"kind":"abelian_p_rank","p":2,"r":0})", R"([])"})
        CHECK_THROWS_AS(fam(bad), Error);
    // not transitive
    CHECK_THROWS_AS(fam(R"({"kind":"extensional","objects":["a","b","c"],"epis":[["a","b"],["b","c"]]})"), Error);
    // epis both ways
    CHECK_THROWS_AS(fam(R"({"kind":"extensional","objects":["a","b"],"epis":[["a","b"],["b","a"]]})"), Error);

    for (auto j : {R"({"kind":"cyclic_p","p":3})", R"({"kind":"abelian_p_rank","p":2,"r":3})",
                   R"({"kind":"extensional","objects":["1","2:[1]","2:[2]"],"epis":[["2:[1]","1"],["2:[2]","1"],["2:[2]","2:[1]"]]})"}) {
        auto A = fam(j);
        CHECK(Family::from_json(A->spec().to_json())->key() == A->key());
    }
}

TEST_CASE("contains")
{
    auto F = fam(R"({"kind":"abelian_p_rank","p":2,"r":2})");
    CHECK(F->contains(G("2:[3,1]")));
    CHECK_FALSE(F->contains(G("2:[1,1,1]")));
    CHECK_FALSE(F->contains(G("3:[1]")));
    CHECK(fam(R"({"kind":"elementary_abelian","p":3})")->contains(G("3:[1,1]")));
    CHECK_FALSE(fam(R"({"kind":"elementary_abelian","p":3})")->contains(G("3:[2]")));
    CHECK(fam(R"({"kind":"abelian_p_exponent","p":3,"l":2})")->contains(G("3:[2,2,1,1]")));
    CHECK_FALSE(fam(R"({"kind":"abelian_p_exponent","p":3,"l":2})")->contains(G("3:[3]")));
    CHECK(fam(R"({"kind":"cyclic_all"})")->contains(C(360)));
    CHECK_FALSE(fam(R"({"kind":"cyclic_all"})")->contains(G("2:[1,1]")));
    CHECK_THROWS_AS(F->require(G("2:[1,1,1]")), Error);
}

TEST_CASE("stages")
{
    auto Cp = fam(R"({"kind":"cyclic_p","p":3})");
    CHECK(sorted(Cp->stage(27).members) == sorted({C(1), C(3), C(9), C(27)}));
    CHECK(sorted(Cp->stage(26).members) == sorted({C(1), C(3), C(9)}));
    auto R2 = fam(R"({"kind":"abelian_p_rank","p":5,"r":2})");
    CHECK(sorted(R2->stage(5).members) == sorted({G("1"), G("5:[1]"), G("5:[1,1]")}));
    CHECK(R2->stage(25).members.size() == 6);
    auto Ca = fam(R"({"kind":"cyclic_all"})");
    // C6 and C12 embed in C4 x C3, so they lie in stage 4 as well
    CHECK(sorted(Ca->stage(4).members) == sorted({C(1), C(2), C(3), C(4), C(6), C(12)}));
    CHECK_THROWS_AS(fam(R"({"kind":"elementary_abelian","p":2})")->stage(4), Error);
    CHECK_THROWS_AS(Cp->stage(0), Error);
}

TEST_CASE("reflect")
{
    for (u64 p : {2, 3}) {
        auto R3 = Family::from_json({{"kind", "abelian_p_rank"}, {"p", p}, {"r", 3}});
        auto v = FinAbGroup::from_parts({{p, {3, 2, 1}}});
        CHECK(R3->reflect(p * p, v) == Member(FinAbGroup::from_parts({{p, {2, 2, 1}}})));
        auto Cp = Family::from_json({{"kind", "cyclic_p"}, {"p", p}});
        CHECK(Cp->reflect(p, C(p * p * p)) == C(p));
        for (u64 n : {1, 2, 7, 100}) {
            CHECK(Cp->reflect(n, G("1")) == Member(G("1")));
            CHECK(R3->reflect(n, G("1")) == Member(G("1")));
        }
    }
}

// the reflection is the largest stage member the group maps onto; compare
// with the kernel-intersection construction
TEST_CASE("reflection agrees with the kernel oracle")
{
    for (auto j : {R"({"kind":"cyclic_p","p":2})", R"({"kind":"abelian_p_rank","p":2,"r":2})",
                   R"({"kind":"abelian_p_rank","p":3,"r":2})", R"({"kind":"cyclic_all"})",
                   R"({"kind":"cyclic_prime_order"})"}) {
        auto F = fam(j);
        auto ms = F->members_up_to(64);
        for (u64 n : {1, 2, 3, 4, 8, 9, 16}) {
            std::vector<Member> small;
            for (auto& m : F->stage(n).members)
                if (as_group(m).order() <= 64) small.push_back(m);
            CHECK(sorted(small) == sorted(F->oracle_stage_members(n, 64)));
            for (auto& m : ms) {
                auto r = F->reflect(n, m);
                CHECK(r == F->oracle_reflect(n, m));
                CHECK(F->epi(m, r));
                CHECK(F->reflect(n, r) == r);
                CHECK(F->least_stage(r) <= std::max<u64>(n, 1));
            }
        }
    }
}

TEST_CASE("stage universal property on random inputs")
{
    auto F = fam(R"({"kind":"abelian_p_rank","p":2,"r":3})");
    auto ms = F->members_up_to(1024);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto& m = ms[rng() % ms.size()];
        u64 n = 1 + rng() % 40, k = n + rng() % 40;
        auto rn = F->reflect(n, m);
        // maps to every stage member that m maps onto
        for (auto& s : F->stage(n).members)
            if (F->epi(m, s)) CHECK(F->epi(rn, s));
        // q_{n<-k} composes
        CHECK(F->reflect(n, F->reflect(k, m)) == rn);
    }
}

TEST_CASE("check_predicate")
{
    using S = PredicateResult::Status;
    auto R1 = fam(R"({"kind":"abelian_p_rank","p":2,"r":1})");
    CHECK(check_predicate(*R1, Predicate::r_submultiplicative, 64, 1).status == S::certified);
    auto P = fam(R"({"kind":"cyclic_prime_order"})");
    auto res = check_predicate(*P, Predicate::r_submultiplicative, 36, 1);
    CHECK(res.status == S::refuted);
    CHECK(res.witness == std::vector<Member>{C(2), C(3), C(6)});
    CHECK(check_predicate(*P, Predicate::unital, 36).status == S::certified);

    // a table missing a quotient of one of its groups
    auto T = fam(R"({"kind":"extensional","objects":["1","2:[2]"],"epis":[["2:[2]","1"]]})");
    auto dc = check_predicate(*T, Predicate::downward_closed, 64);
    CHECK(dc.status == S::refuted);
    CHECK(std::find(dc.witness.begin(), dc.witness.end(), Member(G("2:[1]"))) != dc.witness.end());

    // abstract objects cannot be checked against group structure
    auto E = fam(R"({"kind":"extensional","objects":["E1","E2"],"epis":[["E2","E1"]]})");
    CHECK(check_predicate(*E, Predicate::unital, 64).status == S::refuted);

    auto Ep = fam(R"({"kind":"elementary_abelian","p":2})");
    CHECK(check_predicate(*Ep, Predicate::multiplicative_global, 64).status == S::certified);
    CHECK(check_predicate(*Ep, Predicate::widely_closed, 64).status == S::certified);
    CHECK_THROWS_AS(parse_predicate("frobnicate"), Error);
}

TEST_CASE("minimal_complement")
{
    for (u64 p : {2, 3}) {
        auto Cp = Family::from_json({{"kind", "cyclic_p"}, {"p", p}});
        auto mc = minimal_complement(*Cp, C(p * p), 1000);
        CHECK_FALSE(mc.unbounded);
        CHECK(mc.minimal == std::vector<Member>{C(p * p * p)});
        auto R2 = Family::from_json({{"kind", "abelian_p_rank"}, {"p", p}, {"r", 2}});
        auto m2 = minimal_complement(*R2, C(p), 1000);
        CHECK(sorted(m2.minimal) == sorted({C(p * p), FinAbGroup::from_parts({{p, {1, 1}}})}));
    }
    auto P = fam(R"({"kind":"cyclic_prime_order"})");
    CHECK(minimal_complement(*P, C(2), 100).unbounded);
}

TEST_CASE("downward closed inclusions")
{
    auto Ep = fam(R"({"kind":"elementary_abelian","p":2})");
    auto R2 = fam(R"({"kind":"abelian_p_rank","p":2,"r":2})");
    auto R1 = fam(R"({"kind":"cyclic_p","p":2})");
    auto Ap = fam(R"({"kind":"abelian_p","p":2})");
    CHECK(is_downward_closed_in(*R1, *R2));
    CHECK(is_downward_closed_in(*R2, *Ap));
    CHECK(is_downward_closed_in(*Ep, *Ap));
    CHECK_FALSE(is_downward_closed_in(*R2, *R1));
    CHECK_FALSE(is_downward_closed_in(*Ep, *R2));
}
