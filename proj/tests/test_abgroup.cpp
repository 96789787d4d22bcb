#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ttgeo/abgroup.hpp"

using namespace ttgeo;

static FinAbGroup G(const char* s) { return FinAbGroup::parse(s); }

// random group of order <= cap, primes from {2,3,5}
static FinAbGroup random_group(std::mt19937_64& rng, u64 cap)
{
    for (;;) {
        FinAbGroup::Parts parts;
        u64 order = 1;
        for (u64 p : {2, 3, 5}) {
            if (rng() % 2) continue;
            Partition lam;
            unsigned last = 4;
            while (rng() % 3 && lam.size() < 4) {
                unsigned e = 1 + rng() % last;
                lam.push_back(e);
                last = e;
            }
            if (lam.empty()) continue;
            for (unsigned e : lam) order *= ipow(p, e);
            parts[p] = lam;
        }
        if (order <= cap) return FinAbGroup::from_parts(parts);
    }
}

TEST_CASE("canonicalize")
{
    CHECK(canonicalize({4, 2}) == G("2:[2,1]"));
    CHECK(canonicalize({6}) == G("2:[1];3:[1]"));
    CHECK(canonicalize({}).trivial());
    CHECK(canonicalize({12, 18}).order() == 216);
    CHECK_THROWS_AS(canonicalize({0}), Error);
    CHECK_THROWS_AS(canonicalize({-3}), Error);
}

TEST_CASE("literals")
{
    CHECK(G("1").trivial());
    CHECK(G("{}").trivial());
    CHECK(G("2:[2,1];3:[1]").order() == 24);
    CHECK(G("3:[1];2:[1,2]") == G("2:[2,1];3:[1]"));
    CHECK(G("2:[2,1];3:[1]").str() == "2:[2,1];3:[1]");
    CHECK(G("2:[2,1]").pretty() == "Z/4+Z/2");
    for (auto bad : {"", "2:", "4:[1]", "2:[0]", "2:[1", "x", "2:[1];2:[1]"})
        CHECK_THROWS_AS(FinAbGroup::parse(bad), Error);
}

TEST_CASE("epi_exists examples")
{
    CHECK(epi_exists(G("2:[2,1]"), G("2:[1,1]")));
    CHECK_FALSE(epi_exists(G("2:[1,1]"), G("2:[2]")));
    CHECK(epi_exists(G("3:[2];5:[1]"), G("1")));
    CHECK_FALSE(epi_exists(G("2:[1]"), G("3:[1]")));
    CHECK(oracle_epi_exists(G("2:[2,1]"), G("2:[1,1]"), 64));
    CHECK_FALSE(oracle_epi_exists(G("2:[1]"), G("2:[1,1]"), 64));
    CHECK(oracle_epi_exists(G("2:[1];3:[1]"), G("2:[1];3:[1]"), 64));
    CHECK_THROWS_AS(oracle_epi_exists(G("2:[3]"), G("2:[3]"), 32), Error);
}

TEST_CASE("product")
{
    CHECK(product(G("2:[2]"), G("2:[1]")) == G("2:[2,1]"));
    CHECK(product(G("2:[1]"), G("3:[1]")) == G("2:[1];3:[1]"));
    CHECK(product(G("5:[2]"), G("1")) == G("5:[2]"));
}

TEST_CASE("quotient_classes")
{
    std::vector<FinAbGroup> want{G("1"), G("2:[1]"), G("2:[2]"), G("2:[1,1]"), G("2:[2,1]")};
    CHECK(quotient_classes(G("2:[2,1]")) == want);
    CHECK(quotient_classes(G("1")) == std::vector<FinAbGroup>{G("1")});
    CHECK(quotient_classes(G("3:[1]")) == std::vector<FinAbGroup>{G("1"), G("3:[1]")});
}

TEST_CASE("wide subgroups")
{
    auto w = oracle_wide_subgroups(G("2:[1]"), G("2:[1]"), 64);
    CHECK(w == std::vector<FinAbGroup>{G("2:[1]"), G("2:[1,1]")});
    CHECK(oracle_wide_subgroups(G("3:[1,1]"), G("1"), 64) == std::vector<FinAbGroup>{G("3:[1,1]")});
    CHECK(oracle_wide_subgroups(G("2:[1]"), G("3:[1]"), 64) == std::vector<FinAbGroup>{G("2:[1];3:[1]")});
}

TEST_CASE("smith normal form")
{
    CHECK(smith_normal_form({{2, 0}, {0, 3}}) == std::vector<long long>{1, 6});
    CHECK(smith_normal_form({{0, 0}, {0, 0}}) == std::vector<long long>{0, 0});
    CHECK(smith_normal_form({{1, 2}, {2, 4}}) == std::vector<long long>{1, 0});
    CHECK(smith_normal_form({{4, 6, 8}}) == std::vector<long long>{2});
    // quotient of Z/4+Z/2 by <(1,1)>, an element of order 4
    CHECK(snf_quotient_type(G("2:[2,1]"), {{1, 1}}) == G("2:[1]"));
}

TEST_CASE("quotient counts match kernel enumeration")
{
    for (auto& H : abelian_groups_up_to(48)) {
        ElementTable T(H);
        std::map<FinAbGroup, u64> counts;
        for (auto& K : oracle_subgroups(T)) ++counts[T.quotient_type(K)];
        for (auto& [Q, c] : counts) CHECK(count_quotients_of_type(H, Q) == c);
    }
    CHECK(gaussian_binomial(3, 1, 2) == 7);
    CHECK(gaussian_binomial(4, 2, 3) == 130);
}

TEST_CASE("epi_exists agrees with the oracle, p in {2,3}, order <= 64")
{
    size_t pairs = 0;
    for (u64 p : {2, 3}) {
        auto gs = p_groups_up_to(p, 64);
        for (auto& a : gs)
            for (auto& b : gs) {
                ++pairs;
                CHECK(epi_exists(a, b) == oracle_epi_exists(a, b, 64 * 64));
            }
    }
    CHECK(pairs == 30 * 30 + 7 * 7);
}

TEST_CASE("quotient_classes is the down-set, checked by kernels")
{
    for (auto& H : abelian_groups_up_to(64)) {
        auto qs = quotient_classes(H);
        CHECK(qs == oracle_quotient_classes(H, 64));
        for (auto& K : abelian_groups_up_to(64))
            CHECK(epi_exists(H, K) == (std::find(qs.begin(), qs.end(), K) != qs.end()));
    }
}

TEST_CASE("preorder laws on random groups")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 400; ++i) {
        auto a = random_group(rng, 1024), b = random_group(rng, 1024), c = random_group(rng, 1024);
        CHECK(epi_exists(a, a));
        if (epi_exists(a, b) && epi_exists(b, c)) CHECK(epi_exists(a, c));
        if (epi_exists(a, b) && epi_exists(b, a)) CHECK(a == b);
        CHECK(product(a, b).order() == a.order() * b.order());
        CHECK(product(a, b) == product(b, a));
        CHECK(product(product(a, b), c) == product(a, product(b, c)));
        CHECK(epi_exists(product(a, b), a));
        CHECK(FinAbGroup::parse(a.str()) == a);
        std::vector<long long> orders;
        for (u64 o : a.cyclic_orders()) orders.push_back(static_cast<long long>(o));
        CHECK(canonicalize(orders) == a);
    }
}

TEST_CASE("element tables")
{
    ElementTable T(G("2:[2,1];3:[1]"));
    CHECK(T.order() == 24);
    std::set<size_t> seen;
    for (size_t x = 0; x < T.order(); ++x) {
        seen.insert(T.add(x, T.neg(x)));
        CHECK(T.encode(T.digits(x)) == x);
        CHECK(T.mul(x, T.element_order(x)) == 0);
    }
    CHECK(seen == std::set<size_t>{0});
    CHECK(oracle_count_epis(G("2:[1]"), G("2:[1]"), 64) == 1);
    CHECK(oracle_count_epis(G("3:[1]"), G("3:[1]"), 64) == 2);
    CHECK(oracle_count_epis(G("2:[1,1]"), G("2:[1,1]"), 64) == 6);
}
