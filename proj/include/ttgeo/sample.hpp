#pragma once

#include <random>

#include "ttgeo/ttsupport.hpp"

namespace ttgeo {

// Random support-exact expressions over a fixed list of leaf members.
struct ExprSampler {
    FamilyPtr F;
    std::vector<Member> leaves;
    bool use_unit = true;
    bool use_aug = true;
    bool use_chi = false;
    bool use_twisted = false;
    bool use_zero = true;
    unsigned max_depth = 2;

    // leaves default to F's members at the given stage (or the whole table)
    static ExprSampler for_family(FamilyPtr F, u64 stage);
    ExprPtr leaf(std::mt19937_64& rng) const;
    ExprPtr operator()(std::mt19937_64& rng) const { return draw(rng, max_depth); }
    ExprPtr draw(std::mt19937_64& rng, unsigned depth) const;
};

// uniform integer in [lo, hi]
u64 uniform(std::mt19937_64& rng, u64 lo, u64 hi);

} // namespace ttgeo
