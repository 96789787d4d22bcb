#include "ttgeo/sample.hpp"

namespace ttgeo {

u64 uniform(std::mt19937_64& rng, u64 lo, u64 hi)
{
    return std::uniform_int_distribution<u64>(lo, hi)(rng);
}

ExprSampler ExprSampler::for_family(FamilyPtr F, u64 stage)
{
    ExprSampler s;
    if (F->extensional()) {
        for (auto& o : F->table().objects) s.leaves.push_back(TableObject{o});
        s.use_chi = true;
    } else {
        s.leaves = F->stage(stage).members;
    }
    s.use_unit = F->unital();
    s.F = std::move(F);
    return s;
}

ExprPtr ExprSampler::leaf(std::mt19937_64& rng) const
{
    for (;;) {
        const Member& G = leaves.at(uniform(rng, 0, leaves.size() - 1));
        switch (uniform(rng, 0, 9)) {
        case 0:
            if (use_unit) return ObjectExpr::unit();
            break;
        case 1:
            if (use_zero) return ObjectExpr::zero();
            break;
        case 2:
        case 3:
        case 4:
            if (use_aug && F->unital() && F->has_orbit_counts(G)) return ObjectExpr::aug_cone(G);
            break;
        case 5:
            if (use_chi && F->extensional()) return ObjectExpr::chi(G);
            break;
        case 6:
            if (use_twisted) return ObjectExpr::gen_twisted(G, static_cast<unsigned>(uniform(rng, 1, 2)));
            break;
        default: return ObjectExpr::gen(G);
        }
    }
}

ExprPtr ExprSampler::draw(std::mt19937_64& rng, unsigned depth) const
{
    if (depth == 0 || uniform(rng, 0, 2) == 0) return leaf(rng);
    switch (uniform(rng, 0, 4)) {
    case 0: return ObjectExpr::shift(draw(rng, depth - 1), static_cast<int>(uniform(rng, 0, 3)) - 1);
    case 1:
    case 2: return ObjectExpr::sum(draw(rng, depth - 1), draw(rng, depth - 1));
    default: return ObjectExpr::tensor(draw(rng, depth - 1), draw(rng, depth - 1));
    }
}

} // namespace ttgeo
