#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>

#include "ttgeo/family.hpp"
#include "ttgeo/qmatrix.hpp"
#include "ttgeo/ttsupport.hpp"

namespace ttgeo {

class RepFamily;
using RepFamilyPtr = std::shared_ptr<const RepFamily>;

// An essentially finite family of abelian groups with element-level data:
// every epimorphism between members, automorphism groups, and for each pair
// (H, G) the kernels N with H/N = G together with a chosen epi beta_N.
// Without tracked morphisms only kernel counts are kept (pointwise mode).
class RepFamily {
public:
    static RepFamilyPtr from_groups(const std::vector<FinAbGroup>& groups, bool track_morphisms = true);
    static RepFamilyPtr elementary_window(u64 p, unsigned max_rank); // pointwise mode

    size_t size() const { return groups_.size(); }
    const FinAbGroup& group(size_t h) const { return groups_[h]; }
    const FamilyPtr& family() const { return family_; }
    Member member(size_t h) const;
    std::string label(size_t h) const { return groups_[h].str(); }
    size_t index_of(const Member& m) const;
    bool tracked() const { return tracked_; }

    bool epi(size_t h, size_t g) const { return epi_[h][g]; }
    size_t kernel_count(size_t h, size_t g) const { return kcount_[h][g]; }

    // tracked mode only
    const std::vector<Hom>& epis(size_t h, size_t g) const;
    size_t aut_count(size_t g) const { return epis(g, g).size(); }
    size_t aut_identity(size_t g) const { return aut_id_.at(g); }
    size_t aut_mul(size_t g, size_t a, size_t b) const; // a o b
    size_t aut_inv(size_t g, size_t a) const;
    size_t compose(size_t h1, size_t h2, size_t h3, size_t g23, size_t f12) const; // index in epis(h1, h3)
    size_t find_epi(size_t h, size_t g, const Hom& f) const;
    size_t kernel_of(size_t h, size_t g, size_t e) const { return pair(h, g).kernel.at(e); }
    size_t theta_of(size_t h, size_t g, size_t e) const { return pair(h, g).theta.at(e); }
    size_t rep_epi(size_t h, size_t g, size_t k) const { return pair(h, g).rep.at(k); }
    const ElementTable& table(size_t h) const { return tables_.at(h); }

private:
    struct PairData {
        std::vector<Hom> epis;
        std::map<Hom, size_t> index;
        std::vector<size_t> kernel, theta, rep;
    };
    const PairData& pair(size_t h, size_t g) const;
    size_t require_tracked() const;

    std::vector<FinAbGroup> groups_;
    FamilyPtr family_;
    bool tracked_ = true;
    std::vector<std::vector<char>> epi_;
    std::vector<std::vector<size_t>> kcount_;
    std::vector<ElementTable> tables_;
    std::map<std::pair<size_t, size_t>, PairData> pairs_;
    std::map<size_t, size_t> aut_id_;
    std::map<size_t, std::vector<std::vector<size_t>>> aut_mul_;
    std::map<size_t, std::vector<size_t>> aut_inv_;
};

// A finite dimensional Q[Out(G)]-module given by left action matrices A(theta),
// indexed like RepFamily::epis(g, g).
struct OutModule {
    size_t dim = 0;
    std::vector<QMatrix> act;
    std::string name;

    static OutModule trivial(const RepFamily& F, size_t g, size_t d = 1);
    static OutModule regular(const RepFamily& F, size_t g);
    static OutModule character(const RepFamily& F, size_t g, const std::vector<int>& signs);
    static OutModule tensor(const OutModule& a, const OutModule& b);
    void validate(const RepFamily& F, size_t g) const; // throws inconsistent-action
};

// Irreducible modules; implemented when Out(G) is an elementary abelian 2-group
// (all irreducibles are then +-1 characters).
std::vector<OutModule> irreducible_modules(const RepFamily& F, size_t g);

// A functor U^op -> Vect_Q: spaces per member, and for every epi e: h -> g a
// restriction matrix X(g) -> X(h).
struct FunctorRep {
    RepFamilyPtr F;
    std::vector<size_t> dim;
    std::map<std::array<size_t, 3>, QMatrix> res; // (h, g, epi index)

    static FunctorRep zero(RepFamilyPtr F);
    QMatrix along(size_t h, size_t g, size_t e) const;
    size_t total_dim() const;
    void validate() const; // functoriality and identities
};

// A bounded complex, homological grading: d lowers degree.
struct FunctorComplex {
    RepFamilyPtr F;
    int lo = 0;
    std::vector<FunctorRep> terms;             // degree lo + i
    std::vector<std::vector<QMatrix>> d;       // d[i][h]: degree lo+i -> lo+i-1 (d[0] empty)

    static FunctorComplex zero(RepFamilyPtr F);
    static FunctorComplex concentrated(const FunctorRep& X, int degree);
    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    bool has(int n) const { return n >= lo && n <= hi(); }
    size_t dim(int n, size_t h) const;
    QMatrix diff(int n, size_t h) const; // degree n -> n-1, correctly shaped even when absent
    void validate() const;               // d o d = 0 and naturality
    size_t max_member_dim() const;
};

// chain map X -> Y: per degree, per member
struct ChainMap {
    std::map<int, std::vector<QMatrix>> f;
    QMatrix at(const FunctorComplex& X, const FunctorComplex& Y, int n, size_t h) const;
};
void validate_chain_map(const FunctorComplex& X, const FunctorComplex& Y, const ChainMap& f);

FunctorRep build_eGV(const RepFamilyPtr& F, size_t g, const OutModule& V);
FunctorRep build_chi(const RepFamilyPtr& F, size_t g, const OutModule& V);
FunctorRep unit_rep(const RepFamilyPtr& F);

// the natural map e_{G,V} -> X determined by an equivariant f: V -> X(G);
// f is averaged over Out(G) first so any linear map may be passed
std::vector<QMatrix> map_from_eGV(const RepFamilyPtr& F, size_t g, const OutModule& V, const FunctorRep& X,
                                  const QMatrix& f);
std::vector<QMatrix> augmentation(const RepFamilyPtr& F, size_t g); // e_{G,k} -> unit

FunctorComplex sum(const FunctorComplex& X, const FunctorComplex& Y);
FunctorComplex shift(const FunctorComplex& X, int k);
FunctorComplex tensor(const FunctorComplex& X, const FunctorComplex& Y);
FunctorComplex cone(const FunctorComplex& X, const FunctorComplex& Y, const ChainMap& f);
// quotient by the subfunctor living on an up-closed set W of members
FunctorComplex quotient_upset(const FunctorComplex& X, const std::set<size_t>& W);

using GradedDims = std::map<int, size_t>; // nonzero entries only
std::vector<GradedDims> homology(const FunctorComplex& X);
std::set<size_t> hsupp_oracle(const FunctorComplex& X);
long euler_characteristic(const FunctorComplex& X, size_t h);

// realization of a support-exact expression; Gen(G) is e_G (regular module) in
// tracked mode and e_{G,k} in pointwise mode
FunctorComplex realize(const RepFamilyPtr& F, const ObjectExpr& X);
// homology per member; tensor nodes use the Kunneth formula instead of materializing
using HomologyMemo = std::map<std::string, std::vector<GradedDims>>; // leaf text -> homology
std::vector<GradedDims> expr_homology(const RepFamilyPtr& F, const ObjectExpr& X, HomologyMemo* memo = nullptr);

struct PeelStep {
    size_t member;
    GradedDims v_dims;
    std::set<size_t> before, after;
};
struct PeelTrace {
    std::vector<PeelStep> steps;
    bool valid = true;
    std::string problem;
};
PeelTrace chi_decompose(const FunctorComplex& X);

struct RetractionReport {
    bool well_defined = false, natural = false, identity = false;
    bool ok() const { return well_defined && natural && identity; }
};
RetractionReport verify_retraction(const RepFamilyPtr& F, size_t g, const OutModule& U, const OutModule& V);

// support of the fiber of e_{G,V} -> chi_{G,V} lies in ua(G) minus G
bool verify_augmentation_fiber(const RepFamilyPtr& F, size_t g, const OutModule& V);

nlohmann::json complex_to_json(const FunctorComplex& X);
FunctorComplex complex_from_json(const RepFamilyPtr& F, const nlohmann::json& j);

} // namespace ttgeo
