#include "ttgeo/repcore.hpp"

#include <algorithm>
#include <functional>

namespace ttgeo {

// ---------------- family with element data ----------------

RepFamilyPtr RepFamily::from_groups(const std::vector<FinAbGroup>& groups, bool track_morphisms)
{
    auto R = std::make_shared<RepFamily>();
    auto table = ExtensionalTable::from_groups(groups);
    FamilySpec s;
    s.kind = FamilyKind::extensional;
    s.table = table;
    R->family_ = Family::make(s);
    for (auto& g : table->groups) R->groups_.push_back(*g);
    R->tracked_ = track_morphisms;
    size_t n = R->groups_.size();
    R->epi_.assign(n, std::vector<char>(n, 0));
    R->kcount_.assign(n, std::vector<size_t>(n, 0));
    for (size_t h = 0; h < n; ++h)
        for (size_t g = 0; g < n; ++g) {
            R->epi_[h][g] = epi_exists(R->groups_[h], R->groups_[g]);
            if (R->epi_[h][g]) {
                mpz_class c = count_quotients_of_type(R->groups_[h], R->groups_[g]);
                if (!c.fits_ulong_p() || c > 1000000) throw Error("cap-exceeded", "too many kernels");
                R->kcount_[h][g] = c.get_ui();
            }
        }
    if (!track_morphisms) return R;

    for (auto& g : R->groups_) R->tables_.emplace_back(g);
    auto cap_of = [&](size_t h, size_t g) { return std::max<u64>(64, R->groups_[h].order() * R->groups_[g].order()); };
    for (size_t h = 0; h < n; ++h)
        for (size_t g = 0; g < n; ++g) {
            if (!R->epi_[h][g]) continue;
            PairData pd;
            pd.epis = oracle_epimorphisms(R->groups_[h], R->groups_[g], cap_of(h, g));
            std::sort(pd.epis.begin(), pd.epis.end());
            for (size_t e = 0; e < pd.epis.size(); ++e) pd.index[pd.epis[e]] = e;
            R->pairs_[{h, g}] = std::move(pd);
        }
    // automorphism tables
    for (size_t g = 0; g < n; ++g) {
        auto& TG = R->tables_[g];
        Hom id;
        for (size_t i = 0; i < TG.rank(); ++i) id.images.push_back(TG.generator(i));
        auto& auts = R->pairs_.at({g, g});
        R->aut_id_[g] = auts.index.at(id);
        size_t m = auts.epis.size();
        std::vector<std::vector<size_t>> mul(m, std::vector<size_t>(m));
        std::vector<size_t> inv(m);
        for (size_t a = 0; a < m; ++a)
            for (size_t b = 0; b < m; ++b) {
                mul[a][b] = auts.index.at(ttgeo::compose(TG, TG, TG, auts.epis[a], auts.epis[b]));
                if (mul[a][b] == R->aut_id_[g]) inv[a] = b;
            }
        R->aut_mul_[g] = std::move(mul);
        R->aut_inv_[g] = std::move(inv);
    }
    // kernels, chosen representatives and the automorphism relating each epi to its representative
    for (auto& [key, pd] : R->pairs_) {
        auto [h, g] = key;
        auto& TH = R->tables_[h];
        auto& TG = R->tables_[g];
        std::map<std::vector<char>, size_t> kidx;
        std::vector<std::vector<size_t>> pre; // per kernel: preimage of each element of G under beta_N
        pd.kernel.resize(pd.epis.size());
        pd.theta.resize(pd.epis.size());
        for (size_t e = 0; e < pd.epis.size(); ++e) {
            auto K = kernel_mask(TH, TG, pd.epis[e]);
            auto it = kidx.find(K);
            if (it == kidx.end()) {
                it = kidx.emplace(K, pd.rep.size()).first;
                pd.rep.push_back(e);
                std::vector<size_t> p(TG.order(), SIZE_MAX);
                for (size_t x = 0; x < TH.order(); ++x) {
                    size_t y = apply(TH, TG, pd.epis[e], x);
                    if (p[y] == SIZE_MAX) p[y] = x;
                }
                pre.push_back(std::move(p));
            }
            size_t k = it->second;
            pd.kernel[e] = k;
            Hom th;
            for (size_t i = 0; i < TG.rank(); ++i) th.images.push_back(apply(TH, TG, pd.epis[e], pre[k][TG.generator(i)]));
            pd.theta[e] = R->pairs_.at({g, g}).index.at(th);
        }
        if (pd.rep.size() != R->kcount_[h][g]) throw Error("internal", "kernel count disagrees with the closed form");
    }
    return R;
}

RepFamilyPtr RepFamily::elementary_window(u64 p, unsigned max_rank)
{
    std::vector<FinAbGroup> gs;
    for (unsigned r = 0; r <= max_rank; ++r) gs.push_back(FinAbGroup::elementary(p, r));
    return from_groups(gs, false);
}

Member RepFamily::member(size_t h) const
{
    return TableObject{groups_.at(h).str()};
}

size_t RepFamily::index_of(const Member& m) const
{
    for (size_t h = 0; h < groups_.size(); ++h) {
        if (auto t = std::get_if<TableObject>(&m); t && t->label == groups_[h].str()) return h;
        if (auto g = std::get_if<FinAbGroup>(&m); g && *g == groups_[h]) return h;
    }
    throw Error("membership-failure", member_str(m) + " is not a member of the window");
}

size_t RepFamily::require_tracked() const
{
    if (!tracked_) throw Error("unsupported", "operation needs tracked morphisms");
    return 0;
}

const RepFamily::PairData& RepFamily::pair(size_t h, size_t g) const
{
    require_tracked();
    auto it = pairs_.find({h, g});
    if (it == pairs_.end()) throw Error("invalid-spec", "no epimorphism " + label(h) + " -> " + label(g));
    return it->second;
}

const std::vector<Hom>& RepFamily::epis(size_t h, size_t g) const
{
    return pair(h, g).epis;
}

size_t RepFamily::aut_mul(size_t g, size_t a, size_t b) const
{
    require_tracked();
    return aut_mul_.at(g)[a][b];
}

size_t RepFamily::aut_inv(size_t g, size_t a) const
{
    require_tracked();
    return aut_inv_.at(g)[a];
}

size_t RepFamily::find_epi(size_t h, size_t g, const Hom& f) const
{
    auto& pd = pair(h, g);
    auto it = pd.index.find(f);
    if (it == pd.index.end()) throw Error("internal", "homomorphism is not a listed epimorphism");
    return it->second;
}

size_t RepFamily::compose(size_t h1, size_t h2, size_t h3, size_t g23, size_t f12) const
{
    auto c = ttgeo::compose(tables_[h1], tables_[h2], tables_[h3], epis(h2, h3)[g23], epis(h1, h2)[f12]);
    return find_epi(h1, h3, c);
}

// every tracked epi as (h, g, e)
static std::vector<std::array<size_t, 3>> all_epis(const RepFamily& F)
{
    std::vector<std::array<size_t, 3>> out;
    if (!F.tracked()) return out;
    for (size_t h = 0; h < F.size(); ++h)
        for (size_t g = 0; g < F.size(); ++g)
            if (F.epi(h, g))
                for (size_t e = 0; e < F.epis(h, g).size(); ++e) out.push_back({h, g, e});
    return out;
}

// ---------------- Out-modules ----------------

static size_t aut_count_or_one(const RepFamily& F, size_t g)
{
    return F.tracked() ? F.aut_count(g) : 1;
}

OutModule OutModule::trivial(const RepFamily& F, size_t g, size_t d)
{
    OutModule V;
    V.dim = d;
    V.act.assign(aut_count_or_one(F, g), QMatrix::identity(d));
    V.name = d == 1 ? "trivial" : "trivial^" + std::to_string(d);
    return V;
}

OutModule OutModule::regular(const RepFamily& F, size_t g)
{
    size_t m = F.aut_count(g);
    OutModule V;
    V.dim = m;
    V.name = "regular";
    for (size_t t = 0; t < m; ++t) {
        QMatrix A(m, m);
        for (size_t f = 0; f < m; ++f) A(F.aut_mul(g, t, f), f) = 1;
        V.act.push_back(A);
    }
    return V;
}

OutModule OutModule::character(const RepFamily& F, size_t g, const std::vector<int>& signs)
{
    if (signs.size() != F.aut_count(g)) throw Error("inconsistent-action", "one sign per automorphism needed");
    OutModule V;
    V.dim = 1;
    V.name = "character";
    for (int s : signs) {
        QMatrix A(1, 1);
        A(0, 0) = s;
        V.act.push_back(A);
    }
    V.validate(F, g);
    return V;
}

OutModule OutModule::tensor(const OutModule& a, const OutModule& b)
{
    if (a.act.size() != b.act.size()) throw Error("inconsistent-action", "modules over different groups");
    OutModule V;
    V.dim = a.dim * b.dim;
    V.name = a.name + "(x)" + b.name;
    for (size_t t = 0; t < a.act.size(); ++t) V.act.push_back(QMatrix::kron(a.act[t], b.act[t]));
    return V;
}

void OutModule::validate(const RepFamily& F, size_t g) const
{
    size_t m = aut_count_or_one(F, g);
    if (act.size() != m) throw Error("inconsistent-action", "expected " + std::to_string(m) + " action matrices");
    for (auto& A : act)
        if (A.rows() != dim || A.cols() != dim) throw Error("inconsistent-action", "action matrix has the wrong size");
    if (!F.tracked()) {
        if (!(act[0] == QMatrix::identity(dim))) throw Error("inconsistent-action", "identity must act trivially");
        return;
    }
    if (!(act[F.aut_identity(g)] == QMatrix::identity(dim)))
        throw Error("inconsistent-action", "identity must act trivially");
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b)
            if (!(act[F.aut_mul(g, a, b)] == act[a] * act[b]))
                throw Error("inconsistent-action", "action is not multiplicative");
}

std::vector<OutModule> irreducible_modules(const RepFamily& F, size_t g)
{
    size_t m = F.aut_count(g);
    size_t id = F.aut_identity(g);
    for (size_t a = 0; a < m; ++a)
        if (F.aut_mul(g, a, a) != id)
            throw Error("unsupported", "irreducibles are implemented for elementary abelian 2-groups of automorphisms");
    // basis of Out(G) as an F_2 vector space, and coordinates of every element
    std::vector<size_t> gens;
    std::vector<long> coord(m, -1);
    coord[id] = 0;
    std::vector<size_t> span{id};
    for (size_t a = 0; a < m; ++a) {
        if (coord[a] >= 0) continue;
        size_t bit = gens.size();
        gens.push_back(a);
        size_t cur = span.size();
        for (size_t i = 0; i < cur; ++i) {
            size_t x = F.aut_mul(g, span[i], a);
            coord[x] = coord[span[i]] | (1L << bit);
            span.push_back(x);
        }
    }
    std::vector<OutModule> out;
    for (long c = 0; c < (1L << gens.size()); ++c) {
        std::vector<int> signs(m);
        for (size_t a = 0; a < m; ++a) signs[a] = __builtin_popcountl(static_cast<unsigned long>(coord[a] & c)) % 2 ? -1 : 1;
        auto V = OutModule::character(F, g, signs);
        V.name = c == 0 ? "trivial" : "sign" + std::to_string(c);
        out.push_back(V);
    }
    return out;
}

// ---------------- functors ----------------

FunctorRep FunctorRep::zero(RepFamilyPtr F)
{
    FunctorRep X;
    X.dim.assign(F->size(), 0);
    X.F = std::move(F);
    return X;
}

QMatrix FunctorRep::along(size_t h, size_t g, size_t e) const
{
    auto it = res.find({h, g, e});
    if (it != res.end()) return it->second;
    return QMatrix(dim[h], dim[g]);
}

size_t FunctorRep::total_dim() const
{
    size_t s = 0;
    for (size_t x : dim) s += x;
    return s;
}

void FunctorRep::validate() const
{
    if (!F->tracked()) return;
    for (auto& [h, g, e] : all_epis(*F)) {
        auto M = along(h, g, e);
        if (M.rows() != dim[h] || M.cols() != dim[g]) throw Error("naturality-violation", "restriction has the wrong shape");
        if (h == g && e == F->aut_identity(g) && !(M == QMatrix::identity(dim[g])))
            throw Error("naturality-violation", "identity does not act as the identity");
    }
    size_t n = F->size();
    for (size_t h1 = 0; h1 < n; ++h1)
        for (size_t h2 = 0; h2 < n; ++h2) {
            if (!F->epi(h1, h2) || dim[h1] == 0) continue;
            for (size_t h3 = 0; h3 < n; ++h3) {
                if (!F->epi(h2, h3) || dim[h3] == 0) continue;
                for (size_t f = 0; f < F->epis(h1, h2).size(); ++f)
                    for (size_t g = 0; g < F->epis(h2, h3).size(); ++g) {
                        size_t c = F->compose(h1, h2, h3, g, f);
                        if (!(along(h1, h3, c) == along(h1, h2, f) * along(h2, h3, g)))
                            throw Error("naturality-violation", "restriction maps are not functorial");
                    }
            }
        }
}

FunctorRep build_eGV(const RepFamilyPtr& F, size_t g, const OutModule& V)
{
    V.validate(*F, g);
    FunctorRep X = FunctorRep::zero(F);
    size_t dV = V.dim;
    for (size_t h = 0; h < F->size(); ++h) X.dim[h] = F->kernel_count(h, g) * dV;
    if (!F->tracked()) return X;
    for (auto& [h2, h, c] : all_epis(*F)) {
        if (X.dim[h2] == 0 || X.dim[h] == 0) continue;
        QMatrix M(X.dim[h2], X.dim[h]);
        for (size_t k = 0; k < F->kernel_count(h, g); ++k) {
            size_t beta = F->rep_epi(h, g, k);
            size_t e2 = F->compose(h2, h, g, beta, c);
            size_t k2 = F->kernel_of(h2, g, e2);
            size_t th = F->theta_of(h2, g, e2);
            M.set_block(k2 * dV, k * dV, V.act[F->aut_inv(g, th)]);
        }
        X.res[{h2, h, c}] = M;
    }
    return X;
}

FunctorRep build_chi(const RepFamilyPtr& F, size_t g, const OutModule& V)
{
    V.validate(*F, g);
    FunctorRep X = FunctorRep::zero(F);
    X.dim[g] = V.dim;
    if (F->tracked() && V.dim)
        for (size_t a = 0; a < F->aut_count(g); ++a) X.res[{g, g, a}] = V.act[F->aut_inv(g, a)];
    return X;
}

FunctorRep unit_rep(const RepFamilyPtr& F)
{
    FunctorRep X = FunctorRep::zero(F);
    X.dim.assign(F->size(), 1);
    for (auto& [h, g, e] : all_epis(*F)) X.res[{h, g, e}] = QMatrix::identity(1);
    return X;
}

std::vector<QMatrix> map_from_eGV(const RepFamilyPtr& F, size_t g, const OutModule& V, const FunctorRep& X,
                                  const QMatrix& f)
{
    if (!F->tracked()) throw Error("unsupported", "maps out of e_{G,V} need tracked morphisms");
    if (f.rows() != X.dim[g] || f.cols() != V.dim) throw Error("shape-mismatch", "f: V -> X(G) has the wrong shape");
    size_t m = F->aut_count(g);
    QMatrix avg(f.rows(), f.cols());
    for (size_t a = 0; a < m; ++a) avg = avg + X.along(g, g, a) * f * V.act[a];
    avg = avg.scaled(mpq_class(1, static_cast<unsigned long>(m)));
    std::vector<QMatrix> out;
    for (size_t h = 0; h < F->size(); ++h) {
        size_t kc = F->kernel_count(h, g);
        QMatrix M(X.dim[h], kc * V.dim);
        for (size_t k = 0; k < kc; ++k) M.set_block(0, k * V.dim, X.along(h, g, F->rep_epi(h, g, k)) * avg);
        out.push_back(M);
    }
    return out;
}

std::vector<QMatrix> augmentation(const RepFamilyPtr& F, size_t g)
{
    std::vector<QMatrix> out;
    for (size_t h = 0; h < F->size(); ++h) out.push_back(QMatrix::ones_row(F->kernel_count(h, g)));
    return out;
}

// ---------------- complexes ----------------

FunctorComplex FunctorComplex::zero(RepFamilyPtr F)
{
    FunctorComplex C;
    C.F = std::move(F);
    return C;
}

FunctorComplex FunctorComplex::concentrated(const FunctorRep& X, int degree)
{
    FunctorComplex C;
    C.F = X.F;
    C.lo = degree;
    C.terms = {X};
    C.d = {{}};
    return C;
}

size_t FunctorComplex::dim(int n, size_t h) const
{
    return has(n) ? terms[n - lo].dim[h] : 0;
}

QMatrix FunctorComplex::diff(int n, size_t h) const
{
    if (has(n) && has(n - 1)) return d[n - lo][h];
    return QMatrix(dim(n - 1, h), dim(n, h));
}

static QMatrix term_along(const FunctorComplex& C, int n, size_t h, size_t g, size_t e)
{
    if (C.has(n)) return C.terms[n - C.lo].along(h, g, e);
    return QMatrix(0, 0);
}

size_t FunctorComplex::max_member_dim() const
{
    size_t m = 0;
    for (size_t h = 0; h < F->size(); ++h) {
        size_t s = 0;
        for (int n = lo; n <= hi(); ++n) s += dim(n, h);
        m = std::max(m, s);
    }
    return m;
}

void FunctorComplex::validate() const
{
    if (d.size() != terms.size()) throw Error("invalid-complex", "one differential slot per term expected");
    for (int n = lo + 1; n <= hi(); ++n)
        for (size_t h = 0; h < F->size(); ++h) {
            auto D = diff(n, h);
            if (D.rows() != dim(n - 1, h) || D.cols() != dim(n, h))
                throw Error("invalid-complex", "differential has the wrong shape");
            if (n - 1 > lo && !(diff(n - 1, h) * D).is_zero()) throw Error("invalid-complex", "d o d is not zero");
        }
    for (auto& [h, g, e] : all_epis(*F))
        for (int n = lo + 1; n <= hi(); ++n) {
            if (dim(n, g) + dim(n - 1, g) == 0 && dim(n, h) + dim(n - 1, h) == 0) continue;
            auto lhs = diff(n, h) * term_along(*this, n, h, g, e);
            auto rhs = term_along(*this, n - 1, h, g, e) * diff(n, g);
            if (!(lhs == rhs)) throw Error("naturality-violation", "differential is not natural");
        }
}

QMatrix ChainMap::at(const FunctorComplex& X, const FunctorComplex& Y, int n, size_t h) const
{
    auto it = f.find(n);
    if (it != f.end() && h < it->second.size()) return it->second[h];
    return QMatrix(Y.dim(n, h), X.dim(n, h));
}

void validate_chain_map(const FunctorComplex& X, const FunctorComplex& Y, const ChainMap& f)
{
    int lo = std::min(X.lo, Y.lo), hi = std::max(X.hi(), Y.hi());
    for (int n = lo; n <= hi; ++n)
        for (size_t h = 0; h < X.F->size(); ++h) {
            auto M = f.at(X, Y, n, h);
            if (M.rows() != Y.dim(n, h) || M.cols() != X.dim(n, h))
                throw Error("invalid-chain-map", "component has the wrong shape");
            if (!(Y.diff(n, h) * M == f.at(X, Y, n - 1, h) * X.diff(n, h)))
                throw Error("invalid-chain-map", "map does not commute with the differentials");
        }
    for (auto& [h, g, e] : all_epis(*X.F))
        for (int n = lo; n <= hi; ++n) {
            if (X.dim(n, g) + Y.dim(n, h) == 0 && X.dim(n, h) + Y.dim(n, g) == 0) continue;
            QMatrix Ye = Y.has(n) ? Y.terms[n - Y.lo].along(h, g, e) : QMatrix(0, 0);
            QMatrix Xe = X.has(n) ? X.terms[n - X.lo].along(h, g, e) : QMatrix(0, 0);
            if (!Y.has(n)) Ye = QMatrix(0, 0);
            auto lhs = (Y.has(n) ? Ye : QMatrix(Y.dim(n, h), Y.dim(n, g))) * f.at(X, Y, n, g);
            auto rhs = f.at(X, Y, n, h) * (X.has(n) ? Xe : QMatrix(X.dim(n, h), X.dim(n, g)));
            if (!(lhs == rhs)) throw Error("naturality-violation", "chain map is not natural");
        }
}

static QMatrix block_diag(const QMatrix& a, const QMatrix& b)
{
    QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

static FunctorRep direct_sum(const FunctorRep& A, const FunctorRep& B)
{
    FunctorRep X = FunctorRep::zero(A.F);
    for (size_t h = 0; h < X.dim.size(); ++h) X.dim[h] = A.dim[h] + B.dim[h];
    for (auto& [h, g, e] : all_epis(*A.F))
        if (X.dim[h] && X.dim[g]) X.res[{h, g, e}] = block_diag(A.along(h, g, e), B.along(h, g, e));
    return X;
}

static FunctorRep rep_or_zero(const FunctorComplex& C, int n)
{
    return C.has(n) ? C.terms[n - C.lo] : FunctorRep::zero(C.F);
}

static void require_same(const FunctorComplex& X, const FunctorComplex& Y)
{
    if (X.F != Y.F) throw Error("cross-family", "complexes over different families");
}

static bool empty(const FunctorComplex& X)
{
    return X.terms.empty();
}

FunctorComplex sum(const FunctorComplex& X, const FunctorComplex& Y)
{
    require_same(X, Y);
    if (empty(X)) return Y;
    if (empty(Y)) return X;
    FunctorComplex C = FunctorComplex::zero(X.F);
    C.lo = std::min(X.lo, Y.lo);
    int hi = std::max(X.hi(), Y.hi());
    for (int n = C.lo; n <= hi; ++n) {
        C.terms.push_back(direct_sum(rep_or_zero(X, n), rep_or_zero(Y, n)));
        std::vector<QMatrix> dn;
        if (n > C.lo)
            for (size_t h = 0; h < X.F->size(); ++h) dn.push_back(block_diag(X.diff(n, h), Y.diff(n, h)));
        C.d.push_back(dn);
    }
    return C;
}

FunctorComplex shift(const FunctorComplex& X, int k)
{
    FunctorComplex C = X;
    C.lo += k;
    if (k % 2 != 0)
        for (auto& dn : C.d)
            for (auto& M : dn) M = M.scaled(-1);
    return C;
}

FunctorComplex tensor(const FunctorComplex& X, const FunctorComplex& Y)
{
    require_same(X, Y);
    if (empty(X) || empty(Y)) return FunctorComplex::zero(X.F);
    auto& F = X.F;
    size_t nm = F->size();
    FunctorComplex C = FunctorComplex::zero(F);
    C.lo = X.lo + Y.lo;
    int hi = X.hi() + Y.hi();
    auto epis = all_epis(*F);
    // block offsets of (i, n-i) inside degree n at member h
    auto offsets = [&](int n, size_t h) {
        std::map<int, size_t> off;
        size_t at = 0;
        for (int i = X.lo; i <= X.hi(); ++i) {
            int j = n - i;
            if (!Y.has(j)) continue;
            off[i] = at;
            at += X.dim(i, h) * Y.dim(j, h);
        }
        off[INT32_MAX] = at;
        return off;
    };
    for (int n = C.lo; n <= hi; ++n) {
        FunctorRep T = FunctorRep::zero(F);
        std::vector<std::map<int, size_t>> off(nm);
        for (size_t h = 0; h < nm; ++h) {
            off[h] = offsets(n, h);
            T.dim[h] = off[h][INT32_MAX];
        }
        for (auto& [h, g, e] : epis) {
            if (!T.dim[h] || !T.dim[g]) continue;
            QMatrix M(T.dim[h], T.dim[g]);
            for (auto& [i, o] : off[h]) {
                if (i == INT32_MAX) continue;
                int j = n - i;
                auto K = QMatrix::kron(X.terms[i - X.lo].along(h, g, e), Y.terms[j - Y.lo].along(h, g, e));
                M.set_block(o, off[g].at(i), K);
            }
            T.res[{h, g, e}] = M;
        }
        C.terms.push_back(T);
        std::vector<QMatrix> dn;
        if (n > C.lo) {
            for (size_t h = 0; h < nm; ++h) {
                auto src = off[h];
                auto tgt = offsets(n - 1, h);
                QMatrix D(tgt[INT32_MAX], src[INT32_MAX]);
                for (auto& [i, o] : src) {
                    if (i == INT32_MAX) continue;
                    int j = n - i;
                    if (X.has(i - 1) && tgt.count(i - 1))
                        D.set_block(tgt[i - 1], o, QMatrix::kron(X.diff(i, h), QMatrix::identity(Y.dim(j, h))));
                    if (Y.has(j - 1) && tgt.count(i)) {
                        auto K = QMatrix::kron(QMatrix::identity(X.dim(i, h)), Y.diff(j, h));
                        if (i % 2 != 0) K = K.scaled(-1);
                        D.set_block(tgt[i], o, K);
                    }
                }
                dn.push_back(D);
            }
        }
        C.d.push_back(dn);
    }
    return C;
}

FunctorComplex cone(const FunctorComplex& X, const FunctorComplex& Y, const ChainMap& f)
{
    require_same(X, Y);
    validate_chain_map(X, Y, f);
    if (empty(X)) return Y;
    FunctorComplex C = FunctorComplex::zero(X.F);
    C.lo = empty(Y) ? X.lo + 1 : std::min(X.lo + 1, Y.lo);
    int hi = empty(Y) ? X.hi() + 1 : std::max(X.hi() + 1, Y.hi());
    for (int n = C.lo; n <= hi; ++n) {
        C.terms.push_back(direct_sum(rep_or_zero(X, n - 1), rep_or_zero(Y, n)));
        std::vector<QMatrix> dn;
        if (n > C.lo)
            for (size_t h = 0; h < X.F->size(); ++h) {
                size_t xs = X.dim(n - 1, h), ys = Y.dim(n, h), xt = X.dim(n - 2, h), yt = Y.dim(n - 1, h);
                QMatrix D(xt + yt, xs + ys);
                D.set_block(0, 0, X.diff(n - 1, h).scaled(-1));
                D.set_block(xt, 0, f.at(X, Y, n - 1, h));
                D.set_block(xt, xs, Y.diff(n, h));
                dn.push_back(D);
            }
        C.d.push_back(dn);
    }
    return C;
}

FunctorComplex quotient_upset(const FunctorComplex& X, const std::set<size_t>& W)
{
    for (size_t h : W)
        for (size_t h2 = 0; h2 < X.F->size(); ++h2)
            if (X.F->epi(h2, h) && !W.count(h2)) throw Error("invalid-spec", "quotient set is not up-closed");
    FunctorComplex C = X;
    for (auto& T : C.terms) {
        for (size_t h : W) T.dim[h] = 0;
        for (auto it = T.res.begin(); it != T.res.end();) {
            if (W.count((*it).first[0]) || W.count((*it).first[1])) it = T.res.erase(it);
            else ++it;
        }
    }
    for (auto& dn : C.d)
        for (size_t h : W)
            if (h < dn.size()) dn[h] = QMatrix(0, 0);
    return C;
}

std::vector<GradedDims> homology(const FunctorComplex& X)
{
    std::vector<GradedDims> out(X.F->size());
    for (size_t h = 0; h < X.F->size(); ++h)
        for (int n = X.lo; n <= X.hi(); ++n) {
            size_t dn = X.dim(n, h);
            if (!dn) continue;
            size_t r_out = X.diff(n, h).rank();
            size_t r_in = X.diff(n + 1, h).rank();
            size_t hn = dn - r_out - r_in;
            if (hn) out[h][n] = hn;
        }
    return out;
}

std::set<size_t> hsupp_oracle(const FunctorComplex& X)
{
    std::set<size_t> S;
    auto H = homology(X);
    for (size_t h = 0; h < H.size(); ++h)
        if (!H[h].empty()) S.insert(h);
    return S;
}

long euler_characteristic(const FunctorComplex& X, size_t h)
{
    long e = 0;
    for (int n = X.lo; n <= X.hi(); ++n) e += (n % 2 == 0 ? 1 : -1) * static_cast<long>(X.dim(n, h));
    return e;
}

// ---------------- expressions ----------------

static FunctorComplex aug_cone_complex(const RepFamilyPtr& F, size_t g)
{
    auto eG = FunctorComplex::concentrated(build_eGV(F, g, OutModule::trivial(*F, g)), 0);
    auto one = FunctorComplex::concentrated(unit_rep(F), 0);
    ChainMap f;
    f.f[0] = augmentation(F, g);
    return cone(eG, one, f);
}

FunctorComplex realize(const RepFamilyPtr& F, const ObjectExpr& X)
{
    // expressions may be parsed against the ambient family, so only membership is checked here
    for (auto& m : X.leaves()) F->index_of(m);
    using K = ObjectExpr::Kind;
    switch (X.kind()) {
    case K::zero: return FunctorComplex::zero(F);
    case K::unit: return FunctorComplex::concentrated(unit_rep(F), 0);
    case K::gen: {
        size_t g = F->index_of(X.group());
        auto V = F->tracked() ? OutModule::regular(*F, g) : OutModule::trivial(*F, g);
        return FunctorComplex::concentrated(build_eGV(F, g, V), 0);
    }
    case K::gen_twisted: {
        size_t g = F->index_of(X.group());
        return FunctorComplex::concentrated(build_eGV(F, g, OutModule::trivial(*F, g, X.dim())), 0);
    }
    case K::chi: {
        size_t g = F->index_of(X.group());
        return FunctorComplex::concentrated(build_chi(F, g, OutModule::trivial(*F, g)), 0);
    }
    case K::aug_cone: return aug_cone_complex(F, F->index_of(X.group()));
    case K::shift: return shift(realize(F, *X.lhs()), X.shift_amount());
    case K::sum: return sum(realize(F, *X.lhs()), realize(F, *X.rhs()));
    case K::tensor: return tensor(realize(F, *X.lhs()), realize(F, *X.rhs()));
    }
    return FunctorComplex::zero(F);
}

std::vector<GradedDims> expr_homology(const RepFamilyPtr& F, const ObjectExpr& X, HomologyMemo* memo)
{
    using K = ObjectExpr::Kind;
    size_t n = F->size();
    switch (X.kind()) {
    case K::shift: {
        auto H = expr_homology(F, *X.lhs(), memo);
        std::vector<GradedDims> out(n);
        for (size_t h = 0; h < n; ++h)
            for (auto& [d, v] : H[h]) out[h][d + X.shift_amount()] = v;
        return out;
    }
    case K::sum: {
        auto A = expr_homology(F, *X.lhs(), memo);
        auto B = expr_homology(F, *X.rhs(), memo);
        for (size_t h = 0; h < n; ++h)
            for (auto& [d, v] : B[h]) A[h][d] += v;
        return A;
    }
    case K::tensor: {
        auto A = expr_homology(F, *X.lhs(), memo);
        auto B = expr_homology(F, *X.rhs(), memo);
        std::vector<GradedDims> out(n);
        for (size_t h = 0; h < n; ++h)
            for (auto& [i, a] : A[h])
                for (auto& [j, b] : B[h]) out[h][i + j] += a * b;
        return out;
    }
    default: {
        if (!memo) return homology(realize(F, X));
        auto key = X.str();
        auto it = memo->find(key);
        if (it == memo->end()) it = memo->emplace(key, homology(realize(F, X))).first;
        return it->second;
    }
    }
}

// ---------------- chi decomposition ----------------

namespace {

struct HomologyAction {
    QMatrix section;            // columns: cycles representing a basis of homology
    std::vector<QMatrix> act;   // induced map of X(theta) on homology, per automorphism
};

HomologyAction homology_with_action(const FunctorComplex& X, int n, size_t g)
{
    auto& F = *X.F;
    size_t dn = X.dim(n, g);
    auto Z = X.diff(n, g).kernel();
    QMatrix B = X.diff(n + 1, g).column_basis();
    // extend a basis of the boundaries by cycles
    std::vector<QMatrix> chosen;
    QMatrix span = B;
    for (auto& z : Z) {
        QMatrix trial = QMatrix::hcat({span, z}, dn);
        if (trial.rank() > span.cols()) {
            span = trial;
            chosen.push_back(z);
        }
    }
    HomologyAction out;
    out.section = QMatrix::hcat(chosen, dn);
    size_t hb = chosen.size();
    size_t nb = B.cols();
    for (size_t a = 0; a < F.aut_count(g); ++a) {
        QMatrix img = X.terms[n - X.lo].along(g, g, a) * out.section;
        QMatrix coeff = span.solve(img);
        out.act.push_back(coeff.block(nb, 0, hb, hb));
    }
    return out;
}

} // namespace

PeelTrace chi_decompose(const FunctorComplex& X0)
{
    auto& F = X0.F;
    if (!F->tracked()) throw Error("unsupported", "chi decomposition needs tracked morphisms");
    X0.validate();
    PeelTrace T;
    FunctorComplex cur = X0;
    auto S = hsupp_oracle(cur);
    size_t guard = F->size() + 1;
    while (!S.empty()) {
        if (guard-- == 0) {
            T.valid = false;
            T.problem = "support did not shrink";
            return T;
        }
        size_t g = SIZE_MAX;
        for (size_t c : S) {
            bool maximal = true;
            for (size_t h : S)
                if (h != c && F->epi(h, c)) maximal = false;
            if (maximal) {
                g = c;
                break;
            }
        }
        std::set<size_t> W;
        for (size_t h = 0; h < F->size(); ++h)
            if (h != g && F->epi(h, g)) W.insert(h);
        auto Q = quotient_upset(cur, W);

        // V = H(X(G)) with its Out(G) action and an equivariant choice of cycles
        FunctorComplex chi = FunctorComplex::zero(F);
        chi.lo = cur.lo;
        ChainMap f;
        GradedDims vd;
        size_t m = F->aut_count(g);
        for (int n = cur.lo; n <= cur.hi(); ++n) {
            auto HA = homology_with_action(Q, n, g);
            size_t hn = HA.section.cols();
            FunctorRep R = FunctorRep::zero(F);
            R.dim[g] = hn;
            std::vector<QMatrix> fn;
            for (size_t h = 0; h < F->size(); ++h) fn.push_back(QMatrix(Q.dim(n, h), h == g ? hn : 0));
            if (hn) {
                vd[n] = hn;
                for (size_t a = 0; a < m; ++a) R.res[{g, g, a}] = HA.act[a];
                QMatrix avg(Q.dim(n, g), hn);
                for (size_t a = 0; a < m; ++a)
                    avg = avg + Q.terms[n - Q.lo].along(g, g, a) * HA.section * HA.act[a].inverse();
                fn[g] = avg.scaled(mpq_class(1, static_cast<unsigned long>(m)));
            }
            chi.terms.push_back(R);
            std::vector<QMatrix> dn;
            if (n > chi.lo)
                for (size_t h = 0; h < F->size(); ++h) dn.push_back(QMatrix(h == g ? vd.count(n - 1) ? vd[n - 1] : 0 : 0, h == g ? hn : 0));
            chi.d.push_back(dn);
            f.f[n] = fn;
        }
        PeelStep step{g, vd, S, {}};
        try {
            chi.validate();
            auto C = cone(chi, Q, f);
            C.validate();
            cur = C;
        } catch (const Error& e) {
            T.valid = false;
            T.problem = e.what();
            T.steps.push_back(step);
            return T;
        }
        auto S2 = hsupp_oracle(cur);
        step.after = S2;
        T.steps.push_back(step);
        auto expect = S;
        expect.erase(g);
        if (S2 != expect) {
            T.valid = false;
            T.problem = "support did not shrink by exactly the peeled member";
            return T;
        }
        S = S2;
    }
    return T;
}

// ---------------- generator identities ----------------

RetractionReport verify_retraction(const RepFamilyPtr& F, size_t g, const OutModule& U, const OutModule& V)
{
    RetractionReport rep;
    U.validate(*F, g);
    V.validate(*F, g);
    OutModule UV = OutModule::tensor(U, V);
    auto eU = build_eGV(F, g, U), eV = build_eGV(F, g, V), eUV = build_eGV(F, g, UV);
    size_t dU = U.dim, dV = V.dim, dUV = UV.dim;
    size_t n = F->size();
    std::vector<QMatrix> I(n), P(n);
    bool wd = true, ident = true;
    for (size_t h = 0; h < n; ++h) {
        size_t kc = F->kernel_count(h, g);
        size_t mU = eU.dim[h], mV = eV.dim[h], mUV = eUV.dim[h];
        I[h] = QMatrix(mU * mV, mUV);
        P[h] = QMatrix(mUV, mU * mV);
        if (!kc) continue;
        auto& E = F->epis(h, g);
        // q: free span of ([alpha], basis vector) -> coordinates of e_{G,W}(h)
        auto q = [&](const OutModule& W, size_t e, const QMatrix& w) {
            QMatrix out(kc * W.dim, 1);
            size_t th = F->theta_of(h, g, e);
            out.set_block(F->kernel_of(h, g, e) * W.dim, 0, W.act[F->aut_inv(g, th)] * w);
            return out;
        };
        auto unit_vec = [](size_t d, size_t i) {
            QMatrix v(d, 1);
            v(i, 0) = 1;
            return v;
        };
        // p on the free span: [alpha] u (x) [beta] v -> [alpha] (u (x) theta^-1 v) when beta = theta alpha
        auto p_free = [&](size_t ea, size_t a, size_t eb, size_t b) {
            if (F->kernel_of(h, g, ea) != F->kernel_of(h, g, eb)) return QMatrix(mUV, 1);
            size_t theta = F->aut_mul(g, F->theta_of(h, g, eb), F->aut_inv(g, F->theta_of(h, g, ea)));
            QMatrix v = V.act[F->aut_inv(g, theta)] * unit_vec(dV, b);
            return q(UV, ea, QMatrix::kron(unit_vec(dU, a), v));
        };
        for (size_t k1 = 0; k1 < kc; ++k1)
            for (size_t a = 0; a < dU; ++a)
                for (size_t k2 = 0; k2 < kc; ++k2)
                    for (size_t b = 0; b < dV; ++b)
                        P[h].set_block(0, (k1 * dU + a) * mV + k2 * dV + b,
                                       p_free(F->rep_epi(h, g, k1), a, F->rep_epi(h, g, k2), b));
        for (size_t k = 0; k < kc; ++k)
            for (size_t a = 0; a < dU; ++a)
                for (size_t b = 0; b < dV; ++b) I[h]((k * dU + a) * mV + k * dV + b, k * dUV + a * dV + b) = 1;
        // both maps must factor through the quotients of the free spans
        for (size_t ea = 0; ea < E.size(); ++ea)
            for (size_t a = 0; a < dU; ++a) {
                QMatrix qa = q(U, ea, unit_vec(dU, a));
                for (size_t b = 0; b < dV; ++b) {
                    QMatrix qb = q(V, ea, unit_vec(dV, b));
                    QMatrix iu = q(UV, ea, unit_vec(dUV, a * dV + b));
                    if (!(I[h] * iu == QMatrix::kron(qa, qb))) wd = false;
                    for (size_t eb = 0; eb < E.size(); ++eb) {
                        QMatrix qb2 = q(V, eb, unit_vec(dV, b));
                        if (!(P[h] * QMatrix::kron(qa, qb2) == p_free(ea, a, eb, b))) wd = false;
                    }
                }
            }
        if (!(P[h] * I[h] == QMatrix::identity(mUV))) ident = false;
    }
    bool nat = true;
    for (auto& [h2, h, c] : all_epis(*F)) {
        QMatrix T = QMatrix::kron(eU.along(h2, h, c), eV.along(h2, h, c));
        if (!(P[h2] * T == eUV.along(h2, h, c) * P[h])) nat = false;
        if (!(I[h2] * eUV.along(h2, h, c) == T * I[h])) nat = false;
    }
    rep.well_defined = wd;
    rep.natural = nat;
    rep.identity = ident;
    return rep;
}

bool verify_augmentation_fiber(const RepFamilyPtr& F, size_t g, const OutModule& V)
{
    auto e = FunctorComplex::concentrated(build_eGV(F, g, V), 0);
    auto chi = FunctorComplex::concentrated(build_chi(F, g, V), 0);
    ChainMap f;
    std::vector<QMatrix> f0;
    for (size_t h = 0; h < F->size(); ++h)
        f0.push_back(h == g ? QMatrix::identity(V.dim) : QMatrix(chi.dim(0, h), e.dim(0, h)));
    f.f[0] = f0;
    auto C = cone(e, chi, f);
    C.validate();
    for (size_t h : hsupp_oracle(C))
        if (h == g || !F->epi(h, g)) return false;
    return true;
}

// ---------------- JSON fixtures ----------------

nlohmann::json complex_to_json(const FunctorComplex& X)
{
    nlohmann::json j;
    auto fam = nlohmann::json::array();
    for (size_t h = 0; h < X.F->size(); ++h) fam.push_back(X.F->label(h));
    j["family"] = fam;
    j["lo"] = X.lo;
    auto terms = nlohmann::json::array();
    for (auto& T : X.terms) {
        nlohmann::json t;
        t["dims"] = T.dim;
        auto rs = nlohmann::json::array();
        for (auto& [key, M] : T.res)
            rs.push_back({{"from", key[0]}, {"to", key[1]}, {"epi", key[2]}, {"matrix", M.to_json()}});
        t["restrictions"] = rs;
        terms.push_back(t);
    }
    j["terms"] = terms;
    auto ds = nlohmann::json::array();
    for (size_t i = 1; i < X.d.size(); ++i) {
        auto per = nlohmann::json::array();
        for (auto& M : X.d[i]) per.push_back(M.to_json());
        ds.push_back(per);
    }
    j["differentials"] = ds;
    return j;
}

FunctorComplex complex_from_json(const RepFamilyPtr& F, const nlohmann::json& j)
{
    for (auto& k : {"family", "lo", "terms", "differentials"})
        if (!j.contains(k)) throw Error("invalid-spec", std::string("complex fixture needs '") + k + "'");
    for (auto& [k, v] : j.items())
        if (k != "family" && k != "lo" && k != "terms" && k != "differentials")
            throw Error("invalid-spec", "unknown field '" + k + "' in complex fixture");
    auto fam = j["family"].get<std::vector<std::string>>();
    if (fam.size() != F->size()) throw Error("invalid-spec", "fixture family does not match");
    for (size_t h = 0; h < fam.size(); ++h)
        if (fam[h] != F->label(h)) throw Error("invalid-spec", "fixture family does not match at " + fam[h]);
    FunctorComplex C = FunctorComplex::zero(F);
    C.lo = j["lo"].get<int>();
    for (auto& t : j["terms"]) {
        FunctorRep R = FunctorRep::zero(F);
        R.dim = t.at("dims").get<std::vector<size_t>>();
        if (R.dim.size() != F->size()) throw Error("invalid-spec", "one dimension per member expected");
        for (auto& r : t.at("restrictions")) {
            size_t h = r.at("from").get<size_t>(), g = r.at("to").get<size_t>(), e = r.at("epi").get<size_t>();
            if (h >= F->size() || g >= F->size() || !F->epi(h, g) || e >= F->epis(h, g).size())
                throw Error("invalid-spec", "restriction along an unknown epi");
            R.res[{h, g, e}] = QMatrix::from_json(r.at("matrix"), R.dim[h], R.dim[g]);
        }
        C.terms.push_back(R);
    }
    auto& ds = j["differentials"];
    if (ds.size() + 1 != C.terms.size() && !(C.terms.empty() && ds.empty()))
        throw Error("invalid-spec", "one differential per adjacent pair of terms expected");
    if (!C.terms.empty()) C.d.push_back({});
    for (size_t i = 0; i < ds.size(); ++i) {
        std::vector<QMatrix> per;
        for (size_t h = 0; h < F->size(); ++h)
            per.push_back(QMatrix::from_json(ds[i].at(h), C.terms[i].dim[h], C.terms[i + 1].dim[h]));
        C.d.push_back(per);
    }
    for (auto& T : C.terms) T.validate();
    C.validate();
    return C;
}

} // namespace ttgeo
