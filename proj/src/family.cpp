#include "ttgeo/family.hpp"

#include <algorithm>
#include <set>

namespace ttgeo {

std::string member_str(const Member& m)
{
    if (auto g = std::get_if<FinAbGroup>(&m)) return g->str();
    return std::get<TableObject>(m).label;
}

const FinAbGroup& as_group(const Member& m)
{
    if (auto g = std::get_if<FinAbGroup>(&m)) return *g;
    throw Error("unsupported-group", "table object '" + std::get<TableObject>(m).label + "' is not an abelian group");
}

std::string kind_name(FamilyKind k)
{
    switch (k) {
    case FamilyKind::elementary_abelian: return "elementary_abelian";
    case FamilyKind::cyclic_p: return "cyclic_p";
    case FamilyKind::cyclic_prime_order: return "cyclic_prime_order";
    case FamilyKind::cyclic_all: return "cyclic_all";
    case FamilyKind::abelian_p_rank: return "abelian_p_rank";
    case FamilyKind::abelian_rank: return "abelian_rank";
    case FamilyKind::abelian_p_exponent: return "abelian_p_exponent";
    case FamilyKind::abelian_p: return "abelian_p";
    case FamilyKind::extensional: return "extensional";
    }
    return "?";
}

std::string predicate_name(Predicate p)
{
    switch (p) {
    case Predicate::widely_closed: return "widely_closed";
    case Predicate::unital: return "unital";
    case Predicate::downward_closed: return "downward_closed";
    case Predicate::multiplicative_global: return "multiplicative_global";
    case Predicate::r_submultiplicative: return "r_submultiplicative";
    }
    return "?";
}

Predicate parse_predicate(const std::string& s)
{
    for (auto p : {Predicate::widely_closed, Predicate::unital, Predicate::downward_closed,
                   Predicate::multiplicative_global, Predicate::r_submultiplicative})
        if (predicate_name(p) == s) return p;
    throw Error("invalid-spec", "unknown predicate '" + s + "'");
}

std::string status_name(PredicateResult::Status s)
{
    switch (s) {
    case PredicateResult::Status::certified: return "certified";
    case PredicateResult::Status::refuted: return "refuted";
    case PredicateResult::Status::unknown_at_cap: return "unknown-at-cap";
    }
    return "?";
}

// ---------------- extensional tables ----------------

size_t ExtensionalTable::at(const std::string& label) const
{
    auto it = index.find(label);
    if (it == index.end()) throw Error("membership-failure", "no object '" + label + "' in table");
    return it->second;
}

static std::optional<FinAbGroup> try_group(const std::string& label)
{
    try {
        return FinAbGroup::parse(label);
    } catch (const Error&) {
    }
    // "C<n>" shorthand
    if (label.size() > 1 && label[0] == 'C' &&
        std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return FinAbGroup::cyclic(std::stoull(label.substr(1)));
    return std::nullopt;
}

std::shared_ptr<const ExtensionalTable> ExtensionalTable::build(
    std::vector<std::string> objects, const std::vector<std::pair<std::string, std::string>>& epis,
    std::map<std::pair<std::string, std::string>, u64> orbit_counts,
    std::map<std::string, std::vector<std::string>> quotients)
{
    auto t = std::make_shared<ExtensionalTable>();
    t->objects = std::move(objects);
    size_t n = t->objects.size();
    if (n == 0) throw Error("invalid-preorder", "extensional table has no objects");
    for (size_t i = 0; i < n; ++i) {
        if (!t->index.emplace(t->objects[i], i).second)
            throw Error("invalid-preorder", "duplicate object '" + t->objects[i] + "'");
        t->groups.push_back(try_group(t->objects[i]));
        if (t->groups.back() && t->groups.back()->trivial()) t->trivial = i;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (t->groups[i] && t->groups[j] && *t->groups[i] == *t->groups[j])
                throw Error("invalid-preorder", "objects '" + t->objects[i] + "' and '" + t->objects[j] +
                                                    "' are isomorphic");
    t->epi.assign(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i) t->epi[i][i] = 1;
    for (auto& [a, b] : epis) {
        auto ia = t->index.find(a), ib = t->index.find(b);
        if (ia == t->index.end() || ib == t->index.end())
            throw Error("invalid-preorder", "epi mentions unknown object '" + (ia == t->index.end() ? a : b) + "'");
        t->epi[ia->second][ib->second] = 1;
    }
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            if (a != b && t->epi[a][b] && t->epi[b][a])
                throw Error("invalid-preorder", "epis both ways between '" + t->objects[a] + "' and '" +
                                                    t->objects[b] + "'");
            for (size_t c = 0; c < n; ++c)
                if (t->epi[a][b] && t->epi[b][c] && !t->epi[a][c])
                    throw Error("invalid-preorder", "not transitive: " + t->objects[a] + " -> " + t->objects[b] +
                                                        " -> " + t->objects[c]);
        }
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            if (t->groups[a] && t->groups[b] && (epi_exists(*t->groups[a], *t->groups[b]) != bool(t->epi[a][b])))
                throw Error("invalid-preorder", "epi table disagrees with group structure for " + t->objects[a] +
                                                    " -> " + t->objects[b]);
    for (auto& [ab, c] : orbit_counts) t->orbit_counts[{t->at(ab.first), t->at(ab.second)}] = c;
    for (auto& [o, qs] : quotients) t->declared_quotients[t->at(o)] = qs;
    return t;
}

std::shared_ptr<const ExtensionalTable> ExtensionalTable::from_groups(const std::vector<FinAbGroup>& groups)
{
    std::vector<FinAbGroup> gs = groups;
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> epis;
    for (auto& g : gs) labels.push_back(g.str());
    for (auto& a : gs)
        for (auto& b : gs)
            if (!(a == b) && epi_exists(a, b)) epis.emplace_back(a.str(), b.str());
    return build(labels, epis);
}

// ---------------- JSON ----------------

static FamilyKind parse_kind(const std::string& s)
{
    for (auto k : {FamilyKind::elementary_abelian, FamilyKind::cyclic_p, FamilyKind::cyclic_prime_order,
                   FamilyKind::cyclic_all, FamilyKind::abelian_p_rank, FamilyKind::abelian_rank,
                   FamilyKind::abelian_p_exponent, FamilyKind::abelian_p, FamilyKind::extensional})
        if (kind_name(k) == s) return k;
    throw Error("invalid-spec", "unknown family kind '" + s + "'");
}

FamilySpec FamilySpec::from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw Error("invalid-spec", "family spec must be an object with a string 'kind'");
    FamilySpec s;
    s.kind = parse_kind(j["kind"].get<std::string>());
    std::set<std::string> allowed{"kind"};
    auto need_uint = [&](const char* key) -> u64 {
        allowed.insert(key);
        if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
            throw Error("invalid-spec", std::string("family '") + kind_name(s.kind) + "' needs integer '" + key + "'");
        return j[key].get<u64>();
    };
    switch (s.kind) {
    case FamilyKind::elementary_abelian:
    case FamilyKind::cyclic_p:
    case FamilyKind::abelian_p:
        s.p = need_uint("p");
        break;
    case FamilyKind::abelian_p_rank:
        s.p = need_uint("p");
        s.r = static_cast<unsigned>(need_uint("r"));
        break;
    case FamilyKind::abelian_rank:
        s.r = static_cast<unsigned>(need_uint("r"));
        break;
    case FamilyKind::abelian_p_exponent:
        s.p = need_uint("p");
        s.l = static_cast<unsigned>(need_uint("l"));
        break;
    case FamilyKind::cyclic_prime_order:
    case FamilyKind::cyclic_all:
        break;
    case FamilyKind::extensional: {
        allowed.insert({"objects", "epis", "orbit_counts", "quotients"});
        if (!j.contains("objects") || !j["objects"].is_array())
            throw Error("invalid-spec", "extensional family needs an 'objects' array");
        std::vector<std::string> objs;
        for (auto& o : j["objects"]) objs.push_back(o.is_string() ? o.get<std::string>() : o.dump());
        std::vector<std::pair<std::string, std::string>> epis;
        if (j.contains("epis"))
            for (auto& e : j["epis"]) {
                if (!e.is_array() || e.size() != 2) throw Error("invalid-spec", "each epi must be a pair");
                epis.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
            }
        std::map<std::pair<std::string, std::string>, u64> counts;
        if (j.contains("orbit_counts"))
            for (auto& e : j["orbit_counts"]) {
                if (!e.is_array() || e.size() != 3) throw Error("invalid-spec", "orbit count entries are [from,to,n]");
                counts[{e[0].get<std::string>(), e[1].get<std::string>()}] = e[2].get<u64>();
            }
        std::map<std::string, std::vector<std::string>> quots;
        if (j.contains("quotients"))
            for (auto& [k, v] : j["quotients"].items()) quots[k] = v.get<std::vector<std::string>>();
        s.table = ExtensionalTable::build(objs, epis, counts, quots);
        break;
    }
    }
    for (auto& [k, v] : j.items())
        if (!allowed.count(k)) throw Error("invalid-spec", "unknown field '" + k + "' in family spec");
    if (s.p && !is_prime(s.p)) throw Error("invalid-spec", "p must be prime, got " + std::to_string(s.p));
    if ((s.kind == FamilyKind::abelian_p_rank || s.kind == FamilyKind::abelian_rank) && s.r == 0)
        throw Error("invalid-spec", "rank bound must be >= 1");
    return s;
}

nlohmann::json FamilySpec::to_json() const
{
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    switch (kind) {
    case FamilyKind::elementary_abelian:
    case FamilyKind::cyclic_p:
    case FamilyKind::abelian_p: j["p"] = p; break;
    case FamilyKind::abelian_p_rank: j["p"] = p; j["r"] = r; break;
    case FamilyKind::abelian_rank: j["r"] = r; break;
    case FamilyKind::abelian_p_exponent: j["p"] = p; j["l"] = l; break;
    case FamilyKind::cyclic_prime_order:
    case FamilyKind::cyclic_all: break;
    case FamilyKind::extensional: {
        j["objects"] = table->objects;
        auto epis = nlohmann::json::array();
        for (size_t a = 0; a < table->objects.size(); ++a)
            for (size_t b = 0; b < table->objects.size(); ++b)
                if (a != b && table->epi[a][b]) epis.push_back({table->objects[a], table->objects[b]});
        j["epis"] = epis;
        if (!table->orbit_counts.empty()) {
            auto oc = nlohmann::json::array();
            for (auto& [ab, c] : table->orbit_counts)
                oc.push_back({table->objects[ab.first], table->objects[ab.second], c});
            j["orbit_counts"] = oc;
        }
        if (!table->declared_quotients.empty()) {
            nlohmann::json q = nlohmann::json::object();
            for (auto& [o, qs] : table->declared_quotients) q[table->objects[o]] = qs;
            j["quotients"] = q;
        }
        break;
    }
    }
    return j;
}

// ---------------- Family ----------------

static PredicateResult certified(std::string basis)
{
    return {PredicateResult::Status::certified, {}, std::move(basis)};
}

static PredicateResult refuted(std::vector<Member> w, std::string basis)
{
    return {PredicateResult::Status::refuted, std::move(w), std::move(basis)};
}

Family::Family(FamilySpec spec) : spec_(std::move(spec))
{
    u64 p = spec_.p;
    auto C = [](u64 n) -> Member { return FinAbGroup::cyclic(n); };
    auto E = [](u64 q, unsigned r) -> Member { return FinAbGroup::elementary(q, r); };
    const char* global = "every global family is widely closed";
    switch (spec_.kind) {
    case FamilyKind::elementary_abelian:
        shape_ = {true, std::nullopt, 1u, std::nullopt};
        break;
    case FamilyKind::cyclic_p: shape_ = {true, 1u, std::nullopt, std::nullopt}; break;
    case FamilyKind::cyclic_prime_order: shape_ = {false, 1u, 1u, 1u}; break;
    case FamilyKind::cyclic_all: shape_ = {false, 1u, std::nullopt, std::nullopt}; break;
    case FamilyKind::abelian_p_rank: shape_ = {true, spec_.r, std::nullopt, std::nullopt}; break;
    case FamilyKind::abelian_rank: shape_ = {false, spec_.r, std::nullopt, std::nullopt}; break;
    case FamilyKind::abelian_p_exponent: shape_ = {true, std::nullopt, spec_.l, std::nullopt}; break;
    case FamilyKind::abelian_p: shape_ = {true, std::nullopt, std::nullopt, std::nullopt}; break;
    case FamilyKind::extensional: break;
    }
    if (!extensional()) {
        flags_[Predicate::unital] = certified("contains the trivial group");
        flags_[Predicate::downward_closed] = certified("closed under quotients (rank and exponent bounds descend)");
        flags_[Predicate::widely_closed] = certified(global);
        u64 q = single_prime() ? p : 2;
        switch (spec_.kind) {
        case FamilyKind::elementary_abelian:
        case FamilyKind::abelian_p_exponent:
        case FamilyKind::abelian_p:
            flags_[Predicate::multiplicative_global] =
                certified("closed under products, subgroups and quotients");
            flags_[Predicate::r_submultiplicative] =
                spec_.kind == FamilyKind::abelian_p_exponent && spec_.l == 0
                    ? certified("trivial family")
                    : refuted({E(p, 2)}, "r=1: not 1-generated");
            break;
        case FamilyKind::cyclic_prime_order:
            flags_[Predicate::multiplicative_global] = refuted({C(2), C(2), E(2, 2)}, "product leaves the family");
            flags_[Predicate::r_submultiplicative] = refuted({C(2), C(3), C(6)}, "r=1: C_6 <= C_2 x C_3 is cyclic");
            break;
        default: {
            unsigned r = shape_.rank.value_or(1);
            flags_[Predicate::multiplicative_global] =
                refuted({E(q, r), C(q), E(q, r + 1)}, "product exceeds the rank bound");
            flags_[Predicate::r_submultiplicative] =
                certified("r=" + std::to_string(r) + ": groups of p-rank <= r form an r-submultiplicative family");
            break;
        }
        }
    }
}

FamilyPtr Family::make(const FamilySpec& spec)
{
    if (spec.kind != FamilyKind::extensional && spec.kind != FamilyKind::cyclic_prime_order &&
        spec.kind != FamilyKind::cyclic_all && spec.kind != FamilyKind::abelian_rank && !is_prime(spec.p))
        throw Error("invalid-spec", "family needs a prime p");
    if (spec.kind == FamilyKind::extensional && !spec.table) throw Error("invalid-spec", "extensional family needs a table");
    return std::shared_ptr<Family>(new Family(spec));
}

const ExtensionalTable& Family::table() const
{
    if (!spec_.table) throw Error("unsupported", "family is not extensional");
    return *spec_.table;
}

std::string Family::key() const
{
    return spec_.to_json().dump();
}

bool Family::allows_prime(u64 q) const
{
    return single_prime() ? q == spec_.p : is_prime(q);
}

bool Family::contains(const Member& G) const
{
    if (extensional()) {
        auto t = std::get_if<TableObject>(&G);
        if (t) return table().index.count(t->label) > 0;
        auto& g = std::get<FinAbGroup>(G);
        for (auto& og : table().groups)
            if (og && *og == g) return true;
        return false;
    }
    auto g = std::get_if<FinAbGroup>(&G);
    if (!g) throw Error("unsupported-group", "table object passed to an intensional family");
    if (shape_.max_primes && g->parts().size() > *shape_.max_primes) return false;
    for (auto& [q, lam] : g->parts()) {
        if (!allows_prime(q)) return false;
        if (shape_.rank && lam.size() > *shape_.rank) return false;
        if (shape_.exponent && lam.front() > *shape_.exponent) return false;
    }
    return true;
}

void Family::require(const Member& G) const
{
    if (!contains(G)) throw Error("membership-failure", member_str(G) + " is not in family " + key());
}

static size_t table_index(const Family& F, const Member& m)
{
    auto& t = F.table();
    if (auto o = std::get_if<TableObject>(&m)) return t.at(o->label);
    auto& g = std::get<FinAbGroup>(m);
    for (size_t i = 0; i < t.groups.size(); ++i)
        if (t.groups[i] && *t.groups[i] == g) return i;
    throw Error("membership-failure", g.str() + " is not in the table");
}

bool Family::epi(const Member& a, const Member& b) const
{
    if (extensional()) return table().epi[table_index(*this, a)][table_index(*this, b)];
    return epi_exists(as_group(a), as_group(b));
}

bool Family::has_finite_filtration() const
{
    return extensional() || shape_.rank.has_value();
}

unsigned Family::exponent_cap(u64 q, u64 n) const
{
    if (!allows_prime(q) || q > n) return 0;
    unsigned l = floor_log(q, n);
    if (shape_.exponent) l = std::min(l, *shape_.exponent);
    return l;
}

FiltrationStage Family::stage(u64 n) const
{
    if (n == 0) throw Error("invalid-spec", "stage index must be >= 1");
    if (!has_finite_filtration())
        throw Error("no-essentially-finite-filtration", kind_name(kind()) + " has no essentially finite filtration");
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
    }
    FiltrationStage st;
    st.index = n;
    if (extensional()) {
        for (auto& o : table().objects) st.members.push_back(TableObject{o});
    } else {
        std::vector<u64> qs = single_prime() ? std::vector<u64>{spec_.p} : primes_up_to(n);
        std::vector<FinAbGroup> acc{FinAbGroup{}};
        for (u64 q : qs) {
            unsigned l = exponent_cap(q, n);
            if (l == 0) continue;
            auto boxes = partitions_in_box(*shape_.rank, l);
            std::vector<FinAbGroup> next;
            for (auto& base : acc)
                for (auto& lam : boxes) {
                    auto parts = base.parts();
                    if (!lam.empty()) {
                        if (shape_.max_primes && parts.size() >= *shape_.max_primes) continue;
                        parts[q] = lam;
                    }
                    next.push_back(FinAbGroup::from_parts(parts));
                }
            acc = std::move(next);
        }
        std::sort(acc.begin(), acc.end());
        for (auto& g : acc) st.members.push_back(g);
    }
    std::lock_guard<std::mutex> lk(cache_mu_);
    cache_.emplace(n, st);
    return st;
}

Member Family::reflect(u64 n, const Member& G) const
{
    require(G);
    if (n == 0) throw Error("invalid-spec", "stage index must be >= 1");
    if (extensional()) return G;
    FinAbGroup::Parts parts;
    for (auto& [q, lam] : as_group(G).parts()) {
        unsigned l = exponent_cap(q, n);
        Partition mu;
        for (unsigned x : lam) mu.push_back(std::min(x, l));
        parts[q] = mu;
    }
    return FinAbGroup::from_parts(parts);
}

u64 Family::least_stage(const Member& G) const
{
    require(G);
    if (extensional()) return 1;
    u64 n = 1;
    for (auto& [q, lam] : as_group(G).parts()) n = std::max(n, ipow(q, lam.front()));
    return n;
}

std::vector<Member> Family::members_up_to(u64 order_cap) const
{
    std::vector<Member> out;
    if (extensional()) {
        for (auto& o : table().objects) out.push_back(TableObject{o});
        return out;
    }
    auto all = single_prime() ? p_groups_up_to(spec_.p, order_cap) : abelian_groups_up_to(order_cap);
    for (auto& g : all)
        if (contains(g)) out.push_back(g);
    return out;
}

bool Family::unital() const
{
    return extensional() ? table().trivial.has_value() : true;
}

const PredicateResult& Family::flag(Predicate p) const
{
    if (!extensional()) return flags_.at(p);
    std::lock_guard<std::recursive_mutex> lk(flags_mu_);
    auto it = flags_.find(p);
    if (it != flags_.end()) return it->second;
    auto r = check_predicate(*this, p, 0, 1);
    return flags_[p] = r;
}

const std::map<Predicate, PredicateResult>& Family::flags() const
{
    if (extensional())
        for (auto pred : {Predicate::unital, Predicate::downward_closed, Predicate::widely_closed,
                          Predicate::multiplicative_global, Predicate::r_submultiplicative})
            flag(pred);
    return flags_;
}

static std::vector<char> standard_kernel(const Family& F, const ElementTable& T, u64 n)
{
    std::vector<char> K(T.order(), 1);
    for (auto& N : oracle_subgroups(T)) {
        size_t q = T.order() / ElementTable::mask_size(N);
        if (q > n) continue;
        if (!F.contains(T.quotient_type(N))) continue;
        for (size_t x = 0; x < T.order(); ++x) K[x] = K[x] && N[x];
    }
    return K;
}

std::vector<Member> Family::oracle_stage_members(u64 n, u64 order_cap) const
{
    if (extensional()) return stage(n).members;
    std::vector<Member> out;
    for (auto& m : members_up_to(order_cap)) {
        ElementTable T(as_group(m));
        if (ElementTable::mask_size(standard_kernel(*this, T, n)) == 1) out.push_back(m);
    }
    return out;
}

Member Family::oracle_reflect(u64 n, const Member& G) const
{
    require(G);
    if (extensional()) return G;
    ElementTable T(as_group(G));
    return T.quotient_type(standard_kernel(*this, T, n));
}

bool Family::has_orbit_counts(const Member& G) const
{
    if (!extensional()) return true;
    size_t g = table_index(*this, G);
    auto& t = table();
    for (size_t h = 0; h < t.objects.size(); ++h) {
        if (h == g || !t.epi[h][g]) continue;
        if (t.groups[h] && t.groups[g]) continue;
        if (!t.orbit_counts.count({h, g})) return false;
    }
    return true;
}

mpz_class Family::orbit_count(const Member& H, const Member& G) const
{
    if (!extensional()) return count_quotients_of_type(as_group(H), as_group(G));
    auto& t = table();
    size_t h = table_index(*this, H), g = table_index(*this, G);
    if (!t.epi[h][g]) return 0;
    if (h == g) return 1;
    if (t.groups[h] && t.groups[g]) return count_quotients_of_type(*t.groups[h], *t.groups[g]);
    auto it = t.orbit_counts.find({h, g});
    if (it == t.orbit_counts.end())
        throw Error("needs-metadata", "no epi orbit count for " + t.objects[h] + " -> " + t.objects[g]);
    return static_cast<unsigned long>(it->second);
}

// ---------------- predicates ----------------

namespace {

using Status = PredicateResult::Status;

std::optional<Member> find_in(const Family& F, const FinAbGroup& g)
{
    if (!F.extensional()) {
        if (F.contains(g)) return Member{g};
        return std::nullopt;
    }
    auto& t = F.table();
    for (size_t i = 0; i < t.groups.size(); ++i)
        if (t.groups[i] && *t.groups[i] == g) return Member{TableObject{t.objects[i]}};
    return std::nullopt;
}

// abelian members with their groups; non-abelian table objects flagged separately
struct AbelianView {
    std::vector<std::pair<Member, FinAbGroup>> items;
    std::vector<Member> opaque;
};

AbelianView view(const Family& F, u64 cap)
{
    AbelianView v;
    if (!F.extensional()) {
        for (auto& m : F.members_up_to(cap)) v.items.emplace_back(m, as_group(m));
        return v;
    }
    auto& t = F.table();
    for (size_t i = 0; i < t.objects.size(); ++i) {
        if (t.groups[i]) v.items.emplace_back(TableObject{t.objects[i]}, *t.groups[i]);
        else v.opaque.push_back(TableObject{t.objects[i]});
    }
    return v;
}

// cap used for a finite table: large enough to cover every pair
u64 effective_cap(const Family& F, u64 cap, const AbelianView& v)
{
    if (!F.extensional()) return cap;
    u64 m = 1;
    for (auto& it : v.items) m = std::max(m, it.second.order());
    return m * m;
}

PredicateResult finish(const Family& F, Predicate pred, bool opaque_left, u64 cap)
{
    if (F.extensional()) {
        if (opaque_left) return {Status::unknown_at_cap, {}, "table objects without group data"};
        return certified("exhaustive check of the table");
    }
    auto it = F.flags().find(pred);
    if (it != F.flags().end() && it->second.status == Status::certified)
        return certified(it->second.basis + "; no counterexample up to order " + std::to_string(cap));
    return {Status::unknown_at_cap, {}, "no counterexample up to order " + std::to_string(cap)};
}

} // namespace

PredicateResult check_predicate(const Family& F, Predicate pred, u64 order_cap, unsigned r)
{
    auto v = view(F, order_cap);
    u64 cap = effective_cap(F, order_cap, v);
    bool opaque = !v.opaque.empty();
    switch (pred) {
    case Predicate::unital: {
        if (F.unital()) return certified(F.extensional() ? "table contains the trivial group" : "contains 1");
        return refuted({}, "no trivial group");
    }
    case Predicate::downward_closed: {
        for (auto& [m, g] : v.items)
            for (auto& q : (g.order() <= 4096 ? oracle_quotient_classes(g, 4096) : quotient_classes(g)))
                if (!find_in(F, q)) return refuted({m, q}, "quotient outside the family");
        if (F.extensional()) {
            auto& t = F.table();
            bool unknown = false;
            for (auto& o : v.opaque) {
                size_t i = t.at(member_str(o));
                auto dq = t.declared_quotients.find(i);
                if (dq == t.declared_quotients.end()) { unknown = true; continue; }
                for (auto& q : dq->second) {
                    bool present = t.index.count(q) > 0;
                    if (!present) {
                        auto g = try_group(q);
                        present = g && find_in(F, *g);
                        if (!present) return refuted({o, g ? Member{*g} : Member{TableObject{q}}},
                                                     "declared quotient outside the table");
                    }
                }
            }
            opaque = unknown;
        }
        return finish(F, pred, opaque, cap);
    }
    case Predicate::widely_closed: {
        for (auto& [mh, h] : v.items)
            for (auto& [mk, k] : v.items) {
                if (static_cast<long double>(h.order()) * k.order() > cap) continue;
                for (auto& L : oracle_wide_subgroups(h, k, cap)) {
                    if (find_in(F, L)) continue;
                    for (auto& [mg, g] : v.items)
                        if (epi_exists(g, L)) return refuted({mg, mh, mk, L}, "wide image outside the family");
                }
            }
        return finish(F, pred, opaque, cap);
    }
    case Predicate::multiplicative_global: {
        for (auto& [ma, a] : v.items)
            for (auto& [mb, b] : v.items) {
                if (static_cast<long double>(a.order()) * b.order() > cap) continue;
                auto ab = product(a, b);
                if (!find_in(F, ab)) return refuted({ma, mb, ab}, "product outside the family");
            }
        auto d = check_predicate(F, Predicate::downward_closed, order_cap);
        if (d.status == Status::refuted) return d;
        return finish(F, pred, opaque, cap);
    }
    case Predicate::r_submultiplicative: {
        if (!F.unital()) return refuted({}, "no trivial group");
        for (auto& [m, g] : v.items)
            for (auto& [q, lam] : g.parts())
                if (lam.size() > r) return refuted({m}, "not " + std::to_string(r) + "-generated");
        for (size_t i = 0; i < v.items.size(); ++i)
            for (size_t j = i; j < v.items.size(); ++j) {
                auto& a = v.items[i].second;
                auto& b = v.items[j].second;
                if (static_cast<long double>(a.order()) * b.order() > cap) continue;
                ElementTable T(product(a, b));
                std::set<std::vector<char>> seen;
                std::vector<size_t> idx(r, 0);
                while (true) {
                    auto S = T.span(idx);
                    if (seen.insert(S).second) {
                        auto s = T.subgroup_type(S);
                        if (!find_in(F, s))
                            return refuted({v.items[i].first, v.items[j].first, s},
                                           "r-generated subgroup of a product is missing");
                    }
                    size_t k = 0;
                    while (k < r && ++idx[k] == T.order()) idx[k++] = 0;
                    if (k == r) break;
                }
            }
        return finish(F, pred, opaque, cap);
    }
    }
    return {};
}

MinimalComplement minimal_complement(const Family& F, const Member& Gm, u64 order_cap)
{
    F.require(Gm);
    MinimalComplement out;
    if (F.extensional()) {
        std::vector<Member> comp;
        for (auto& o : F.table().objects)
            if (!F.epi(Gm, TableObject{o})) comp.push_back(TableObject{o});
        for (auto& a : comp) {
            bool minimal = true;
            for (auto& b : comp)
                if (!(a == b) && F.epi(a, b)) minimal = false;
            if (minimal) out.minimal.push_back(a);
        }
        out.complete = true;
        out.certificate = "finite table";
        return out;
    }
    auto& G = as_group(Gm);
    if (!F.single_prime()) {
        // every prime not dividing |G| contributes a minimal C_q
        for (auto& m : F.members_up_to(order_cap)) {
            if (F.epi(Gm, m)) continue;
            bool minimal = true;
            for (auto& x : quotient_classes(as_group(m)))
                if (!(x == as_group(m)) && F.contains(x) && !epi_exists(G, x)) minimal = false;
            if (minimal) out.minimal.push_back(m);
        }
        out.unbounded = true;
        out.certificate = "infinitely many primes admit a cyclic group outside the down-set";
        return out;
    }
    u64 p = F.prime();
    Partition lam = G.partition(p);
    unsigned top = F.rank_bound() ? *F.rank_bound() : static_cast<unsigned>(lam.size()) + 1;
    std::vector<Partition> cands;
    for (unsigned i = 1; i <= top; ++i) {
        unsigned li = i <= lam.size() ? lam[i - 1] : 0;
        if (F.exponent_bound() && li + 1 > *F.exponent_bound()) continue;
        cands.push_back(Partition(i, li + 1));
    }
    for (auto& a : cands) {
        bool minimal = true;
        for (auto& b : cands)
            if (a != b && dominated(b, a)) minimal = false;
        if (minimal) out.minimal.push_back(FinAbGroup::p_group(p, a));
    }
    std::sort(out.minimal.begin(), out.minimal.end());
    out.complete = true;
    out.certificate = "a partition escapes the down-set of lambda iff some part i exceeds lambda_i; "
                      "the minimal escapes are the rectangles (lambda_i + 1)^i";
    return out;
}

bool is_downward_closed_in(const Family& F, const Family& F2, u64 order_cap)
{
    if (F.extensional() != F2.extensional()) {
        // abelian table inside an intensional family, or the reverse
        for (auto& m : F.members_up_to(order_cap)) {
            auto g = F.extensional() ? F.table().groups[F.table().at(member_str(m))] : std::optional<FinAbGroup>(as_group(m));
            if (!g || !F2.contains(*g)) return false;
            for (auto& q : quotient_classes(*g))
                if (F2.contains(q) && !F.contains(q)) return false;
        }
        return !F.extensional() ? false : true;
    }
    if (F.extensional()) {
        for (auto& o : F.table().objects)
            if (!F2.contains(TableObject{o})) return false;
        for (auto& o : F.table().objects)
            for (auto& o2 : F2.table().objects)
                if (F2.epi(TableObject{o}, TableObject{o2}) && !F.contains(TableObject{o2})) return false;
        return true;
    }
    for (auto& m : F.members_up_to(order_cap))
        if (!F2.contains(m)) return false;
    // abelian built-ins are closed under quotients, so containment suffices
    return true;
}

} // namespace ttgeo
