#include "ttgeo/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ttgeo/repcore.hpp"
#include "ttgeo/sample.hpp"
#include "ttgeo/spectrum.hpp"
#include "ttgeo/ttsupport.hpp"

namespace ttgeo {

using nlohmann::json;

// ---------------- config ----------------

static const std::vector<std::string> kSubcommands = {"spectrum", "cb-rank",         "hsupp",       "ideal",
                                                      "vi-classify", "chain",         "oracle",      "check-predicate",
                                                      "export-poset"};

RunConfig RunConfig::from_json(const json& j)
{
    if (!j.is_object()) throw Error("invalid-spec", "run config must be an object");
    RunConfig c;
    for (auto& [k, v] : j.items()) {
        auto num = [&]() -> u64 {
            if (!v.is_number_integer() || v.get<long long>() < 0) throw Error("invalid-spec", "'" + k + "' must be a nonnegative integer");
            return v.get<u64>();
        };
        auto strs = [&]() {
            if (!v.is_array()) throw Error("invalid-spec", "'" + k + "' must be a list of strings");
            return v.get<std::vector<std::string>>();
        };
        if (k == "subcommand") c.subcommand = v.get<std::string>();
        else if (k == "family") c.family = v.is_string() ? v.get<std::string>() : v.dump();
        else if (k == "stage_cap") c.stage_cap = num();
        else if (k == "order_cap") c.order_cap = num();
        else if (k == "format") c.format = v.get<std::string>();
        else if (k == "seed") c.seed = num();
        else if (k == "ascii") c.ascii = v.get<bool>();
        else if (k == "exprs") c.exprs = strs();
        else if (k == "generators") c.generators = strs();
        else if (k == "points") c.points = strs();
        else if (k == "p") c.p = num();
        else if (k == "length") c.length = static_cast<unsigned>(num());
        else if (k == "predicate") c.predicate = v.get<std::string>();
        else if (k == "r") c.r = static_cast<unsigned>(num());
        else if (k == "stage") c.stage = num();
        else if (k == "sweep") c.sweep = v.get<std::string>();
        else if (k == "cases") c.cases = static_cast<unsigned>(num());
        else throw Error("invalid-spec", "unknown field '" + k + "' in run config");
    }
    c.validate();
    return c;
}

json RunConfig::to_json() const
{
    json j{{"subcommand", subcommand}, {"family", family},     {"stage_cap", stage_cap}, {"order_cap", order_cap},
           {"format", format},         {"seed", seed},         {"ascii", ascii},         {"exprs", exprs},
           {"generators", generators}, {"points", points},     {"p", p},                 {"length", length},
           {"predicate", predicate},   {"r", r},               {"sweep", sweep},         {"cases", cases}};
    if (stage) j["stage"] = *stage;
    return j;
}

void RunConfig::validate() const
{
    if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
        throw Error("invalid-spec", "unknown subcommand '" + subcommand + "'");
    if (stage_cap < 1 || order_cap < 1) throw Error("invalid-spec", "caps must be >= 1");
    if (stage && *stage < 1) throw Error("invalid-spec", "stage must be >= 1");
    if (format != "json" && format != "dot" && format != "text") throw Error("invalid-spec", "format must be json, dot or text");
    if (stage_cap > 4096) throw Error("cap-exceeded", "stage cap above 4096");
}

// ---------------- helpers ----------------

// line and column of a byte offset
static std::string position(const std::string& text, size_t byte)
{
    size_t line = 1, col = 1;
    for (size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

static json parse_json_text(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("parse-error", what + " at " + position(text, e.byte) + ": " + e.what());
    }
}

FamilyPtr load_family(const std::string& src)
{
    if (src.empty()) throw Error("invalid-spec", "--family is required");
    size_t i = src.find_first_not_of(" \t\r\n");
    std::string text;
    if (i != std::string::npos && src[i] == '{') {
        text = src;
    } else {
        std::ifstream in(src);
        if (!in) throw Error("invalid-spec", "cannot read family file '" + src + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return Family::from_json(parse_json_text(text, "family spec"));
}

std::string member_label(const Member& m)
{
    auto g = std::get_if<FinAbGroup>(&m);
    if (!g) return member_str(m);
    if (g->trivial()) return "1";
    std::string s;
    for (u64 c : g->cyclic_orders()) s += (s.empty() ? "C" : "xC") + std::to_string(c);
    return s;
}

// decided answers as booleans, otherwise the reason
static json tri_json(Tri t)
{
    if (t == Tri::unknown) return tri_name(t);
    return t == Tri::yes;
}

static json members_json(const std::vector<Member>& ms)
{
    auto a = json::array();
    for (auto& m : ms) a.push_back(member_str(m));
    return a;
}

// stage members, memoized on disk when TTGEO_CACHE_DIR is set
static std::vector<Member> cached_stage(const Family& F, u64 n)
{
    const char* dir = std::getenv("TTGEO_CACHE_DIR");
    if (!dir || !*dir) return F.stage(n).members;
    namespace fs = std::filesystem;
    auto path = fs::path(dir) / ("stage-" + std::to_string(std::hash<std::string>{}(F.key())) + "-" + std::to_string(n) + ".json");
    std::error_code ec;
    if (fs::exists(path, ec)) {
        try {
            std::ifstream in(path);
            json j = json::parse(in);
            if (j.at("family") == F.key() && j.at("stage") == n) {
                std::vector<Member> out;
                for (auto& s : j.at("members")) out.push_back(parse_member(F, s.get<std::string>()));
                return out;
            }
        } catch (const std::exception&) {
            // stale or corrupt entries are recomputed
        }
    }
    auto members = F.stage(n).members;
    fs::create_directories(dir, ec);
    std::ofstream out(path);
    if (out) out << json{{"family", F.key()}, {"stage", n}, {"members", members_json(members)}}.dump() << "\n";
    return members;
}

static std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string export_poset(const Family& F, u64 stage, bool ascii)
{
    auto members = cached_stage(F, stage);
    size_t n = members.size();
    std::ostringstream os;
    os << "digraph poset {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box];\n";
    for (size_t i = 0; i < n; ++i) os << "  m" << i << " [label=" << quote(member_label(members[i])) << "];\n";
    // covering relations of >>, drawn from the larger group to its quotient
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            if (a == b || !F.epi(members[a], members[b])) continue;
            bool cover = true;
            for (size_t c = 0; c < n && cover; ++c)
                if (c != a && c != b && F.epi(members[a], members[c]) && F.epi(members[c], members[b])) cover = false;
            if (cover) os << "  m" << a << " -> m" << b << ";\n";
        }
    std::vector<ProfinitePoint> sym;
    if (!F.extensional() && F.kind() != FamilyKind::elementary_abelian && F.has_finite_filtration())
        sym = point_space(F, stage).symbolic_points;
    for (size_t i = 0; i < sym.size(); ++i) {
        std::string lbl = sym[i].str();
        if (!ascii) {
            std::string u;
            for (char c : lbl) {
                if (c == 'Z') u += "ℤ";
                else if (c == '+') u += "⊕";
                else u += c;
            }
            lbl = u;
        }
        auto t = truncate(F, sym[i], stage);
        size_t at = std::find(members.begin(), members.end(), t) - members.begin();
        os << "  s" << i << " [label=" << quote(lbl) << ", style=dashed];\n";
        if (at < n) os << "  s" << i << " -> m" << at << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

static json cb_json(const std::optional<CbRank>& r)
{
    if (!r) return nullptr;
    if (r->omega) return "omega";
    return r->value;
}

static std::optional<SpaceDesc> try_space(const Family& F)
{
    try {
        return space_description(F);
    } catch (const Error& e) {
        if (e.code() != "unsupported" && e.code() != "unsupported-term") throw;
        return std::nullopt;
    }
}

static std::optional<CbRank> try_cb(const std::optional<SpaceDesc>& d)
{
    if (!d) return std::nullopt;
    try {
        return cb_rank(*d);
    } catch (const Error& e) {
        if (e.code() != "unsupported" && e.code() != "unsupported-term") throw;
        return std::nullopt;
    }
}

static std::string render(const json& j, const std::string& text, const RunConfig& cfg)
{
    if (cfg.format == "text") return text;
    return j.dump(2) + "\n";
}

// ---------------- subcommands ----------------

static RunResult cmd_spectrum(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    if (cfg.format == "dot") return {0, export_poset(*F, cfg.stage_cap, cfg.ascii)};
    auto ps = point_space(*F, cfg.stage_cap);
    auto space = try_space(*F);
    auto cb = try_cb(space);
    json j;
    j["family"] = F->spec().to_json();
    j["stage_cap"] = cfg.stage_cap;
    j["points_finite"] = members_json(ps.finite_points);
    auto sym = json::array(), coords = json::array();
    for (auto& x : ps.symbolic_points) {
        sym.push_back(x.str());
        coords.push_back(x.coord_str());
    }
    j["points_symbolic"] = sym;
    j["points_symbolic_coords"] = coords;
    j["extra_closed_point"] = ps.extra_closed_point;
    j["space"] = space ? json(space->str(cfg.ascii)) : json(nullptr);
    j["cb_rank"] = cb_json(cb);
    std::ostringstream t;
    t << "space: " << (space ? space->str(cfg.ascii) : "unsupported") << "\n";
    t << "cb_rank: " << (cb ? cb->str() : "unsupported") << "\n";
    t << "finite points (" << ps.finite_points.size() << "):";
    for (auto& m : ps.finite_points) t << " " << member_label(m);
    t << "\nsymbolic points (" << ps.symbolic_points.size() << "):";
    for (auto& x : ps.symbolic_points) t << " " << x.str();
    if (ps.extra_closed_point) t << "\nplus one closed point";
    t << "\n";
    return {0, render(j, t.str(), cfg)};
}

static RunResult cmd_cb_rank(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    auto space = space_description(*F);
    auto cb = cb_rank(space);
    json j{{"family", F->spec().to_json()}, {"space", space.str(cfg.ascii)}, {"cb_rank", cb_json(cb)}};
    return {0, render(j, cb.str() + "\n", cfg)};
}

static std::vector<ExprPtr> parse_all(const Family& F, const std::vector<std::string>& xs, const char* what)
{
    if (xs.empty()) throw Error("invalid-spec", std::string("at least one ") + what + " is required");
    std::vector<ExprPtr> out;
    for (auto& x : xs) out.push_back(parse_expr(F, x));
    return out;
}

static RunResult cmd_hsupp(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    auto xs = parse_all(*F, cfg.exprs, "--expr");
    auto arr = json::array();
    std::string text;
    for (auto& X : xs) {
        auto S = hsupp(F, X);
        json r{{"expr", X->str()}, {"support", support_str(S)}};
        if (auto c = std::get_if<ClopenSet>(&S)) {
            r["stage"] = c->stage();
            r["members"] = members_json(std::vector<Member>(c->members().begin(), c->members().end()));
        }
        arr.push_back(r);
        text += X->str() + ": " + support_str(S) + "\n";
    }
    json j{{"family", F->spec().to_json()}, {"results", arr}};
    return {0, render(j, text, cfg)};
}

static RunResult cmd_vi(const RunConfig& cfg)
{
    json spec{{"kind", "elementary_abelian"}, {"p", cfg.p}};
    auto F = Family::from_json(spec);
    auto xs = parse_all(*F, cfg.exprs, "--expr");
    auto arr = json::array();
    std::string text;
    for (auto& X : xs) {
        auto c = vi_class(cfg.p, X);
        arr.push_back({{"expr", X->str()}, {"class", c.str()}});
        text += c.str() + "\n";
    }
    json j{{"p", cfg.p}, {"results", arr}};
    return {0, render(j, text, cfg)};
}

static RunResult cmd_ideal(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    if (cfg.generators.empty() && cfg.points.empty()) {
        auto L = classify_ideals(*F, cfg.ascii);
        json j{{"family", F->spec().to_json()},
               {"opens", L.opens},
               {"finitely_generated", L.finitely_generated},
               {"on_group_points", L.on_group_points},
               {"space", L.space ? json(L.space->str(cfg.ascii)) : json(nullptr)}};
        return {0, render(j, L.opens + "\n", cfg)};
    }
    std::vector<ExprPtr> queries;
    for (auto& x : cfg.exprs) queries.push_back(parse_expr(*F, x));
    json j{{"family", F->spec().to_json()}};
    std::ostringstream t;
    if (!cfg.generators.empty()) {
        auto I = ideal_of(F, parse_all(*F, cfg.generators, "--gen"));
        j["ideal"] = I.str();
        if (I.support()) j["support"] = support_str(*I.support());
        j["whole"] = I.is_whole();
        auto ms = json::array();
        t << I.str() << "\n";
        for (auto& X : queries) {
            auto m = member(X, I);
            ms.push_back({{"expr", X->str()}, {"member", tri_json(m)}});
            t << X->str() << ": " << tri_name(m) << "\n";
        }
        j["members"] = ms;
    }
    auto primes = json::array();
    for (auto& pt : cfg.points) {
        auto P = prime_of_point(F, ProfinitePoint::parse(pt));
        auto ms = json::array();
        t << P.str() << "\n";
        for (auto& X : queries) {
            bool m = member(X, P);
            ms.push_back({{"expr", X->str()}, {"member", m}});
            t << X->str() << ": " << (m ? "yes" : "no") << "\n";
        }
        primes.push_back({{"point", pt}, {"prime", P.str()}, {"members", ms}});
    }
    if (!cfg.points.empty()) j["primes"] = primes;
    return {0, render(j, t.str(), cfg)};
}

static RunResult cmd_chain(const RunConfig& cfg)
{
    if (cfg.length < 1 || cfg.length > 64) throw Error("invalid-spec", "chain length must be in 1..64");
    auto links = krull_chain(cfg.p, cfg.length);
    auto arr = json::array();
    bool ok = links.size() == cfg.length;
    std::ostringstream t;
    for (auto& L : links) {
        ok = ok && L.in_previous && L.not_in_this;
        arr.push_back({{"prime", L.prime.str()},
                       {"witness", L.witness->str()},
                       {"in_previous", L.in_previous},
                       {"not_in_this", L.not_in_this}});
        t << L.prime.str() << "  witness " << L.witness->str() << (L.in_previous && L.not_in_this ? "  ok" : "  FAILED")
          << "\n";
    }
    json j{{"p", cfg.p}, {"length", cfg.length}, {"links", arr}, {"verified", ok}};
    return {ok ? 0 : 1, render(j, t.str(), cfg)};
}

static RunResult cmd_check(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    if (cfg.predicate.empty()) throw Error("invalid-spec", "--predicate is required");
    auto pred = parse_predicate(cfg.predicate);
    auto res = check_predicate(*F, pred, cfg.order_cap, cfg.r);
    json j{{"family", F->spec().to_json()},
           {"predicate", predicate_name(pred)},
           {"status", status_name(res.status)},
           {"witness", members_json(res.witness)},
           {"basis", res.basis}};
    if (pred == Predicate::r_submultiplicative) j["r"] = cfg.r;
    std::string t = status_name(res.status);
    if (!res.witness.empty()) {
        t += " (";
        for (size_t i = 0; i < res.witness.size(); ++i) t += (i ? ", " : "") + member_label(res.witness[i]);
        t += ")";
    }
    return {res.status == PredicateResult::Status::refuted ? 1 : 0, render(j, t + "\n", cfg)};
}

// ---------------- oracle sweeps ----------------

namespace {

struct Sweep {
    std::string name;
    size_t cases = 0, failures = 0;
    json counterexamples = json::array();
    void fail(json dump)
    {
        ++failures;
        if (counterexamples.size() < 5) counterexamples.push_back(std::move(dump));
    }
    json to_json() const
    {
        return {{"name", name}, {"cases", cases}, {"failures", failures}, {"counterexamples", counterexamples}};
    }
};

Sweep sweep_epi(const RunConfig& cfg)
{
    Sweep s{"epi"};
    for (u64 p : {2, 3}) {
        auto gs = p_groups_up_to(p, cfg.order_cap);
        for (auto& G : gs)
            for (auto& H : gs) {
                ++s.cases;
                bool a = epi_exists(G, H), b = oracle_epi_exists(G, H, cfg.order_cap * cfg.order_cap);
                if (a != b) s.fail({{"G", G.str()}, {"H", H.str()}, {"closed_form", a}, {"oracle", b}});
            }
    }
    return s;
}

std::string set_str(const RepFamily& R, const std::set<size_t>& S)
{
    std::string s = "{";
    for (size_t h : S) s += (s.size() > 1 ? "," : "") + member_label(R.group(h));
    return s + "}";
}

// support calculus over a built-in family against repcore on a finite window of it
void support_agreement(Sweep& s, const FamilyPtr& F, const std::vector<FinAbGroup>& window, std::mt19937_64& rng,
                       unsigned n)
{
    auto R = RepFamily::from_groups(window);
    ExprSampler S;
    S.F = F;
    for (auto& g : window) S.leaves.push_back(g);
    S.use_unit = F->unital();
    for (unsigned i = 0; i < n; ++i) {
        auto X = S(rng);
        auto C = realize(R, *X);
        if (C.max_member_dim() > 96) {
            --i;
            continue;
        }
        ++s.cases;
        auto oracle = hsupp_oracle(C);
        std::set<size_t> calc;
        for (size_t h = 0; h < R->size(); ++h)
            if (in_support(*F, *X, R->group(h))) calc.insert(h);
        if (calc != oracle)
            s.fail({{"family", F->spec().to_json()}, {"expr", X->str()}, {"calculus", set_str(*R, calc)},
                    {"oracle", set_str(*R, oracle)}});
    }
}

Sweep sweep_support(const RunConfig& cfg, std::mt19937_64& rng)
{
    Sweep s{"support"};
    auto C2 = Family::from_json({{"kind", "cyclic_p"}, {"p", 2}});
    support_agreement(s, C2, {FinAbGroup::cyclic(1), FinAbGroup::cyclic(2), FinAbGroup::cyclic(4), FinAbGroup::cyclic(8)}, rng,
                      cfg.cases);
    auto C3 = Family::from_json({{"kind", "cyclic_p"}, {"p", 3}});
    support_agreement(s, C3, {FinAbGroup::cyclic(1), FinAbGroup::cyclic(3), FinAbGroup::cyclic(9)}, rng, cfg.cases);
    auto A = Family::from_json({{"kind", "abelian_p_rank"}, {"p", 2}, {"r", 2}});
    support_agreement(s, A, {FinAbGroup::cyclic(1), FinAbGroup::cyclic(2), FinAbGroup::elementary(2, 2), FinAbGroup::cyclic(4)},
                      rng, cfg.cases);
    return s;
}

Sweep sweep_vi(const RunConfig& cfg, std::mt19937_64& rng)
{
    Sweep s{"vi"};
    const unsigned window = 6;
    u64 p = cfg.p;
    auto E = Family::from_json({{"kind", "elementary_abelian"}, {"p", p}});
    auto W = RepFamily::elementary_window(p, window);
    ExprSampler S;
    S.F = E;
    for (unsigned r = 0; r <= 4; ++r) S.leaves.push_back(FinAbGroup::elementary(p, r));
    HomologyMemo memo;
    for (unsigned i = 0; i < cfg.cases; ++i) {
        auto X = S(rng);
        ++s.cases;
        auto c = vi_class(p, X);
        auto H = expr_homology(W, *X, &memo);
        for (unsigned r = 0; r <= window; ++r)
            if (c.contains(r) != !H[r].empty()) {
                s.fail({{"expr", X->str()}, {"class", c.str()}, {"rank", r}, {"oracle_nonzero", !H[r].empty()}});
                break;
            }
    }
    return s;
}

Sweep sweep_peel(const RunConfig& cfg, std::mt19937_64& rng)
{
    Sweep s{"peel"};
    u64 p = 2;
    std::vector<FinAbGroup> gs{FinAbGroup::cyclic(1), FinAbGroup::cyclic(p), FinAbGroup::cyclic(p * p),
                               FinAbGroup::elementary(p, 2), canonicalize({static_cast<long long>(p * p), static_cast<long long>(p)})};
    auto R = RepFamily::from_groups(gs);
    auto S = ExprSampler::for_family(R->family(), 1);
    for (unsigned i = 0; i < cfg.cases; ++i) {
        auto X = S(rng);
        auto C = realize(R, *X);
        if (C.max_member_dim() > 64) {
            --i;
            continue;
        }
        ++s.cases;
        auto supp = hsupp_oracle(C);
        auto T = chi_decompose(C);
        std::set<size_t> peeled;
        for (auto& st : T.steps) peeled.insert(st.member);
        if (!T.valid || T.steps.size() != supp.size() || peeled != supp)
            s.fail({{"expr", X->str()}, {"support", set_str(*R, supp)}, {"steps", T.steps.size()}, {"problem", T.problem}});
    }
    return s;
}

} // namespace

static RunResult cmd_oracle(const RunConfig& cfg)
{
    std::mt19937_64 rng(cfg.seed);
    std::vector<Sweep> sweeps;
    auto want = [&](const char* n) { return cfg.sweep == "all" || cfg.sweep == n; };
    if (cfg.sweep != "all" && cfg.sweep != "epi" && cfg.sweep != "support" && cfg.sweep != "vi" && cfg.sweep != "peel")
        throw Error("invalid-spec", "unknown sweep '" + cfg.sweep + "' (epi, support, vi, peel, all)");
    if (want("epi")) sweeps.push_back(sweep_epi(cfg));
    if (want("support")) sweeps.push_back(sweep_support(cfg, rng));
    if (want("vi")) sweeps.push_back(sweep_vi(cfg, rng));
    if (want("peel")) sweeps.push_back(sweep_peel(cfg, rng));
    bool pass = true;
    auto arr = json::array();
    std::ostringstream t;
    for (auto& s : sweeps) {
        pass = pass && s.failures == 0;
        arr.push_back(s.to_json());
        t << (s.failures ? "FAIL " : "PASS ") << s.name << " " << s.cases - s.failures << "/" << s.cases << "\n";
        for (auto& c : s.counterexamples) t << "  " << c.dump() << "\n";
    }
    json j{{"seed", cfg.seed}, {"sweeps", arr}, {"pass", pass}};
    return {pass ? 0 : 1, render(j, t.str(), cfg)};
}

static RunResult cmd_export(const RunConfig& cfg)
{
    auto F = load_family(cfg.family);
    return {0, export_poset(*F, cfg.stage.value_or(cfg.stage_cap), cfg.ascii)};
}

static bool invalid_input(const std::string& code)
{
    static const std::set<std::string> codes = {"parse-error",        "invalid-spec",    "membership-failure",
                                                "unsupported-group", "cross-family",     "not-unital",
                                                "needs-metadata",    "unsupported-constructor", "invalid-point"};
    return codes.count(code) > 0;
}

RunResult run(const RunConfig& cfg)
{
    try {
        cfg.validate();
        const auto& s = cfg.subcommand;
        if (s == "spectrum") return cmd_spectrum(cfg);
        if (s == "cb-rank") return cmd_cb_rank(cfg);
        if (s == "hsupp") return cmd_hsupp(cfg);
        if (s == "ideal") return cmd_ideal(cfg);
        if (s == "vi-classify") return cmd_vi(cfg);
        if (s == "chain") return cmd_chain(cfg);
        if (s == "oracle") return cmd_oracle(cfg);
        if (s == "check-predicate") return cmd_check(cfg);
        return cmd_export(cfg);
    } catch (const Error& e) {
        // violations of a claimed invariant are reported as refutations, everything else as bad input
        int status = invalid_input(e.code()) ? 2 : (e.code().find("violation") != std::string::npos ? 1 : 2);
        json j{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        return {status, cfg.format == "text" ? std::string("error: ") + e.what() + "\n" : j.dump(2) + "\n"};
    } catch (const json::exception& e) {
        json j{{"error", {{"code", "invalid-spec"}, {"message", e.what()}}}};
        return {2, cfg.format == "text" ? std::string("error: ") + e.what() + "\n" : j.dump(2) + "\n"};
    }
}

} // namespace ttgeo
