#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ttgeo/cli.hpp"
#include "ttgeo/repcore.hpp"

using namespace ttgeo;
using json = nlohmann::json;
namespace fs = std::filesystem;

static const fs::path root = TTGEO_SOURCE_DIR;

static std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static std::string cli(const char* sub, const std::string& family, std::optional<u64> stage = {}, u64 cap = 8,
                       bool ascii = false)
{
    RunConfig c;
    c.subcommand = sub;
    c.family = family;
    c.stage = stage;
    c.stage_cap = cap;
    c.ascii = ascii;
    auto r = run(c);
    REQUIRE(r.status == 0);
    return r.output;
}

TEST_CASE("poset goldens")
{
    CHECK(cli("export-poset", R"({"kind":"cyclic_p","p":2})", 8) == slurp(root / "gallery/cyclic_p2_stage8.dot"));
    CHECK(cli("export-poset", R"({"kind":"abelian_p_rank","p":2,"r":2})", 4) ==
          slurp(root / "gallery/abelian_p2_rank2_stage4.dot"));
    CHECK(cli("export-poset", R"({"kind":"abelian_p_rank","p":2,"r":2})", 4, 8, true) ==
          slurp(root / "gallery/abelian_p2_rank2_stage4_ascii.dot"));
    CHECK(cli("export-poset", R"({"kind":"extensional","objects":["1"]})") == slurp(root / "gallery/trivial.dot"));
}

TEST_CASE("spectrum goldens")
{
    CHECK(json::parse(cli("spectrum", R"({"kind":"cyclic_p","p":2})")) ==
          json::parse(slurp(root / "gallery/cyclic_p2_spectrum.json")));
    CHECK(json::parse(cli("spectrum", R"({"kind":"abelian_p_rank","p":3,"r":2})", {}, 9)) ==
          json::parse(slurp(root / "gallery/abelian_p3_rank2_spectrum.json")));
    CHECK(json::parse(cli("spectrum", (root / "gallery/quotients_z4_z2.json").string())) ==
          json::parse(slurp(root / "gallery/quotients_z4_z2_spectrum.json")));
}

TEST_CASE("complex fixture")
{
    auto F = RepFamily::from_groups({FinAbGroup::cyclic(1), FinAbGroup::cyclic(2)});
    auto j = json::parse(slurp(root / "gallery/aug_cone_c2.json"));
    auto X = complex_from_json(F, j);
    X.validate();
    CHECK(complex_to_json(X) == j);
    CHECK(hsupp_oracle(X) == std::set<size_t>{0});
    CHECK(homology(X)[0] == GradedDims{{0, 1}});
    // the fixture names its family, and the names must match
    auto G = RepFamily::from_groups({FinAbGroup::cyclic(1), FinAbGroup::cyclic(3)});
    CHECK_THROWS_AS(complex_from_json(G, j), Error);
}

// A structural checker for the subset of JSON Schema used in schemas/:
// type, enum, const, required, properties, additionalProperties, items,
// prefixItems, minItems, maxItems, minimum, maximum, oneOf and $ref.
struct SchemaCheck {
    fs::path dir;
    std::map<std::string, json> loaded;

    const json& file(const std::string& name)
    {
        if (!loaded.count(name)) loaded[name] = json::parse(slurp(dir / name));
        return loaded[name];
    }

    static bool has_type(const json& v, const std::string& t)
    {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "integer") return v.is_number_integer();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        return false;
    }

    bool ok(const json& v, const json& s, const json& doc)
    {
        if (s.contains("$ref")) {
            std::string ref = s["$ref"];
            if (ref.rfind("#/", 0) == 0) return ok(v, doc[json::json_pointer(ref.substr(1))], doc);
            auto& other = file(ref);
            return ok(v, other, other);
        }
        if (s.contains("type")) {
            bool any = false;
            if (s["type"].is_array()) {
                for (auto& t : s["type"]) any |= has_type(v, t);
            } else {
                any = has_type(v, s["type"]);
            }
            if (!any) return false;
        }
        if (s.contains("const") && v != s["const"]) return false;
        if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) return false;
        if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) return false;
        if (s.contains("maximum") && v.is_number() && v.get<double>() > s["maximum"].get<double>()) return false;
        if (s.contains("oneOf")) {
            int n = 0;
            for (auto& alt : s["oneOf"]) n += ok(v, alt, doc);
            if (n != 1) return false;
        }
        if (v.is_object()) {
            if (s.contains("required"))
                for (auto& k : s["required"])
                    if (!v.contains(k.get<std::string>())) return false;
            for (auto& [k, x] : v.items()) {
                if (s.contains("properties") && s["properties"].contains(k)) {
                    if (!ok(x, s["properties"][k], doc)) return false;
                } else if (s.contains("additionalProperties")) {
                    auto& ap = s["additionalProperties"];
                    if (ap.is_boolean() ? !ap.get<bool>() : !ok(x, ap, doc)) return false;
                }
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<size_t>()) return false;
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<size_t>()) return false;
            size_t first = 0;
            if (s.contains("prefixItems")) {
                for (size_t i = 0; i < v.size() && i < s["prefixItems"].size(); ++i)
                    if (!ok(v[i], s["prefixItems"][i], doc)) return false;
                first = s["prefixItems"].size();
            }
            if (s.contains("items"))
                for (size_t i = first; i < v.size(); ++i)
                    if (!ok(v[i], s["items"], doc)) return false;
        }
        return true;
    }

    bool valid(const json& v, const std::string& schema) { return ok(v, file(schema), file(schema)); }
};

TEST_CASE("schemas accept the gallery and reject broken inputs")
{
    SchemaCheck sc{root / "schemas", {}};
    auto fam = [&](const char* s) { return sc.valid(json::parse(s), "family_spec.schema.json"); };
    CHECK(sc.valid(json::parse(slurp(root / "gallery/quotients_z4_z2.json")), "family_spec.schema.json"));
    CHECK(fam(R"({"kind":"cyclic_p","p":3})"));
    CHECK(fam(R"({"kind":"abelian_p_rank","p":3,"r":2})"));
    CHECK(fam(R"({"kind":"cyclic_all"})"));
    CHECK_FALSE(fam(R"({"kind":"cyclic_p"})"));
    CHECK_FALSE(fam(R"({"kind":"cyclic_p","p":3,"r":2})"));
    CHECK_FALSE(fam(R"({"kind":"mystery"})"));

    for (auto f : {"cyclic_p2_spectrum.json", "abelian_p3_rank2_spectrum.json", "quotients_z4_z2_spectrum.json"})
        CHECK(sc.valid(json::parse(slurp(root / "gallery" / f)), "spectrum_output.schema.json"));
    CHECK(sc.valid(json::parse(slurp(root / "gallery/aug_cone_c2.json")), "complex.schema.json"));
    auto broken = json::parse(slurp(root / "gallery/aug_cone_c2.json"));
    broken["terms"][0]["dims"][0] = -1;
    CHECK_FALSE(sc.valid(broken, "complex.schema.json"));

    RunConfig c;
    c.subcommand = "oracle";
    CHECK(sc.valid(c.to_json(), "run_config.schema.json"));
    c.stage = 4;
    CHECK(sc.valid(c.to_json(), "run_config.schema.json"));
    auto j = c.to_json();
    j["unknown"] = 1;
    CHECK_FALSE(sc.valid(j, "run_config.schema.json"));

    // every output of the CLI spectrum command conforms
    for (auto f : {R"({"kind":"cyclic_prime_order"})", R"({"kind":"elementary_abelian","p":3})",
                   R"({"kind":"cyclic_all"})", R"({"kind":"abelian_p_rank","p":2,"r":3})"})
        CHECK(sc.valid(json::parse(cli("spectrum", f)), "spectrum_output.schema.json"));
}
