#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttgeo/family.hpp"

namespace ttgeo {

struct RunConfig {
    std::string subcommand;   // spectrum | cb-rank | hsupp | ideal | vi-classify | chain | oracle | check-predicate | export-poset
    std::string family;       // path to a JSON file or inline JSON
    u64 stage_cap = 8;
    u64 order_cap = 64;
    std::string format = "json"; // json | dot | text
    u64 seed = 1;
    bool ascii = false;
    std::vector<std::string> exprs;      // hsupp, vi-classify, ideal membership queries
    std::vector<std::string> generators; // ideal
    std::vector<std::string> points;     // ideal: prime ideals of points
    u64 p = 2;                           // vi-classify, chain
    unsigned length = 8;                 // chain
    std::string predicate;               // check-predicate
    unsigned r = 1;                      // r_submultiplicative
    std::optional<u64> stage;            // export-poset (defaults to stage_cap)
    std::string sweep = "all";           // oracle
    unsigned cases = 50;                 // oracle, per sweep

    static RunConfig from_json(const nlohmann::json& j); // unknown fields rejected
    nlohmann::json to_json() const;
    void validate() const; // throws invalid-spec
};

struct RunResult {
    int status = 0; // 0 success, 1 refuted or violation, 2 invalid input
    std::string output;
};

RunResult run(const RunConfig& cfg);

// "{...}" is parsed inline, anything else is read as a file
FamilyPtr load_family(const std::string& path_or_inline);

// the >> poset of a stage: stage members plus the symbolic points visible at
// that stage, covering edges only
std::string export_poset(const Family& F, u64 stage, bool ascii = false);

// "C4xC2", "1", or the table label
std::string member_label(const Member& m);

} // namespace ttgeo
