#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ttgeo/cli.hpp"
#include "ttgeo/error.hpp"

using ttgeo::RunConfig;

int main(int argc, char** argv)
{
    CLI::App app{"ttgeo: spectra, supports and ideals of derived categories of global representations"};
    app.require_subcommand(0, 1);
    RunConfig cfg;
    std::string config_file;
    std::uint64_t stage = 0;
    bool dot = false;

    app.add_option("--config", config_file, "read the run config from a JSON file (command line flags are ignored)");

    auto common = [&](CLI::App* sc, bool family) {
        if (family) sc->add_option("--family", cfg.family, "family spec: JSON file or inline JSON")->required();
        sc->add_option("--stage-cap", cfg.stage_cap, "stage cap")->capture_default_str();
        sc->add_option("--order-cap", cfg.order_cap, "order cap for brute-force checks")->capture_default_str();
        sc->add_option("--format", cfg.format, "json, dot or text")->capture_default_str();
        sc->add_option("--seed", cfg.seed, "seed for randomized sweeps")->capture_default_str();
        sc->add_flag("--ascii", cfg.ascii, "ASCII instead of Unicode math");
    };

    auto spectrum = app.add_subcommand("spectrum", "points, space and CB rank of the spectrum");
    common(spectrum, true);
    spectrum->add_flag("--dot", dot, "emit the >> poset of the stage truncation as DOT");

    auto cb = app.add_subcommand("cb-rank", "Cantor-Bendixson rank of the spectrum");
    common(cb, true);

    auto hs = app.add_subcommand("hsupp", "homological support of expressions");
    common(hs, true);
    hs->add_option("--expr", cfg.exprs, "expression, e.g. 'aug[2:[1]] (x) e[2:[2]]'")->required();

    auto id = app.add_subcommand("ideal", "thick ideals: generation, membership, prime ideals, classification");
    common(id, true);
    id->add_option("--gen", cfg.generators, "generator expression (repeatable)");
    id->add_option("--expr", cfg.exprs, "membership query (repeatable)");
    id->add_option("--point", cfg.points, "profinite point whose prime ideal is queried (repeatable)");

    auto vi = app.add_subcommand("vi-classify", "tt-class of a VI-module expression over E_p");
    common(vi, false);
    vi->add_option("--expr", cfg.exprs, "expression; bare integers are ranks")->required();
    vi->add_option("--p", cfg.p, "prime")->capture_default_str();

    auto ch = app.add_subcommand("chain", "strictly nested family primes of A(p)");
    common(ch, false);
    ch->add_option("--p", cfg.p, "prime")->capture_default_str();
    ch->add_option("--length", cfg.length, "number of links")->capture_default_str();

    auto orc = app.add_subcommand("oracle", "agreement sweeps between closed forms and brute-force oracles");
    common(orc, false);
    orc->add_option("--sweep", cfg.sweep, "epi, support, vi, peel or all")->capture_default_str();
    orc->add_option("--cases", cfg.cases, "random cases per sweep")->capture_default_str();
    orc->add_option("--p", cfg.p, "prime for the vi sweep")->capture_default_str();

    auto cp = app.add_subcommand("check-predicate", "certify or refute a family predicate up to the order cap");
    common(cp, true);
    cp->add_option("--predicate", cfg.predicate,
                   "widely_closed, unital, downward_closed, multiplicative_global or r_submultiplicative")
        ->required();
    cp->add_option("--r", cfg.r, "r for r_submultiplicative")->capture_default_str();

    auto ex = app.add_subcommand("export-poset", "DOT rendering of a stage truncation");
    common(ex, true);
    ex->add_option("--stage", stage, "stage index (defaults to the stage cap)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) {
                std::cerr << "error: cannot read " << config_file << "\n";
                return 2;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = RunConfig::from_json(nlohmann::json::parse(ss.str()));
        } else {
            if (app.get_subcommands().empty()) {
                std::cerr << app.help();
                return 2;
            }
            cfg.subcommand = app.get_subcommands().front()->get_name();
            if (dot) cfg.format = "dot";
            if (stage) cfg.stage = stage;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto res = ttgeo::run(cfg);
    (res.status == 2 ? std::cerr : std::cout) << res.output;
    return res.status;
}
