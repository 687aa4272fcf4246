/** \file levi_cli.cpp
 *  \brief Command-line driver: parses a JSON run configuration and dispatches
 *         to the kernel / verify / cauchy / oracle-compare / modulus-check
 *         runners.  The exit code mirrors the runner result (0 success,
 *         1 failed check, 2 non-contraction, 3 usage or config error).
 */

#include "levi/parallel.hpp"
#include "levi/runner.hpp"

#include "CLI11.hpp"

#include <functional>
#include <iostream>
#include <string>

int
main(int argc, char** argv)
{
    CLI::App app{"Fundamental-solution construction and verification driver"};
    app.require_subcommand(1);
    app.fallthrough(); // let global flags appear after the subcommand

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", threads, "worker thread count (0 = default)");

    using Runner = std::function<int(const levi::RunConfig&, std::ostream&)>;
    struct Cmd {
        const char* name;
        const char* help;
        Runner fn;
    };
    const Cmd cmds[] = {
        {"kernel", "build and export the kernel tabulation", levi::run_kernel},
        {"verify", "run the envelope-estimate suite", levi::run_verify},
        {"cauchy", "solve the configured Cauchy problem", levi::run_cauchy},
        {"oracle-compare", "cross-check against the reference solvers",
         levi::run_oracle_compare},
        {"modulus-check", "certify the configured modulus", levi::run_modulus_check},
    };
    for (const Cmd& c : cmds)
        app.add_subcommand(c.name, c.help);

    CLI11_PARSE(app, argc, argv);

    try {
        levi::RunConfig cfg = levi::RunConfig::from_json_file(config_path);
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        if (seed >= 0)
            cfg.seed = static_cast<std::uint64_t>(seed);
        levi::set_threads(threads);

        const std::string chosen = app.get_subcommands().front()->get_name();
        for (const Cmd& c : cmds)
            if (chosen == c.name)
                return c.fn(cfg, std::cout);
        return 3; // unreachable: CLI11 enforces a known subcommand
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
