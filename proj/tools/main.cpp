#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "levypot/errors.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
    using namespace levypot::cli;

    CLI::App app{"Potential theory estimates for isotropic Levy processes"};
    std::string command, config_path;
    Overrides over;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out, theorem;

    std::string commands;
    for (const auto& c : command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "one of: " + commands + " (default: [task] command)");
    app.add_option("-c,--config", config_path, "configuration file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "overrides [run] seed");
    auto* threads_opt = app.add_option("--threads", threads, "overrides [run] threads")->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out, "output directory, overrides [run] out");
    auto* theorem_opt = app.add_option("--theorem", theorem, "verify-bounds theorem: ret, pot, green or sup");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }
    if (*seed_opt) over.seed = seed;
    if (*threads_opt) over.threads = threads;
    if (*out_opt) over.out = out;
    if (*theorem_opt) over.theorem = theorem;

    try {
        const RunConfig cfg = build_config(ConfigFile::load(config_path), command, over);
        const RunResult res = execute(cfg);
        write_tables(res, cfg.out_dir);
        std::cout << res.summary << '\n';
        return res.exit_code;
    } catch (const levypot::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
