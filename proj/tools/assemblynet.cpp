#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "assemblynet/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"digital assembly toolkit"};
    app.require_subcommand(1);

    std::string manifest_path;
    CLI::App* check = app.add_subcommand("check", "evaluate a manifest's compliance");
    check->add_option("file", manifest_path, "manifest file")->required();

    std::string scenario_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    CLI::App* simulate =
        app.add_subcommand("simulate", "run a scenario and print its summary");
    simulate->add_option("file", scenario_path, "scenario file")->required();
    simulate->add_option("--out", out_dir, "directory to write run artifacts into");
    simulate->add_option("--seed", seed, "override the scenario seed");

    std::string board_path;
    CLI::App* board =
        app.add_subcommand("board-verify", "verify an exported board chain");
    board->add_option("file", board_path, "board export file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : assemblynet::cli::kExitUsage;
    }

    if (check->parsed())
        return assemblynet::cli::cmd_check(manifest_path, std::cout, std::cerr);
    if (simulate->parsed())
        return assemblynet::cli::cmd_simulate(scenario_path, out_dir, seed, std::cout,
                                              std::cerr);
    return assemblynet::cli::cmd_board_verify(board_path, std::cout, std::cerr);
}
