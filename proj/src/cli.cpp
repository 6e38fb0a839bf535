#include "assemblynet/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>

#include "assemblynet/assembly.hpp"
#include "assemblynet/config.hpp"
#include "assemblynet/errors.hpp"
#include "assemblynet/gossip.hpp"
#include "assemblynet/primitives.hpp"
#include "assemblynet/sim.hpp"
#include "assemblynet/visibility.hpp"

namespace assemblynet::cli {

const char* kSeedEnvVar = "ASSEMBLYNET_SEED";

namespace {

int report_usage(std::ostream& err, const std::string& path, const std::exception& e) {
    err << path << ": " << e.what() << '\n';
    return kExitUsage;
}

int report_parse(std::ostream& err, const std::string& path, const ParseError& e) {
    err << path << ':' << e.line();
    if (e.column() != 0) err << ':' << e.column();
    err << ": " << e.what() << '\n';
    return kExitUsage;
}

}  // namespace

int cmd_check(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = read_file(manifest_path);
    } catch (const Error& e) {
        return report_usage(err, manifest_path, e);
    }

    AssemblyManifest manifest;
    try {
        manifest = parse_manifest(text);
    } catch (const ParseError& e) {
        return report_parse(err, manifest_path, e);
    } catch (const Error& e) {
        return report_usage(err, manifest_path, e);
    }

    ComplianceReport report = check_manifest(manifest);
    out << report.to_text();
    return report.compliant() ? kExitOk : kExitFailed;
}

int cmd_simulate(const std::string& scenario_path,
                 const std::optional<std::string>& out_dir,
                 std::optional<std::uint64_t> seed_override, std::ostream& out,
                 std::ostream& err) {
    std::string text;
    try {
        text = read_file(scenario_path);
    } catch (const Error& e) {
        return report_usage(err, scenario_path, e);
    }

    ParsedScenario parsed;
    try {
        parsed = parse_scenario(text);
    } catch (const ParseError& e) {
        return report_parse(err, scenario_path, e);
    } catch (const Error& e) {
        return report_usage(err, scenario_path, e);
    }
    ScenarioConfig& config = parsed.config;

    if (seed_override) config.seed = *seed_override;
    if (!config.seed) {
        if (const char* env = std::getenv(kSeedEnvVar)) {
            std::string_view value(env);
            std::uint64_t seed = 0;
            auto [ptr, ec] =
                std::from_chars(value.data(), value.data() + value.size(), seed);
            if (ec != std::errc() || ptr != value.data() + value.size() ||
                value.empty()) {
                err << kSeedEnvVar << ": not an unsigned integer: " << value << '\n';
                return kExitUsage;
            }
            config.seed = seed;
        }
    }
    if (!config.seed) {
        err << "no seed: pass --seed, set one in the scenario file, or export "
            << kSeedEnvVar << '\n';
        return kExitUsage;
    }

    if (parsed.topology_path) {
        std::filesystem::path path = *parsed.topology_path;
        if (path.is_relative())
            path = std::filesystem::path(scenario_path).parent_path() / path;
        try {
            config.topology = parse_topology_file(read_file(path.string()), config.fanout);
        } catch (const ParseError& e) {
            return report_parse(err, path.string(), e);
        } catch (const Error& e) {
            return report_usage(err, path.string(), e);
        }
    }

    RunResult result;
    try {
        result = run(config);
    } catch (const Error& e) {
        if (e.code() == Errc::not_compliant) {
            err << e.what() << '\n';
            return kExitFailed;
        }
        return report_usage(err, scenario_path, e);
    }

    try {
        replay_audit(result, config);
    } catch (const Error& e) {
        err << "self-audit failed: " << e.what() << '\n';
        return kExitFailed;
    }

    if (out_dir) {
        std::filesystem::path dir = *out_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            err << *out_dir << ": " << ec.message() << '\n';
            return kExitUsage;
        }
        try {
            write_file((dir / "events.log").string(), result.event_log);
            write_file((dir / "board.export").string(), result.board_export);
            write_file((dir / "timeline.csv").string(), result.timeline_csv);
            write_file((dir / "summary.txt").string(), result.summary_text);
        } catch (const Error& e) {
            return report_usage(err, *out_dir, e);
        }
    }

    out << result.summary_text;
    return kExitOk;
}

int cmd_board_verify(const std::string& board_path, std::ostream& out,
                     std::ostream& err) {
    std::string text;
    try {
        text = read_file(board_path);
    } catch (const Error& e) {
        return report_usage(err, board_path, e);
    }

    if (!verify_board_export(text, default_provider())) {
        out << "corrupt\n";
        return kExitFailed;
    }
    std::vector<BoardEntry> entries = import_board(text);
    out << "ok: " << entries.size() << " entries";
    if (!entries.empty()) out << ", head " << to_hex(entries.back().entry_digest);
    out << '\n';
    return kExitOk;
}

}  // namespace assemblynet::cli
