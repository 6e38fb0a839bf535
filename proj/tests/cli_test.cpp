#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>

#include "assemblynet/cli.hpp"
#include "assemblynet/config.hpp"
#include "assemblynet/sim.hpp"

using namespace assemblynet;
namespace fs = std::filesystem;

namespace {

/// Scratch directory per test case, removed on destruction.
struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("assemblynet-cli-" + std::to_string(++counter) + "-" +
                std::to_string(static_cast<unsigned long>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }

    std::string file(const std::string& name, const std::string& content) const {
        std::string full = (path / name).string();
        write_file(full, content);
        return full;
    }
};

const std::string kCompliantManifest =
    "assembly_id = 000102030405060708090a0b0c0d0e0f\n"
    "opinion_statement = stop the retention policy\n"
    "start_time = 345600\n"
    "end_time = 1209600\n"
    "per_credential_rate = 1\n"
    "critical_mass_min = 2\n"
    "revocation_k = 2\n"
    "revocation_n = 3\n"
    "organizer_pseudonyms = "
    "4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f4f\n"
    "board_mirroring = true\n"
    "supervisor_channel = true\n"
    "\n"
    "[target]\n"
    "address = registry.example\n"
    "capacity = 50\n"
    "is_general_interest = false\n"
    "size_class = medium\n"
    "\n"
    "[attestations]\n"
    "subsidiarity = talks were exhausted first\n"
    "proportionality = rate capped to one request per second\n"
    "no_coercion = each person decides alone\n"
    "no_coercion_declared = true\n";

const std::string kSmallScenario =
    "seed = 21\n"
    "duration = 20\n"
    "participants = 2\n"
    "injunction_window = 10\n"
    "[target]\n"
    "capacity = 5\n";

std::string without_line(std::string text, const std::string& prefix) {
    std::size_t pos = text.find(prefix);
    REQUIRE(pos != std::string::npos);
    text.erase(pos, text.find('\n', pos) - pos + 1);
    return text;
}

struct Streams {
    std::ostringstream out, err;
};

}  // namespace

TEST_CASE("check prints one verdict per requirement and exits by the overall result") {
    TempDir dir;
    Streams s;

    SUBCASE("a compliant manifest") {
        int rc = cli::cmd_check(dir.file("good.manifest", kCompliantManifest), s.out, s.err);
        CHECK(rc == cli::kExitOk);
        std::string text = s.out.str();
        CHECK(text.find("visibility: pass") != std::string::npos);
        CHECK(text.find("no coercion: attested") != std::string::npos);
        CHECK(text.find("overall: compliant") != std::string::npos);
        CHECK(s.err.str().empty());
    }

    SUBCASE("a manifest with no stated opinion") {
        std::string text = without_line(kCompliantManifest, "opinion_statement");
        int rc = cli::cmd_check(dir.file("mute.manifest", text), s.out, s.err);
        CHECK(rc == cli::kExitFailed);
        CHECK(s.out.str().find("expression of opinion: fail") != std::string::npos);
        CHECK(s.out.str().find("overall: non-compliant") != std::string::npos);
    }

    SUBCASE("a malformed file names its line on stderr") {
        std::string twice = kCompliantManifest + "board_mirroring = true\n";
        std::string path = dir.file("dup.manifest", twice);
        int rc = cli::cmd_check(path, s.out, s.err);
        CHECK(rc == cli::kExitUsage);
        CHECK(s.err.str().find(path + ":") != std::string::npos);
        CHECK(s.out.str().empty());
    }

    SUBCASE("a missing file") {
        CHECK(cli::cmd_check((dir.path / "absent").string(), s.out, s.err) ==
              cli::kExitUsage);
        CHECK_FALSE(s.err.str().empty());
    }
}

TEST_CASE("simulate prints the summary and writes the run artifacts") {
    TempDir dir;
    Streams s;
    std::string scenario = dir.file("small.scenario", kSmallScenario);
    std::string artifacts = (dir.path / "artifacts").string();

    int rc = cli::cmd_simulate(scenario, artifacts, std::nullopt, s.out, s.err);
    CHECK(rc == cli::kExitOk);
    CHECK(s.err.str().empty());
    CHECK(s.out.str().find("availability = ") != std::string::npos);
    CHECK(s.out.str().find("commenced at 10") != std::string::npos);

    std::string events = read_file(artifacts + "/events.log");
    CHECK_FALSE(parse_event_log(events).empty());
    CHECK(read_file(artifacts + "/summary.txt") == s.out.str());
    CHECK(read_file(artifacts + "/timeline.csv").starts_with("tick,queue,state\n"));

    Streams v;
    CHECK(cli::cmd_board_verify(artifacts + "/board.export", v.out, v.err) ==
          cli::kExitOk);
    CHECK(v.out.str().starts_with("ok: "));
}

TEST_CASE("the seed is taken from the flag, then the file, then the environment") {
    TempDir dir;
    ::unsetenv(cli::kSeedEnvVar);

    auto events_of = [&](const std::string& name, const std::string& text,
                         std::optional<std::uint64_t> seed) {
        Streams s;
        std::string out_dir = (dir.path / (name + ".out")).string();
        REQUIRE(cli::cmd_simulate(dir.file(name, text), out_dir, seed, s.out, s.err) ==
                cli::kExitOk);
        return read_file(out_dir + "/events.log");
    };

    std::string seedless = without_line(kSmallScenario, "seed");

    // The flag overrides the file's own seed.
    std::string with_99 = "seed = 99\n" + seedless;
    CHECK(events_of("flag.scenario", kSmallScenario, 99) ==
          events_of("file99.scenario", with_99, std::nullopt));
    CHECK(events_of("file21.scenario", kSmallScenario, std::nullopt) !=
          events_of("file99b.scenario", with_99, std::nullopt));

    // The file's seed beats the environment.
    ::setenv(cli::kSeedEnvVar, "5", 1);
    CHECK(events_of("envlose.scenario", kSmallScenario, std::nullopt) ==
          events_of("plain.scenario", kSmallScenario, std::nullopt));

    // The environment fills in when nothing else names a seed.
    ::setenv(cli::kSeedEnvVar, "99", 1);
    CHECK(events_of("envonly.scenario", seedless, std::nullopt) ==
          events_of("file99c.scenario", with_99, std::nullopt));

    ::setenv(cli::kSeedEnvVar, "12x", 1);
    Streams bad;
    CHECK(cli::cmd_simulate(dir.file("badenv.scenario", seedless), std::nullopt,
                            std::nullopt, bad.out, bad.err) == cli::kExitUsage);
    CHECK(bad.err.str().find(cli::kSeedEnvVar) != std::string::npos);

    ::unsetenv(cli::kSeedEnvVar);
    Streams none;
    CHECK(cli::cmd_simulate(dir.file("noseed.scenario", seedless), std::nullopt,
                            std::nullopt, none.out, none.err) == cli::kExitUsage);
    CHECK(none.err.str().find("seed") != std::string::npos);
}

TEST_CASE("simulate distinguishes bad input from a failed assembly") {
    TempDir dir;
    Streams s;

    // The scenario ends inside [target], so the appended key lands there.
    std::string general_interest = kSmallScenario + "is_general_interest = true\n";
    int rc = cli::cmd_simulate(dir.file("gi.scenario", general_interest), std::nullopt,
                               std::nullopt, s.out, s.err);
    CHECK(rc == cli::kExitFailed);
    CHECK(s.err.str().find("proportionality") != std::string::npos);

    Streams bad;
    CHECK(cli::cmd_simulate(dir.file("broken.scenario", "duration five\n"), std::nullopt,
                            std::nullopt, bad.out, bad.err) == cli::kExitUsage);

    Streams missing;
    CHECK(cli::cmd_simulate((dir.path / "absent").string(), std::nullopt, std::nullopt,
                            missing.out, missing.err) == cli::kExitUsage);
}

TEST_CASE("board-verify tells an intact export from a corrupted one") {
    TempDir dir;
    std::string scenario = dir.file("run.scenario", kSmallScenario);
    std::string artifacts = (dir.path / "artifacts").string();
    Streams s;
    REQUIRE(cli::cmd_simulate(scenario, artifacts, std::nullopt, s.out, s.err) ==
            cli::kExitOk);

    std::string board_path = artifacts + "/board.export";
    std::string board = read_file(board_path);
    REQUIRE_FALSE(board.empty());

    Streams ok;
    CHECK(cli::cmd_board_verify(board_path, ok.out, ok.err) == cli::kExitOk);
    CHECK(ok.out.str().find("entries, head ") != std::string::npos);

    board[board.size() / 2] ^= 0x01;
    std::string corrupt_path = dir.file("corrupt.export", board);
    Streams corrupt;
    CHECK(cli::cmd_board_verify(corrupt_path, corrupt.out, corrupt.err) ==
          cli::kExitFailed);
    CHECK(corrupt.out.str() == "corrupt\n");

    Streams empty;
    CHECK(cli::cmd_board_verify(dir.file("empty.export", ""), empty.out, empty.err) ==
          cli::kExitOk);
    CHECK(empty.out.str() == "ok: 0 entries\n");

    Streams missing;
    CHECK(cli::cmd_board_verify((dir.path / "absent").string(), missing.out,
                                missing.err) == cli::kExitUsage);
}
