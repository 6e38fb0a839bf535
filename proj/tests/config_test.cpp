#include <doctest.h>

#include <cstdio>

#include "assemblynet/config.hpp"
#include "assemblynet/errors.hpp"

using namespace assemblynet;

TEST_CASE("sectioned key-value files parse with comments and blanks") {
    ConfigFile file = parse_config(
        "# top comment\n"
        "alpha = 1\n"
        "\n"
        "name = some value with spaces\n"
        "[first]\n"
        "rate = 17/2\n"
        "on = true\n"
        "[first.nested]\n"
        "x = 2\n");

    CHECK(file.get_int("", "alpha") == 1);
    CHECK(file.get_string("", "name") == "some value with spaces");
    CHECK(file.get_ratio("first", "rate") == Ratio(17, 2));
    CHECK(file.get_bool("first", "on"));
    CHECK(file.has_section("first.nested"));
    CHECK(file.get_int_or("first", "absent", 9) == 9);
    CHECK(file.sections_with_prefix("first") ==
          std::vector<std::string>{"first", "first.nested"});
}

TEST_CASE("malformed lines are rejected with their line number") {
    auto line_of = [](const char* text) {
        try {
            parse_config(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };

    CHECK(line_of("a = 1\nb 2\n") == 2);             // missing equals
    CHECK(line_of("a = 1\na = 2\n") == 2);           // duplicate key
    CHECK(line_of("[s]\nx=1\n[s]\n") == 3);          // duplicate section
    CHECK(line_of("Key = 1\n") == 1);                // uppercase key
    CHECK(line_of("a =\n") == 1);                    // empty value
    CHECK(line_of("[Bad Section]\n") == 1);
    CHECK(line_of("a = 1 # trailing comments are not comments\n") == 0);

    ConfigFile trailing = parse_config("a = 1 # kept\n");
    CHECK(trailing.get_string("", "a") == "1 # kept");
}

TEST_CASE("typed accessors validate their conversions") {
    ConfigFile file = parse_config("n = 12\nr = 0.5\nflag = false\nword = say\n");
    CHECK(file.get_int("", "n") == 12);
    CHECK(file.get_ratio("", "r") == Ratio(1, 2));
    CHECK_FALSE(file.get_bool("", "flag"));
    CHECK_THROWS_AS(file.get_int("", "word"), ParseError);
    CHECK_THROWS_AS(file.get_bool("", "n"), ParseError);
    CHECK_THROWS_AS(file.get_string("", "missing"), ParseError);

    CHECK_THROWS_AS(file.require_known_keys("", {"n", "r", "flag"}), ParseError);
    file.require_known_keys("", {"n", "r", "flag", "word"});
    file.require_known_keys("absent_section", {"anything"});
}

TEST_CASE("files round-trip through the filesystem helpers") {
    std::string path = "config_roundtrip.tmp";
    write_file(path, "x = 1\n");
    CHECK(read_file(path) == "x = 1\n");
    CHECK_THROWS_AS(read_file("does/not/exist.cfg"), Error);
    std::remove(path.c_str());
}
