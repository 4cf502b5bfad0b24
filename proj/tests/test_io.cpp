#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dmu/io.hpp"
#include "dmu/prng.hpp"

using namespace dmu;

TEST_CASE("shortest round-trip float formatting") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-13, -2.5e17, 4.55e-08, 0.0, -0.0,
                           1.7976931348623157e308}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    Xoshiro256pp rng(3);
    for (int i = 0; i < 5000; ++i) {
        const double v = (rng.uniform01() - 0.5) *
                         std::exp((rng.uniform01() - 0.5) * 600.0);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK_THROWS(parse_double("1.2.3"));
    CHECK_THROWS(parse_double("x"));
}

TEST_CASE("atomic write then read") {
    const std::string path = "io_test_tmp.txt";
    write_text_atomic(path, "hello\nworld\n");
    CHECK(read_text(path) == "hello\nworld\n");
    CHECK(!std::filesystem::exists(path + ".tmp"));
    write_text_atomic(path, "second");
    CHECK(read_text(path) == "second");
    std::remove(path.c_str());
    CHECK_THROWS(read_text(path));
}

TEST_CASE("csv line splitting") {
    const auto f = split_csv_line("a,b,,d");
    REQUIRE(f.size() == 4);
    CHECK(f[0] == "a");
    CHECK(f[2] == "");
    CHECK(split_csv_line("single").size() == 1);
}

TEST_CASE("timestamps look like iso8601 utc") {
    const std::string t = iso8601_utc_now();
    REQUIRE(t.size() == 20);
    CHECK(t[4] == '-');
    CHECK(t[10] == 'T');
    CHECK(t.back() == 'Z');
}
