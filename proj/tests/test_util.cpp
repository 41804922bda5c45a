#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "dare/csv.hpp"
#include "dare/error.hpp"
#include "dare/image.hpp"
#include "dare/rng.hpp"

using namespace dare;

TEST_CASE("rng is deterministic per seed") {
    Rng a(42), b(42), c(43);
    bool differed = false;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) differed = true;
    }
    CHECK(differed);
}

TEST_CASE("uniform stays in [0,1) and covers the range") {
    Rng rng(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform_int is inclusive and hits every value") {
    Rng rng(7);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.uniform_int(-2, 3);
        CHECK(v >= -2);
        CHECK(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 6);
    CHECK(rng.uniform_int(5, 5) == 5);
    CHECK_THROWS_AS(rng.uniform_int(2, 1), ConfigError);
}

TEST_CASE("normal has roughly standard moments") {
    Rng rng(3);
    const int n = 50000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("bernoulli endpoints are exact") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("shuffle permutes and is seed-deterministic") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    auto a = v, b = v;
    Rng r1(11), r2(11);
    r1.shuffle(a);
    r2.shuffle(b);
    CHECK(a == b);
    CHECK(a != v);   // astronomically unlikely to be identity
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == v);
}

TEST_CASE("mix_seed separates streams") {
    CHECK(mix_seed(1) == mix_seed(1));
    CHECK(mix_seed(1) != mix_seed(2));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
}

TEST_CASE("csv parses quoting, embedded separators, and CRLF") {
    const std::string text =
        "a,b,c\r\n"
        "1,\"two, and\nthree\",\"say \"\"hi\"\"\"\n"
        "4,,6\n";
    const CsvTable t = parse_csv(text);
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "two, and\nthree");
    CHECK(t.rows[0][2] == "say \"hi\"");
    CHECK(t.rows[1][1] == "");
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("missing"), BadCsvError);
}

TEST_CASE("csv rejects ragged rows") {
    CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), BadCsvError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), BadCsvError);
}

TEST_CASE("csv escape and join round-trip") {
    const std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "with\nnewline",
                                         ""};
    const CsvTable t = parse_csv("a,b,c,d,e\n" + csv_join(fields) + "\n");
    CHECK(t.rows.at(0) == fields);
}

TEST_CASE("read_csv reports a missing file") {
    CHECK_THROWS_AS(read_csv("/nonexistent/definitely/not-here.csv"), MissingFileError);
}

TEST_CASE("u8/float image conversion round-trips") {
    ImageU8 img(3, 5);
    Rng rng(5);
    for (auto& p : img.px) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const ImageU8 back = quantize(to_float(img));
    CHECK(back.px == img.px);
    CHECK(back.height == 3);
    CHECK(back.width == 5);
}

TEST_CASE("quantize clamps out-of-range floats") {
    ImageF f(1, 3);
    f.px = {-0.5f, 0.5f, 1.5f};
    const ImageU8 q = quantize(f);
    CHECK(q.px == std::vector<std::uint8_t>{0, 128, 255});
}

TEST_CASE("image at() addresses row-major") {
    ImageU8 img(2, 3);
    img.at(1, 2) = 9;
    CHECK(img.px[5] == 9);
}
