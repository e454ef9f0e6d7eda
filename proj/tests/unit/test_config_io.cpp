#include "degenhj/config.hpp"
#include "degenhj/error.hpp"
#include "degenhj/io.hpp"
#include "degenhj/records.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace degenhj;

namespace {

Config parse(const std::string& text) {
    std::istringstream is(text);
    return Config::parse(is, "test.cfg");
}

std::string error_of(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse("# header\n[solve]\nnx = 129   # nodes\nlo=-2.5\ncenter = 0.75, -0.75\n"
                           "flag = true\n\n[peakon]\nq = -5 5\n");
    CHECK(cfg.has_section("solve"));
    CHECK_FALSE(cfg.has_section("witness"));
    CHECK(cfg.section_line("peakon") == 8);
    auto s = cfg.section("solve");
    CHECK(s.get_size("nx") == 129);
    CHECK(s.get_double("lo") == -2.5);
    CHECK(s.get_doubles("center") == std::vector<double>{0.75, -0.75});
    CHECK(s.get_bool("flag"));
    CHECK(s.get_double("T", 2.0) == 2.0);
    CHECK(s.where("nx") == "test.cfg:3");
    CHECK_NOTHROW(s.finish());
    auto p = cfg.section("peakon");
    CHECK(p.get_doubles("q") == std::vector<double>{-5.0, 5.0});
    CHECK(cfg.text().find("[peakon]") != std::string::npos);

    auto missing = cfg.section("witness");
    CHECK_FALSE(missing.has("pairs"));
    CHECK(missing.get_string("lemma", std::string("chain")) == "chain");
    CHECK_THROWS_AS((void)missing.get_string("pairs"), Error);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(error_of("[a]\nx = 1\nx = 2\n").find("test.cfg:3") != std::string::npos);
    CHECK(error_of("x = 1\n").find("before any [section]") != std::string::npos);
    CHECK(error_of("[a]\njunk\n").find("test.cfg:2") != std::string::npos);
    CHECK(error_of("[a]\n[a]\n").find("duplicate section") != std::string::npos);
    CHECK(error_of("[a\n").find("unterminated") != std::string::npos);

    const auto cfg = parse("[a]\nn = 3.5\nm = -1\nb = maybe\nextra = 1\nv = 1,,x\n");
    auto s = cfg.section("a");
    CHECK_THROWS_AS((void)s.get_size("n"), Error);
    CHECK_THROWS_AS((void)s.get_size("m"), Error);
    CHECK_THROWS_AS((void)s.get_bool("b"), Error);
    CHECK_THROWS_AS((void)s.get_doubles("v"), Error);
    try {
        s.finish();
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("extra") != std::string::npos);
        CHECK(std::string(e.what()).find("test.cfg:5") != std::string::npos);
    }
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.0, -1.5, 1.0 / 3.0, 6.02214076e23, 5e-324, M_PI}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("hashing") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(255) == "00000000000000ff");
    CHECK(csv_header_comment("abc") == "# config_hash=abc\n");
}

TEST_CASE("records") {
    Vector v(2);
    v << 1.0, -2.0;
    const auto r = vector_record(v);
    CHECK(r.size() == 2);
    CHECK(r[1].get<double>() == -2.0);
    TimeLipschitzEstimate est{0.8, 1.0, 10};
    const auto t = time_lipschitz_record(est);
    CHECK(t["k_hat"].get<double>() == 0.8);
}
