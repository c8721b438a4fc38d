#include "doctest.h"

#include "slab/config.hpp"
#include "slab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

using namespace slab;

TEST_CASE("parsing key=value text") {
    KeyValueMap kv = parse_config_text("a=1\n"
                                       "  b =  two words  # trailing comment\n"
                                       "\n"
                                       "# full-line comment\n"
                                       "c.d_e = -3.5\n"
                                       "a = 2\n");
    REQUIRE(kv.size() == 3);
    CHECK(kv["a"] == "2"); // last assignment wins
    CHECK(kv["b"] == "two words");
    CHECK(kv["c.d_e"] == "-3.5");

    CHECK_THROWS_AS(parse_config_text("just a line"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("= value"), ConfigError);
    // the error message pinpoints the line
    try {
        parse_config_text("ok = 1\nbroken line\n");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("formatting is sorted and round trips") {
    KeyValueMap kv;
    kv["zeta"] = "1";
    kv["alpha"] = "x y";
    kv["mid"] = "-2";
    std::string text = format_config_text(kv);
    CHECK(text == "alpha = x y\nmid = -2\nzeta = 1\n");
    CHECK(parse_config_text(text) == kv);

    save_config_file(kv, "test_config_tmp.cfg");
    CHECK(load_config_file("test_config_tmp.cfg") == kv);
    std::remove("test_config_tmp.cfg");
    CHECK_THROWS_AS(load_config_file("definitely_missing.cfg"), ConfigError);
}

TEST_CASE("typed getters with fallbacks and validation") {
    KeyValueMap kv = parse_config_text("x = 1.5\nn = -42\nflag = yes\nname = run7\nbadnum = 1.5x\n");
    CHECK(get_double(kv, "x", 0.0) == 1.5);
    CHECK(get_double(kv, "missing", 2.25) == 2.25);
    CHECK(get_int(kv, "n", 0) == -42);
    CHECK(get_int(kv, "missing", 7) == 7);
    CHECK(get_bool(kv, "flag", false));
    CHECK(get_bool(kv, "missing", true));
    CHECK(get_string(kv, "name", "") == "run7");
    CHECK(get_string(kv, "missing", "dflt") == "dflt");

    CHECK_THROWS_AS(get_double(kv, "badnum", 0.0), ConfigError);
    CHECK_THROWS_AS(get_int(kv, "x", 0), ConfigError);   // "1.5" is not an integer
    CHECK_THROWS_AS(get_bool(kv, "name", false), ConfigError);

    for (const char* t : {"true", "1", "yes", "on"}) {
        KeyValueMap m;
        m["k"] = t;
        CHECK(get_bool(m, "k", false));
    }
    for (const char* f : {"false", "0", "no", "off"}) {
        KeyValueMap m;
        m["k"] = f;
        CHECK(!get_bool(m, "k", true));
    }
}

TEST_CASE("overrides validate all keys before applying any") {
    KeyValueMap base;
    base["dt"] = "0.01";
    base["t_end"] = "10";
    std::set<std::string> allowed = {"dt", "t_end", "seed"};

    apply_overrides(base, {"dt=0.02", "seed=5"}, allowed);
    CHECK(base["dt"] == "0.02");
    CHECK(base["seed"] == "5");

    KeyValueMap before = base;
    try {
        apply_overrides(base, {"dt=0.5", "bogus=1", "alsobad=2", "plainword"}, allowed);
        FAIL("expected invalid keys to throw");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("alsobad") != std::string::npos);
        CHECK(msg.find("plainword") != std::string::npos);
    }
    CHECK(base == before); // nothing applied when any key is invalid
}

TEST_CASE("double rendering is shortest and exact") {
    CHECK(format_double(80.0) == "80");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-3.0) == "-3");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");

    for (double v : {0.1, 1.0 / 3.0, 0.9428090415820635, -2.718281828459045, 1e-300, 1e300,
                     6.62607015e-34, 123456789.123456789, 5e-324, -7.25}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    // integers beyond exact long-long range still round trip
    double big = 1e16;
    CHECK(std::stod(format_double(big)) == big);
}
