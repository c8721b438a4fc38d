#include "doctest.h"

#include "slab/dump.hpp"
#include "slab/errors.hpp"
#include "slab/grid.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

using namespace slab;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path(name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

FieldState awkward_state(FieldKind kind) {
    Grid1D g = Grid1D::with_spacing(-3.0, 5.0, 0.25);
    FieldState s = FieldState::zero(g, kind);
    s.time = 2.5;
    for (int k = 0; k < g.n_points; ++k) {
        s.psi_re(k) = 1.0 / (3.0 + k);
        s.pi_re(k) = -7.0 / (11.0 + k);
        if (kind == FieldKind::Complex) {
            s.psi_im(k) = 0.1 * k - 1.0 / 7.0;
            s.pi_im(k) = 1e-17 * (k - 8);
        }
    }
    return s;
}

std::vector<char> slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(bool(f));
    return std::vector<char>(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("real dump round trips bit-exactly") {
    TempFile tf("test_dump_real.slab");
    FieldState s = awkward_state(FieldKind::Real);
    write_dump(s, tf.path);
    FieldState r = read_dump(tf.path);
    REQUIRE(r.kind == FieldKind::Real);
    REQUIRE(r.grid.same_as(s.grid));
    CHECK(r.time == s.time);
    REQUIRE(r.psi.size() == s.psi.size());
    REQUIRE(r.pi.size() == s.pi.size());
    CHECK(std::memcmp(r.psi.data(), s.psi.data(), s.psi.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(r.pi.data(), s.pi.data(), s.pi.size() * sizeof(double)) == 0);
}

TEST_CASE("complex dump round trips bit-exactly") {
    TempFile tf("test_dump_complex.slab");
    FieldState s = awkward_state(FieldKind::Complex);
    write_dump(s, tf.path);
    FieldState r = read_dump(tf.path);
    REQUIRE(r.kind == FieldKind::Complex);
    REQUIRE(r.grid.same_as(s.grid));
    CHECK(std::memcmp(r.psi.data(), s.psi.data(), s.psi.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(r.pi.data(), s.pi.data(), s.pi.size() * sizeof(double)) == 0);
}

TEST_CASE("header inspection reads only the metadata") {
    TempFile tf("test_dump_inspect.slab");
    FieldState s = awkward_state(FieldKind::Complex);
    write_dump(s, tf.path);
    DumpHeader h = inspect_dump(tf.path);
    CHECK(h.version == 1);
    CHECK(h.kind_code == 1);
    CHECK(h.encoding == 0);
    CHECK(h.n_points == std::uint64_t(s.grid.n_points));
    CHECK(h.x_min == s.grid.x_min);
    CHECK(h.x_max == s.grid.x_max);
    CHECK(h.time == 2.5);
}

TEST_CASE("the byte layout is frozen") {
    TempFile tf("test_dump_layout.slab");
    Grid1D g = Grid1D::make(-1.0, 1.0, 3);
    FieldState s = FieldState::zero(g, FieldKind::Real);
    s.time = 0.75;
    s.psi_re(0) = 1.5;
    s.psi_re(1) = -2.25;
    s.psi_re(2) = 1e-300;
    s.pi_re(0) = 4.0;
    s.pi_re(1) = 0.0;
    s.pi_re(2) = -0.5;
    write_dump(s, tf.path);

    std::vector<char> bytes = slurp(tf.path);
    REQUIRE(bytes.size() == std::size_t(48 + 6 * 8));
    CHECK(std::memcmp(bytes.data(), "SLAB", 4) == 0);
    std::uint32_t u32;
    std::memcpy(&u32, bytes.data() + 4, 4);
    CHECK(u32 == 1); // version
    std::memcpy(&u32, bytes.data() + 8, 4);
    CHECK(u32 == 0); // real field
    std::memcpy(&u32, bytes.data() + 12, 4);
    CHECK(u32 == 0); // raw f64 payload
    std::uint64_t u64;
    std::memcpy(&u64, bytes.data() + 16, 8);
    CHECK(u64 == 3);
    double d;
    std::memcpy(&d, bytes.data() + 24, 8);
    CHECK(d == -1.0);
    std::memcpy(&d, bytes.data() + 32, 8);
    CHECK(d == 1.0);
    std::memcpy(&d, bytes.data() + 40, 8);
    CHECK(d == 0.75);
    double expect[6] = {1.5, -2.25, 1e-300, 4.0, 0.0, -0.5};
    for (int i = 0; i < 6; ++i) {
        std::memcpy(&d, bytes.data() + 48 + 8 * i, 8);
        CHECK(d == expect[i]);
    }
}

TEST_CASE("corrupt dumps are rejected") {
    TempFile tf("test_dump_corrupt.slab");
    FieldState s = awkward_state(FieldKind::Real);
    write_dump(s, tf.path);
    std::vector<char> bytes = slurp(tf.path);

    // truncated payload
    {
        std::ofstream f(tf.path, std::ios::binary | std::ios::trunc);
        f.write(bytes.data(), 60);
    }
    CHECK_THROWS_AS(read_dump(tf.path), ConfigError);

    // bad magic
    {
        std::vector<char> bad = bytes;
        bad[0] = 'X';
        std::ofstream f(tf.path, std::ios::binary | std::ios::trunc);
        f.write(bad.data(), std::streamsize(bad.size()));
    }
    CHECK_THROWS_AS(read_dump(tf.path), ConfigError);
    CHECK_THROWS_AS(inspect_dump(tf.path), ConfigError);

    // unsupported version
    {
        std::vector<char> bad = bytes;
        bad[4] = 9;
        std::ofstream f(tf.path, std::ios::binary | std::ios::trunc);
        f.write(bad.data(), std::streamsize(bad.size()));
    }
    CHECK_THROWS_AS(read_dump(tf.path), ConfigError);

    // trailing garbage
    {
        std::ofstream f(tf.path, std::ios::binary | std::ios::trunc);
        f.write(bytes.data(), std::streamsize(bytes.size()));
        f.write("zz", 2);
    }
    CHECK_THROWS_AS(read_dump(tf.path), ConfigError);

    CHECK_THROWS_AS(read_dump("no_such_file_anywhere.slab"), ConfigError);
}
