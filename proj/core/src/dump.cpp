#include "slab/dump.hpp"

#include "slab/errors.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace slab {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'A', 'B'};
constexpr std::size_t kHeaderSize = 48;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xff);
}

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back((v >> (8 * i)) & 0xff);
}

void put_f64(std::vector<unsigned char>& buf, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(buf, v);
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double get_f64(const unsigned char* p) {
    std::uint64_t v = get_u64(p);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

std::vector<unsigned char> read_bytes(const std::string& path, std::size_t count,
                                      bool exact_total) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open dump file: " + path);
    std::vector<unsigned char> buf(count);
    f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count));
    if (std::size_t(f.gcount()) != count)
        throw ConfigError("truncated dump (wanted " + std::to_string(count) + " bytes, got " +
                          std::to_string(f.gcount()) + "): " + path);
    if (exact_total) {
        f.peek();
        if (!f.eof()) throw ConfigError("trailing bytes after payload: " + path);
    }
    return buf;
}

DumpHeader parse_header(const unsigned char* p, const std::string& path) {
    if (std::memcmp(p, kMagic, 4) != 0)
        throw ConfigError("bad magic at offset 0 (not a SLAB dump): " + path);
    DumpHeader h;
    h.version = get_u32(p + 4);
    if (h.version != 1)
        throw ConfigError("unsupported SLAB version at offset 4: " + std::to_string(h.version));
    h.kind_code = get_u32(p + 8);
    if (h.kind_code > 1)
        throw ConfigError("bad field kind at offset 8: " + std::to_string(h.kind_code));
    h.encoding = get_u32(p + 12);
    if (h.encoding != 0)
        throw ConfigError("unknown payload encoding at offset 12: " + std::to_string(h.encoding));
    h.n_points = get_u64(p + 16);
    h.x_min = get_f64(p + 24);
    h.x_max = get_f64(p + 32);
    h.time = get_f64(p + 40);
    return h;
}

} // namespace

void write_dump(const FieldState& state, const std::string& path) {
    std::vector<unsigned char> buf;
    std::size_t per = state.kind == FieldKind::Complex ? 2 : 1;
    buf.reserve(kHeaderSize + state.psi.size() * 8 + state.pi.size() * 8);
    buf.insert(buf.end(), kMagic, kMagic + 4);
    put_u32(buf, 1);
    put_u32(buf, state.kind == FieldKind::Complex ? 1 : 0);
    put_u32(buf, 0);
    put_u64(buf, std::uint64_t(state.grid.n_points));
    put_f64(buf, state.grid.x_min);
    put_f64(buf, state.grid.x_max);
    put_f64(buf, state.time);
    if (state.psi.size() != per * state.grid.n_points ||
        state.pi.size() != per * state.grid.n_points)
        throw ConfigError("field arrays inconsistent with the grid");
    for (double d : state.psi) put_f64(buf, d);
    for (double d : state.pi) put_f64(buf, d);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write dump file: " + path);
    f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!f) throw ConfigError("short write: " + path);
}

DumpHeader inspect_dump(const std::string& path) {
    std::vector<unsigned char> buf = read_bytes(path, kHeaderSize, false);
    return parse_header(buf.data(), path);
}

FieldState read_dump(const std::string& path) {
    DumpHeader h = inspect_dump(path);
    std::size_t per = h.kind_code == 1 ? 2 : 1;
    std::size_t doubles = 2 * per * h.n_points;
    std::vector<unsigned char> buf = read_bytes(path, kHeaderSize + doubles * 8, true);

    FieldState s = FieldState::zero(Grid1D::make(h.x_min, h.x_max, int(h.n_points)),
                                    h.kind_code == 1 ? FieldKind::Complex : FieldKind::Real);
    s.time = h.time;
    const unsigned char* p = buf.data() + kHeaderSize;
    for (std::size_t i = 0; i < s.psi.size(); ++i, p += 8) s.psi[i] = get_f64(p);
    for (std::size_t i = 0; i < s.pi.size(); ++i, p += 8) s.pi[i] = get_f64(p);
    return s;
}

} // namespace slab
