#pragma once

#include "slab/grid.hpp"

#include <cstdint>
#include <string>

namespace slab {

/** Header of the "SLAB" field-dump format (fixed little-endian layout):
 *    offset  0  "SLAB"
 *            4  u32 version (= 1)
 *            8  u32 field kind (0 real, 1 complex)
 *           12  u32 payload encoding (0 = raw f64)
 *           16  u64 n_points
 *           24  f64 x_min
 *           32  f64 x_max
 *           40  f64 time
 *           48  payload: psi then pi, each n_points*(1|2) f64
 *  (complex interleaved re, im). Round trips are bit-exact. */
struct DumpHeader {
    std::uint32_t version = 1;
    std::uint32_t kind_code = 0;
    std::uint32_t encoding = 0;
    std::uint64_t n_points = 0;
    double x_min = 0.0, x_max = 0.0, time = 0.0;
};

void write_dump(const FieldState& state, const std::string& path);
FieldState read_dump(const std::string& path);

/** Header only; does not load the payload. */
DumpHeader inspect_dump(const std::string& path);

} // namespace slab
