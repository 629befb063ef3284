#pragma once

// Binary SpinorField files. All integers and floats are little-endian.
//
//   offset  size        content
//   0       4           magic "DLSF"
//   4       4   u32     format version (1)
//   8       8   f64     half-width L
//   16      4   u32     points per axis N
//   20      4   u32     mask kind (MaskKind numbering)
//   24      8   f64     mask parameter (R_outer, eps_in, or 0)
//   32      64 N^3      per cell, x-fastest: Re f1, Im f1, ..., Re f4, Im f4 as f64
//   ...     N^3         per cell, x-fastest: u8 mask flag (0 or 1)
//
// The mask bytes make derived (custom) masks round-trip exactly.

#include "diraclab/spinor_field.hpp"

#include <string>

namespace diraclab {

void write_field(const SpinorField& field, const std::string& path);
/// Throws std::runtime_error on a bad magic, version, size or mask flag.
SpinorField read_field(const std::string& path);

/// Grid metadata (half_width, points, spacing, mask kind/parameter/cells) as a JSON document.
std::string field_sidecar_json(const SpinorField& field);
/// Writes `path` and its sidecar `path + ".json"`.
void export_field(const SpinorField& field, const std::string& path);

}  // namespace diraclab
