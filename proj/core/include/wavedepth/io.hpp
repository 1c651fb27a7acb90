#pragma once

#include <string>

#include "wavedepth/sparsity.hpp"
#include "wavedepth/tensor.hpp"

namespace wavedepth {

// Grayscale PFM ("Pf"). Rows are stored bottom-to-top in the file and
// converted to top-to-bottom in memory; a negative scale marks little-endian
// payloads. Color "PF" files are rejected. Non-finite payload values are
// rejected to keep the Tensor finiteness invariant.
Tensor read_pfm(const std::string& path);

// Writes little-endian grayscale PFM with scale -1.0. Requires channels == 1.
void write_pfm(const Tensor& t, const std::string& path);

// WMDT container: magic "WMDT", u32 version = 1, u32 ndim in {2,3}, ndim u32
// dims, float32 row-major payload. All integers and floats little-endian.
// ndim 2 loads as channels == 1; a rank-2 tensor writes as ndim 2.
Tensor read_tensor(const std::string& path);
void write_tensor(const Tensor& t, const std::string& path);

// Masks as binary PGM (P5, maxval 255): active = 255, inactive = 0. Any
// nonzero byte reads back as active.
SparseMask read_mask(const std::string& path);
void write_mask(const SparseMask& m, const std::string& path);

}  // namespace wavedepth
