#pragma once

#include <vector>

#include "wavedepth/tensor.hpp"

namespace wavedepth {

// One set of high-frequency detail bands. lh responds to horizontal edges,
// hl to vertical edges, hh to diagonals; all three share dimensions and sit
// at half the resolution of the band they refine.
struct WaveletLevel {
  Tensor lh;
  Tensor hl;
  Tensor hh;
};

// Coarsest low-pass band plus detail triples ordered coarsest to finest.
// levels[0] matches ll's dimensions; each following level doubles them.
struct CoefficientPyramid {
  Tensor ll;
  std::vector<WaveletLevel> levels;

  std::size_t full_height() const { return ll.height() << levels.size(); }
  std::size_t full_width() const { return ll.width() << levels.size(); }
};

struct DwtBands {
  Tensor ll;
  Tensor lh;
  Tensor hl;
  Tensor hh;
};

// Orthonormal 2D Haar analysis of one level. For each non-overlapping 2x2
// block [[a,b],[c,d]]: ll=(a+b+c+d)/2, lh=(a+b-c-d)/2, hl=(a-b+c-d)/2,
// hh=(a-b-c+d)/2. Multi-channel input transforms per channel. Requires even
// height and width.
DwtBands dwt_level(const Tensor& x);

// Exact inverse of dwt_level: a=(ll+lh+hl+hh)/2, b=(ll+lh-hl-hh)/2,
// c=(ll-lh+hl-hh)/2, d=(ll-lh-hl+hh)/2. All four bands must share dimensions.
Tensor idwt_level(const Tensor& ll, const Tensor& lh, const Tensor& hl, const Tensor& hh);

// Recursive analysis: j applications of dwt_level to the running low-pass
// band. Dimensions must be divisible by 2^j.
CoefficientPyramid dwt_pyramid(const Tensor& x, unsigned j);

// Recursive synthesis, coarsest to finest.
Tensor idwt_pyramid(const CoefficientPyramid& pyr);

void validate_pyramid(const CoefficientPyramid& pyr);

// Directory form: ll.wmdt, level{j}_{lh,hl,hh}.wmdt and a JSON manifest with
// the level count and dimensions.
void save_pyramid(const CoefficientPyramid& pyr, const std::string& dir);
CoefficientPyramid load_pyramid(const std::string& dir);

}  // namespace wavedepth
