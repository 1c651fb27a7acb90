#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavedepth/sparsity.hpp"

namespace wavedepth {

// Multiply-adds of one same-padded KxK convolution over an HxW grid, bias
// counted as the +1: H*W*(c_in*k^2 + 1)*c_out. Exact integers, overflow
// checked through a wide intermediate.
std::uint64_t mac_dense(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t h, std::size_t w);

// Sparse variant with a fractional sparsity level: round(psi*h*w) active
// pixels. Prefer mac_sparse_count when a concrete mask is available.
std::uint64_t mac_sparse(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t h, std::size_t w,
                         double psi);

// Exact form for a measured mask: active_pixels*(c_in*k^2 + 1)*c_out.
std::uint64_t mac_sparse_count(std::size_t c_in, std::size_t c_out, std::size_t k, std::uint64_t active_pixels);

// One decoder layer in a cost model. scale in {3,2,1,0} names the sparsity
// mask that gates it; -1 marks layers that always run dense. dilation > 0
// widens the gating mask by that radius before counting, matching stages
// that pre-compute the support of a following spatial convolution.
struct ArchLayer {
  std::string name;
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t c_in = 0;
  std::size_t c_out = 0;
  std::size_t k = 3;
  bool maskable = false;
  int scale = -1;
  unsigned dilation = 0;
};

struct ArchConfig {
  std::vector<ArchLayer> layers;
};

ArchConfig load_arch_config(const std::string& path);
void save_arch_config(const ArchConfig& cfg, const std::string& path);

// Decoder cost plan mirroring the published ResNet-encoder layer table
// (upconv/iconv merge layers, the two-conv disparity head and the
// four-conv wavelet heads) for a full-resolution h x w input.
ArchConfig default_arch_config(std::size_t h, std::size_t w);

struct MacEntry {
  std::string name;
  std::size_t h = 0, w = 0, c_in = 0, c_out = 0, k = 3;
  int scale = -1;
  bool maskable = false;
  double psi = 1.0;
  std::uint64_t active = 0;
  std::uint64_t mac_dense = 0;
  // Fractional psi makes this non-integral in general; exact when psi comes
  // from a measured mask.
  double mac_sparse = 0.0;
};

struct MacReport {
  std::vector<MacEntry> layers;

  std::uint64_t total_dense() const;
  double total_sparse() const;
  double ratio() const;  // total_sparse / total_dense, in [0,1]

  // CSV with one row per layer plus a TOTAL row; the ratio and the x2
  // FLOP conversion are emitted as trailing comment-style rows.
  std::string to_csv() const;
  std::string to_table() const;
};

// Evaluates a config against per-scale sparsity levels indexed by scale
// (psi[3], psi[2], psi[1], psi[0]); non-maskable layers count as psi = 1.
// Fractional psi keeps the sparse side as the exact real psi*dense, so the
// ratio stays linear in psi. Layer dilation is ignored here (it needs a
// concrete mask).
MacReport arch_report(const ArchConfig& cfg, const std::vector<double>& psi_per_scale);

// Same, but against measured masks indexed by scale; sparse MACs use exact
// active-pixel counts, dilations applied per layer. Mask dims must match
// each maskable layer's grid.
MacReport arch_report_from_masks(const ArchConfig& cfg, const std::vector<SparseMask>& mask_per_scale);

}  // namespace wavedepth
