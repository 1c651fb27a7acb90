#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wavedepth/error.hpp"

namespace wavedepth {

// Dense row-major float grid, channel-minor: index = (y*width + x)*channels + c.
// Single channel for depth/disparity maps, three for wavelet-coefficient
// triples, arbitrary for feature maps. Operations in this library treat
// tensors as immutable values and return new ones.
class Tensor {
 public:
  Tensor() = default;

  Tensor(std::size_t height, std::size_t width, std::size_t channels = 1)
      : height_(height), width_(width), channels_(channels), data_(height * width * channels, 0.0f) {
    if (height == 0 || width == 0 || channels == 0)
      fail(Errc::invalid_argument, "tensor dimensions must be positive");
  }

  Tensor(std::size_t height, std::size_t width, std::size_t channels, std::vector<float> data)
      : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (height == 0 || width == 0 || channels == 0)
      fail(Errc::invalid_argument, "tensor dimensions must be positive");
    if (data_.size() != height * width * channels)
      fail(Errc::shape_mismatch, "payload length does not match dimensions");
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& at(std::size_t y, std::size_t x, std::size_t c = 0) {
    return data_[(y * width_ + x) * channels_ + c];
  }
  const float& at(std::size_t y, std::size_t x, std::size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  float* data() noexcept { return data_.data(); }
  const float* data() const noexcept { return data_.data(); }
  std::vector<float>& storage() noexcept { return data_; }
  const std::vector<float>& storage() const noexcept { return data_; }

  bool same_shape(const Tensor& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<float> data_;
};

// Reductions run in a fixed sequential order (row-major, channel-minor), so
// repeated calls on identical input are bitwise reproducible.
float tensor_min(const Tensor& t);
float tensor_max(const Tensor& t);
double tensor_sum(const Tensor& t);
double tensor_mean(const Tensor& t);

bool tensor_all_finite(const Tensor& t);

// Bitwise equality of shape and payload.
bool tensor_equal(const Tensor& a, const Tensor& b);

// Largest absolute elementwise difference; shapes must match.
float max_abs_diff(const Tensor& a, const Tensor& b);

// Center-crop so height and width are divisible by 2^levels. No-op when
// already divisible; rejects tensors smaller than 2^levels on either axis.
Tensor crop_to_dyadic(const Tensor& t, unsigned levels);

}  // namespace wavedepth
