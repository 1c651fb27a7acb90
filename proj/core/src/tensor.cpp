#include "wavedepth/tensor.hpp"

#include <cmath>
#include <cstring>

namespace wavedepth {

float tensor_min(const Tensor& t) {
  if (t.empty()) fail(Errc::invalid_argument, "min of empty tensor");
  float m = t.data()[0];
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t.data()[i] < m) m = t.data()[i];
  return m;
}

float tensor_max(const Tensor& t) {
  if (t.empty()) fail(Errc::invalid_argument, "max of empty tensor");
  float m = t.data()[0];
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t.data()[i] > m) m = t.data()[i];
  return m;
}

double tensor_sum(const Tensor& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t.data()[i];
  return acc;
}

double tensor_mean(const Tensor& t) {
  if (t.empty()) fail(Errc::invalid_argument, "mean of empty tensor");
  return tensor_sum(t) / static_cast<double>(t.size());
}

bool tensor_all_finite(const Tensor& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!std::isfinite(t.data()[i])) return false;
  return true;
}

bool tensor_equal(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) fail(Errc::dimension_mismatch, "max_abs_diff shape mismatch");
  float m = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    float d = std::fabs(a.data()[i] - b.data()[i]);
    if (d > m) m = d;
  }
  return m;
}

Tensor crop_to_dyadic(const Tensor& t, unsigned levels) {
  if (levels < 1) fail(Errc::invalid_argument, "levels must be >= 1");
  const std::size_t factor = std::size_t{1} << levels;
  if (t.height() < factor || t.width() < factor)
    fail(Errc::too_small, "tensor smaller than 2^levels in at least one dimension");

  const std::size_t new_h = (t.height() / factor) * factor;
  const std::size_t new_w = (t.width() / factor) * factor;
  if (new_h == t.height() && new_w == t.width()) return t;

  const std::size_t off_y = (t.height() - new_h) / 2;
  const std::size_t off_x = (t.width() - new_w) / 2;
  Tensor out(new_h, new_w, t.channels());
  for (std::size_t y = 0; y < new_h; ++y) {
    const float* src = &t.at(y + off_y, off_x, 0);
    float* dst = &out.at(y, 0, 0);
    std::memcpy(dst, src, new_w * t.channels() * sizeof(float));
  }
  return out;
}

}  // namespace wavedepth
