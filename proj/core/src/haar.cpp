#include "wavedepth/haar.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wavedepth/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wavedepth {

DwtBands dwt_level(const Tensor& x) {
  if (x.height() % 2 != 0 || x.width() % 2 != 0)
    fail(Errc::dimension_mismatch, "dwt_level requires even height and width");

  const std::size_t h = x.height() / 2, w = x.width() / 2, c = x.channels();
  DwtBands out{Tensor(h, w, c), Tensor(h, w, c), Tensor(h, w, c), Tensor(h, w, c)};
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t xx = 0; xx < w; ++xx) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        const float a = x.at(2 * y, 2 * xx, ch);
        const float b = x.at(2 * y, 2 * xx + 1, ch);
        const float cc = x.at(2 * y + 1, 2 * xx, ch);
        const float d = x.at(2 * y + 1, 2 * xx + 1, ch);
        out.ll.at(y, xx, ch) = (a + b + cc + d) * 0.5f;
        out.lh.at(y, xx, ch) = (a + b - cc - d) * 0.5f;
        out.hl.at(y, xx, ch) = (a - b + cc - d) * 0.5f;
        out.hh.at(y, xx, ch) = (a - b - cc + d) * 0.5f;
      }
    }
  }
  return out;
}

Tensor idwt_level(const Tensor& ll, const Tensor& lh, const Tensor& hl, const Tensor& hh) {
  if (!ll.same_shape(lh) || !ll.same_shape(hl) || !ll.same_shape(hh))
    fail(Errc::dimension_mismatch, "idwt_level bands must share dimensions");

  const std::size_t h = ll.height(), w = ll.width(), c = ll.channels();
  Tensor out(2 * h, 2 * w, c);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        const float l = ll.at(y, x, ch);
        const float dh = lh.at(y, x, ch);
        const float dv = hl.at(y, x, ch);
        const float dd = hh.at(y, x, ch);
        out.at(2 * y, 2 * x, ch) = (l + dh + dv + dd) * 0.5f;
        out.at(2 * y, 2 * x + 1, ch) = (l + dh - dv - dd) * 0.5f;
        out.at(2 * y + 1, 2 * x, ch) = (l - dh + dv - dd) * 0.5f;
        out.at(2 * y + 1, 2 * x + 1, ch) = (l - dh - dv + dd) * 0.5f;
      }
    }
  }
  return out;
}

CoefficientPyramid dwt_pyramid(const Tensor& x, unsigned j) {
  if (j < 1) fail(Errc::invalid_argument, "dwt_pyramid needs at least one level");
  const std::size_t factor = std::size_t{1} << j;
  if (x.height() % factor != 0 || x.width() % factor != 0)
    fail(Errc::dimension_mismatch, "dimensions not divisible by 2^levels");

  CoefficientPyramid pyr;
  pyr.levels.resize(j);
  Tensor running = x;
  for (unsigned level = 0; level < j; ++level) {
    DwtBands bands = dwt_level(running);
    // finest details land at the back; levels[] is ordered coarsest first
    pyr.levels[j - 1 - level] = WaveletLevel{std::move(bands.lh), std::move(bands.hl), std::move(bands.hh)};
    running = std::move(bands.ll);
  }
  pyr.ll = std::move(running);
  return pyr;
}

void validate_pyramid(const CoefficientPyramid& pyr) {
  if (pyr.levels.empty()) fail(Errc::invalid_argument, "pyramid has no detail levels");
  std::size_t h = pyr.ll.height(), w = pyr.ll.width();
  for (std::size_t i = 0; i < pyr.levels.size(); ++i) {
    const WaveletLevel& lvl = pyr.levels[i];
    if (!lvl.lh.same_shape(lvl.hl) || !lvl.lh.same_shape(lvl.hh))
      fail(Errc::dimension_mismatch, "detail bands disagree at level " + std::to_string(i));
    if (lvl.lh.height() != h || lvl.lh.width() != w || lvl.lh.channels() != pyr.ll.channels())
      fail(Errc::dimension_mismatch, "pyramid dimension chain broken at level " + std::to_string(i));
    h *= 2;
    w *= 2;
  }
}

Tensor idwt_pyramid(const CoefficientPyramid& pyr) {
  validate_pyramid(pyr);
  Tensor running = pyr.ll;
  for (const WaveletLevel& lvl : pyr.levels) running = idwt_level(running, lvl.lh, lvl.hl, lvl.hh);
  return running;
}

void save_pyramid(const CoefficientPyramid& pyr, const std::string& dir) {
  validate_pyramid(pyr);
  fs::create_directories(dir);
  write_tensor(pyr.ll, (fs::path(dir) / "ll.wmdt").string());
  for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
    const std::string stem = "level" + std::to_string(j) + "_";
    write_tensor(pyr.levels[j].lh, (fs::path(dir) / (stem + "lh.wmdt")).string());
    write_tensor(pyr.levels[j].hl, (fs::path(dir) / (stem + "hl.wmdt")).string());
    write_tensor(pyr.levels[j].hh, (fs::path(dir) / (stem + "hh.wmdt")).string());
  }
  json manifest;
  manifest["levels"] = pyr.levels.size();
  manifest["ll_dims"] = {pyr.ll.height(), pyr.ll.width(), pyr.ll.channels()};
  manifest["full_dims"] = {pyr.full_height(), pyr.full_width()};
  std::ofstream f(fs::path(dir) / "pyramid.json");
  if (!f) fail(Errc::io, "cannot write pyramid manifest in " + dir);
  f << manifest.dump(2) << "\n";
}

CoefficientPyramid load_pyramid(const std::string& dir) {
  std::ifstream f(fs::path(dir) / "pyramid.json");
  if (!f) fail(Errc::io, "cannot open pyramid manifest in " + dir);
  json manifest = json::parse(f, nullptr, false);
  if (manifest.is_discarded()) fail(Errc::malformed_header, "invalid pyramid manifest in " + dir);

  CoefficientPyramid pyr;
  pyr.ll = read_tensor((fs::path(dir) / "ll.wmdt").string());
  const std::size_t levels = manifest.at("levels").get<std::size_t>();
  pyr.levels.resize(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    const std::string stem = "level" + std::to_string(j) + "_";
    pyr.levels[j].lh = read_tensor((fs::path(dir) / (stem + "lh.wmdt")).string());
    pyr.levels[j].hl = read_tensor((fs::path(dir) / (stem + "hl.wmdt")).string());
    pyr.levels[j].hh = read_tensor((fs::path(dir) / (stem + "hh.wmdt")).string());
  }
  validate_pyramid(pyr);
  return pyr;
}

}  // namespace wavedepth
