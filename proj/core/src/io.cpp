#include "wavedepth/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace wavedepth {

namespace {

constexpr std::size_t kMaxDim = 1u << 20;  // 1M pixels per axis is plenty here

void byteswap_floats(std::vector<float>& v) {
  for (float& f : v) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    u = ((u & 0x000000FFu) << 24) | ((u & 0x0000FF00u) << 8) | ((u & 0x00FF0000u) >> 8) |
        ((u & 0xFF000000u) >> 24);
    std::memcpy(&f, &u, 4);
  }
}

void write_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF), static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32_le(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) fail(Errc::truncated_payload, "unexpected end of file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

static_assert(std::endian::native == std::endian::little,
              "payload IO assumes a little-endian host");

}  // namespace

Tensor read_pfm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot open " + path);

  std::string magic;
  f >> magic;
  if (magic == "PF") fail(Errc::unsupported_format, "color PFM not supported: " + path);
  if (magic != "Pf") fail(Errc::malformed_header, "not a PFM file: " + path);

  long long w = 0, h = 0;
  double scale = 0.0;
  if (!(f >> w >> h >> scale)) fail(Errc::malformed_header, "bad PFM header in " + path);
  if (w <= 0 || h <= 0 || static_cast<std::size_t>(w) > kMaxDim || static_cast<std::size_t>(h) > kMaxDim)
    fail(Errc::malformed_header, "PFM dimension overflow in " + path);
  if (scale == 0.0) fail(Errc::malformed_header, "PFM scale must be nonzero in " + path);
  f.get();  // single whitespace byte after the header

  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<float> raw(count);
  if (!f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 4)))
    fail(Errc::truncated_payload, "PFM payload truncated in " + path);
  if (scale > 0.0) byteswap_floats(raw);  // positive scale marks big-endian

  // PFM rows run bottom-to-top; flip to top-to-bottom.
  Tensor t(static_cast<std::size_t>(h), static_cast<std::size_t>(w), 1);
  for (std::size_t y = 0; y < t.height(); ++y) {
    const float* src = raw.data() + (t.height() - 1 - y) * t.width();
    std::memcpy(&t.at(y, 0), src, t.width() * sizeof(float));
  }
  if (!tensor_all_finite(t)) fail(Errc::invalid_payload, "non-finite PFM payload in " + path);
  return t;
}

void write_pfm(const Tensor& t, const std::string& path) {
  if (t.channels() != 1) fail(Errc::channel_mismatch, "PFM requires a single channel");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::io, "cannot open " + path + " for writing");

  f << "Pf\n" << t.width() << " " << t.height() << "\n-1.0\n";
  for (std::size_t y = 0; y < t.height(); ++y) {
    const float* row = &t.at(t.height() - 1 - y, 0);
    f.write(reinterpret_cast<const char*>(row), static_cast<std::streamsize>(t.width() * sizeof(float)));
  }
  if (!f) fail(Errc::io, "write failed: " + path);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot open " + path);

  char magic[4];
  if (!f.read(magic, 4)) fail(Errc::truncated_payload, "empty tensor file " + path);
  if (std::memcmp(magic, "WMDT", 4) != 0) fail(Errc::bad_magic, "bad tensor magic in " + path);

  const std::uint32_t version = read_u32_le(f);
  if (version != 1) fail(Errc::unsupported_format, "unsupported WMDT version in " + path);
  const std::uint32_t ndim = read_u32_le(f);
  if (ndim != 2 && ndim != 3) fail(Errc::malformed_header, "WMDT ndim must be 2 or 3 in " + path);

  std::uint32_t dims[3] = {0, 0, 1};
  for (std::uint32_t i = 0; i < ndim; ++i) dims[i] = read_u32_le(f);
  for (std::uint32_t i = 0; i < ndim; ++i)
    if (dims[i] == 0 || dims[i] > kMaxDim) fail(Errc::malformed_header, "WMDT dimension overflow in " + path);

  const std::size_t count =
      static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
  std::vector<float> data(count);
  if (!f.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * 4)))
    fail(Errc::truncated_payload, "WMDT payload truncated in " + path);
  return Tensor(dims[0], dims[1], dims[2], std::move(data));
}

void write_tensor(const Tensor& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::io, "cannot open " + path + " for writing");

  f.write("WMDT", 4);
  write_u32_le(f, 1);
  const std::uint32_t ndim = t.channels() == 1 ? 2 : 3;
  write_u32_le(f, ndim);
  write_u32_le(f, static_cast<std::uint32_t>(t.height()));
  write_u32_le(f, static_cast<std::uint32_t>(t.width()));
  if (ndim == 3) write_u32_le(f, static_cast<std::uint32_t>(t.channels()));
  f.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(float)));
  if (!f) fail(Errc::io, "write failed: " + path);
}

SparseMask read_mask(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot open " + path);

  std::string magic;
  f >> magic;
  if (magic != "P5") fail(Errc::malformed_header, "not a binary PGM: " + path);
  long long w = 0, h = 0, maxval = 0;
  if (!(f >> w >> h >> maxval)) fail(Errc::malformed_header, "bad PGM header in " + path);
  if (w <= 0 || h <= 0 || static_cast<std::size_t>(w) > kMaxDim || static_cast<std::size_t>(h) > kMaxDim)
    fail(Errc::malformed_header, "PGM dimension overflow in " + path);
  if (maxval != 255) fail(Errc::unsupported_format, "PGM maxval must be 255 in " + path);
  f.get();

  SparseMask m(static_cast<std::size_t>(h), static_cast<std::size_t>(w));
  std::vector<unsigned char> raw(m.bits.size());
  if (!f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    fail(Errc::truncated_payload, "PGM payload truncated in " + path);
  for (std::size_t i = 0; i < raw.size(); ++i) m.bits[i] = raw[i] != 0 ? 1 : 0;
  return m;
}

void write_mask(const SparseMask& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::io, "cannot open " + path + " for writing");

  f << "P5\n" << m.width << " " << m.height << "\n255\n";
  std::vector<unsigned char> raw(m.bits.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = m.bits[i] ? 255 : 0;
  f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!f) fail(Errc::io, "write failed: " + path);
}

}  // namespace wavedepth
