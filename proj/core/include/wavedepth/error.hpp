#pragma once

#include <stdexcept>
#include <string>

namespace wavedepth {

// Failure categories surfaced by the library. The CLI maps any of these to a
// nonzero exit code; tests match on the code rather than the message text.
enum class Errc {
  io,
  unsupported_format,
  malformed_header,
  bad_magic,
  truncated_payload,
  invalid_payload,
  channel_mismatch,
  dimension_mismatch,
  shape_mismatch,
  too_small,
  invalid_argument,
  no_valid_pixels,
  zero_mean_disparity,
  range_inverted,
  missing_blob,
  overflow,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::io: return "io error";
    case Errc::unsupported_format: return "unsupported format";
    case Errc::malformed_header: return "malformed header";
    case Errc::bad_magic: return "bad magic";
    case Errc::truncated_payload: return "truncated payload";
    case Errc::invalid_payload: return "invalid payload";
    case Errc::channel_mismatch: return "channel mismatch";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::too_small: return "input too small";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::no_valid_pixels: return "no valid pixels";
    case Errc::zero_mean_disparity: return "zero-mean disparity";
    case Errc::range_inverted: return "range inverted";
    case Errc::missing_blob: return "missing blob";
    case Errc::overflow: return "overflow";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wavedepth
