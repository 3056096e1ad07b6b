#pragma once

// Binary PPM (P6, maxval 255) and PAM (P7, depth 3 or 4, maxval 255) codecs.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlselect/error.hpp"
#include "tlselect/image.hpp"

namespace tlselect::pnm {

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      const char ch = data_[pos_];
      if (ch == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string token() {
    skip_space_and_comments();
    const auto start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("pnm: unexpected end of header");
    return std::string(data_.substr(start, pos_ - start));
  }

  std::size_t number(std::string_view what) {
    const auto t = token();
    std::size_t value = 0;
    for (char ch : t) {
      if (ch < '0' || ch > '9') throw ParseError("pnm: bad " + std::string(what) + " '" + t + "'");
      value = value * 10 + static_cast<std::size_t>(ch - '0');
      if (value > (1u << 24)) throw ParseError("pnm: " + std::string(what) + " too large");
    }
    return value;
  }

  /// Consumes exactly one whitespace byte (the separator before raster data).
  void single_space() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw ParseError("pnm: missing whitespace before raster");
    }
    ++pos_;
  }

  void rest_of_line() {
    while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
    if (pos_ < data_.size()) ++pos_;
  }

  std::string_view remaining() const { return data_.substr(pos_); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

inline Image raster(std::size_t w, std::size_t h, std::size_t depth, std::string_view bytes) {
  const std::size_t need = w * h * depth;
  if (bytes.size() < need) {
    throw ParseError("pnm: raster truncated (" + std::to_string(bytes.size()) + " of " + std::to_string(need) +
                     " bytes)");
  }
  std::vector<std::uint8_t> px(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(need));
  return Image(w, h, depth, std::move(px));
}

}  // namespace detail

/// Decodes a P6 or P7 byte stream.
inline Image decode(std::string_view data) {
  detail::Cursor cur(data);
  const auto magic = cur.token();
  if (magic == "P6") {
    const auto w = cur.number("width");
    const auto h = cur.number("height");
    const auto maxval = cur.number("maxval");
    if (w == 0 || h == 0) throw ParseError("pnm: zero dimension");
    if (maxval != 255) throw ParseError("pnm: only maxval 255 is supported, got " + std::to_string(maxval));
    cur.single_space();
    return detail::raster(w, h, 3, cur.remaining());
  }
  if (magic == "P7") {
    std::size_t w = 0, h = 0, depth = 0, maxval = 0;
    while (true) {
      const auto key = cur.token();
      if (key == "ENDHDR") break;
      if (key == "WIDTH") w = cur.number("WIDTH");
      else if (key == "HEIGHT") h = cur.number("HEIGHT");
      else if (key == "DEPTH") depth = cur.number("DEPTH");
      else if (key == "MAXVAL") maxval = cur.number("MAXVAL");
      else if (key == "TUPLTYPE") cur.rest_of_line();
      else throw ParseError("pam: unknown header field '" + key + "'");
    }
    cur.rest_of_line();
    if (w == 0 || h == 0) throw ParseError("pam: zero dimension");
    if (depth != 3 && depth != 4) throw ParseError("pam: DEPTH must be 3 or 4, got " + std::to_string(depth));
    if (maxval != 255) throw ParseError("pam: only MAXVAL 255 is supported, got " + std::to_string(maxval));
    return detail::raster(w, h, depth, cur.remaining());
  }
  throw ParseError("pnm: unsupported magic '" + magic + "' (expected P6 or P7)");
}

/// 3-channel images encode as P6, 4-channel images as P7 RGB_ALPHA.
inline std::string encode(const Image& img) {
  std::ostringstream os;
  if (img.channels() == 3) {
    os << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  } else if (img.channels() == 4) {
    os << "P7\nWIDTH " << img.width() << "\nHEIGHT " << img.height()
       << "\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n";
  } else {
    throw ValidationError("pnm: cannot encode a " + std::to_string(img.channels()) + "-channel image");
  }
  std::string out = os.str();
  const auto px = img.pixels();
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

inline Image read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode(data);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_file(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  const auto bytes = encode(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace tlselect::pnm
