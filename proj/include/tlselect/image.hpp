#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tlselect/error.hpp"

namespace tlselect {

/// Interleaved 8-bit image, row-major, `channels` values per pixel.
class Image {
 public:
  Image() = default;

  Image(std::size_t width, std::size_t height, std::size_t channels, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels), pixels_(checked_size(width, height, channels), fill) {}

  Image(std::size_t width, std::size_t height, std::size_t channels, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height, channels)) {
      throw ValidationError("image: pixel buffer has " + std::to_string(pixels_.size()) + " values, expected " +
                            std::to_string(width * height * channels));
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t channels() const { return channels_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t ch) { return pixels_[index(x, y, ch)]; }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t ch) const { return pixels_[index(x, y, ch)]; }

  std::span<std::uint8_t> pixels() { return pixels_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static std::size_t checked_size(std::size_t w, std::size_t h, std::size_t c) {
    if (w == 0 || h == 0) throw ValidationError("image: width and height must be positive");
    if (c < 1 || c > 4) throw ValidationError("image: unsupported channel count " + std::to_string(c));
    return w * h * c;
  }

  std::size_t index(std::size_t x, std::size_t y, std::size_t ch) const { return (y * width_ + x) * channels_ + ch; }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace tlselect
