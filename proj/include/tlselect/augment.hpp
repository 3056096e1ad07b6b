#pragma once

// Pixel-level preparation and augmentation.
//
// Sampling convention: pixel (i, j) covers [i, i+1) x [j, j+1) and its center
// sits at (i + 0.5, j + 0.5). Both resize and orient_zoom use bilinear
// interpolation between pixel centers with edge clamping, then round half up.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "tlselect/dataset_plan.hpp"
#include "tlselect/error.hpp"
#include "tlselect/image.hpp"
#include "tlselect/rng.hpp"

namespace tlselect {

inline constexpr std::size_t kModelInputSize = 128;

struct OrientZoomSpec {
  double rotation_degrees = 0.0;  ///< counter-clockwise as displayed
  double zoom = 1.0;              ///< > 1 enlarges content, < 1 shrinks it
  std::uint8_t fill = 0;
};

struct NoiseSpec {
  std::uint64_t seed = 0;
  static constexpr int kMaxShift = 2;
};

namespace detail {

inline std::uint8_t round_to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

/// Bilinear sample at continuous coordinates where pixel centers sit on integers.
inline double sample_bilinear(const Image& img, double u, double v, std::size_t ch) {
  u = std::clamp(u, 0.0, static_cast<double>(img.width() - 1));
  v = std::clamp(v, 0.0, static_cast<double>(img.height() - 1));
  const auto x0 = static_cast<std::size_t>(std::floor(u));
  const auto y0 = static_cast<std::size_t>(std::floor(v));
  const auto x1 = std::min(x0 + 1, img.width() - 1);
  const auto y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = u - static_cast<double>(x0);
  const double fy = v - static_cast<double>(y0);
  const double top = img.at(x0, y0, ch) * (1.0 - fx) + img.at(x1, y0, ch) * fx;
  const double bottom = img.at(x0, y1, ch) * (1.0 - fx) + img.at(x1, y1, ch) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

inline double snap_zero(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

}  // namespace detail

inline Image resize(const Image& img, std::size_t target_w = kModelInputSize, std::size_t target_h = kModelInputSize) {
  detail::require(!img.empty(), "resize: empty image");
  detail::require(target_w >= 1 && target_h >= 1, "resize: target dimensions must be positive");
  if (img.width() == target_w && img.height() == target_h) return img;

  Image out(target_w, target_h, img.channels());
  const double sx = static_cast<double>(img.width()) / static_cast<double>(target_w);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(target_h);
  for (std::size_t y = 0; y < target_h; ++y) {
    const double v = (static_cast<double>(y) + 0.5) * sy - 0.5;
    for (std::size_t x = 0; x < target_w; ++x) {
      const double u = (static_cast<double>(x) + 0.5) * sx - 0.5;
      for (std::size_t ch = 0; ch < img.channels(); ++ch) {
        out.at(x, y, ch) = detail::round_to_byte(detail::sample_bilinear(img, u, v, ch));
      }
    }
  }
  return out;
}

/// Drops the alpha channel of a 4-channel image; 3-channel images pass through.
inline Image truncate_channels(const Image& img) {
  detail::require(img.channels() == 3 || img.channels() == 4,
                  "truncate_channels: expected 3 or 4 channels, got " + std::to_string(img.channels()));
  if (img.channels() == 3) return img;
  Image out(img.width(), img.height(), 3);
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (std::size_t ch = 0; ch < 3; ++ch) out.at(x, y, ch) = img.at(x, y, ch);
    }
  }
  return out;
}

/// Rotates about the image center and zooms, keeping the original dimensions.
/// Output pixels whose source point falls outside the input take `spec.fill`.
inline Image orient_zoom(const Image& img, const OrientZoomSpec& spec) {
  detail::require(!img.empty(), "orient_zoom: empty image");
  detail::require(std::isfinite(spec.zoom) && spec.zoom > 0.0, "orient_zoom: zoom must be positive");
  detail::require(std::isfinite(spec.rotation_degrees), "orient_zoom: rotation must be finite");

  const double theta = spec.rotation_degrees * std::numbers::pi / 180.0;
  const double cos_t = detail::snap_zero(std::cos(theta));
  const double sin_t = detail::snap_zero(std::sin(theta));
  const double w = static_cast<double>(img.width());
  const double h = static_cast<double>(img.height());
  const double cx = w / 2.0;
  const double cy = h / 2.0;

  Image out(img.width(), img.height(), img.channels(), spec.fill);
  for (std::size_t y = 0; y < img.height(); ++y) {
    const double dy = static_cast<double>(y) + 0.5 - cy;
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double dx = static_cast<double>(x) + 0.5 - cx;
      // Inverse map: undo the zoom, then rotate back by -theta (y axis points down).
      const double sx = cx + (dx * cos_t - dy * sin_t) / spec.zoom;
      const double sy = cy + (dx * sin_t + dy * cos_t) / spec.zoom;
      if (sx < 0.0 || sx > w || sy < 0.0 || sy > h) continue;
      for (std::size_t ch = 0; ch < img.channels(); ++ch) {
        out.at(x, y, ch) = detail::round_to_byte(detail::sample_bilinear(img, sx - 0.5, sy - 0.5, ch));
      }
    }
  }
  return out;
}

/// Shifts every channel value by an independent uniform integer in [-2, 2], clamped to [0, 255].
inline Image perturb_noise(const Image& img, const NoiseSpec& spec) {
  detail::require(img.channels() == 3, "perturb_noise: expected a 3-channel image, got " +
                                           std::to_string(img.channels()) + " channels");
  Image out = img;
  rng::Engine eng(spec.seed);
  constexpr int span = 2 * NoiseSpec::kMaxShift + 1;
  for (auto& value : out.pixels()) {
    const int shift = static_cast<int>(rng::uniform_below(eng, span)) - NoiseSpec::kMaxShift;
    value = static_cast<std::uint8_t>(std::clamp(static_cast<int>(value) + shift, 0, 255));
  }
  return out;
}

/// `b` evenly spaced rotations over [-15, 15] degrees paired with zooms over [0.9, 1.1].
/// A single spec is the identity transform.
inline std::vector<OrientZoomSpec> default_orient_specs(std::uint64_t b, std::uint8_t fill = 0) {
  detail::require(b >= 1, "default_orient_specs: b must be at least 1");
  std::vector<OrientZoomSpec> specs;
  specs.reserve(b);
  if (b == 1) {
    specs.push_back({0.0, 1.0, fill});
    return specs;
  }
  for (std::uint64_t i = 0; i < b; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(b - 1);
    specs.push_back({-15.0 + 30.0 * t, 0.9 + 0.2 * t, fill});
  }
  return specs;
}

/// Expands one image into b * (c + 1) variants. For each orientation i the control
/// comes first, followed by c noise variants; variant k = i * (c + 1) + j draws its
/// noise from rng::derive_seed(seed, k).
inline std::vector<Image> augment_image(const Image& img, const AugmentationPlan& plan,
                                        std::span<const OrientZoomSpec> orient_specs, std::uint64_t seed) {
  const auto factor = replication_factor(plan);
  detail::require(orient_specs.size() == plan.b, "augment_image: expected " + std::to_string(plan.b) +
                                                      " orientation specs, got " +
                                                      std::to_string(orient_specs.size()));
  std::vector<Image> out;
  out.reserve(factor);
  for (std::uint64_t i = 0; i < plan.b; ++i) {
    const std::size_t control = out.size();
    out.push_back(orient_zoom(img, orient_specs[i]));
    for (std::uint64_t j = 1; j <= plan.c; ++j) {
      out.push_back(perturb_noise(out[control], {rng::derive_seed(seed, i * (plan.c + 1) + j)}));
    }
  }
  return out;
}

}  // namespace tlselect
