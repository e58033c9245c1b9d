#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fractsig/matrix.hpp"

namespace fractsig {

// Minimum analyzable side: two dyadic box scales need at least 8 pixels.
inline constexpr int kMinImageSide = 8;

// Throws argument_error unless every value is finite and in [0,1] and the
// image is at least kMinImageSide on each side.
void validate_gray_image(const GrayImage& img);

// Decodes a PNG or JPEG and converts to a single luminance channel with
// Rec. 601 weights (0.299 R + 0.587 G + 0.114 B), scaled to [0,1].
GrayImage load_grayscale(const std::filesystem::path& path);

// Writes an 8-bit grayscale PNG; values are clamped to [0,1] and rounded to
// the nearest of 256 levels, so k/255 inputs round-trip exactly.
void save_png(const GrayImage& img, const std::filesystem::path& path);

// Debug dump for signed matrices (residuals): min-max normalizes, then save_png.
void save_png_normalized(const Matrix& m, const std::filesystem::path& path);

// Crops the central square of side min(width,height), then resamples to
// side x side with pure-arithmetic bilinear interpolation (pixel-center
// convention, identical on every platform).
GrayImage center_crop_resize(const GrayImage& img, int side);

enum class SynthKind { constant, uniform_noise, sierpinski_carpet, checkerboard };

struct SynthSpec {
  SynthKind kind = SynthKind::constant;
  double value = 0.5;     // constant
  uint64_t seed = 0;      // uniform_noise
  int depth = 1;          // sierpinski_carpet, requires side == 3^depth
  int cell = 1;           // checkerboard, requires cell | side
};

// Deterministic synthetic images used as estimator oracles.
GrayImage synth_image(const SynthSpec& spec, int side);

}  // namespace fractsig
