#include "fractsig/image.hpp"

#include <cmath>
#include <string>

#include "fractsig/errors.hpp"
#include "fractsig/rng.hpp"

namespace fractsig {

void validate_gray_image(const GrayImage& img) {
  if (img.rows < kMinImageSide || img.cols < kMinImageSide) {
    throw argument_error("image too small: " + std::to_string(img.cols) + "x" +
                         std::to_string(img.rows) + ", need at least " +
                         std::to_string(kMinImageSide) + " per side");
  }
  if (img.data.size() != static_cast<size_t>(img.rows) * img.cols) {
    throw argument_error("image buffer size does not match width*height");
  }
  for (double v : img.data) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw argument_error("image value out of [0,1]: " + std::to_string(v));
    }
  }
}

GrayImage center_crop_resize(const GrayImage& img, int side) {
  if (side < kMinImageSide) {
    throw argument_error("target side must be >= " + std::to_string(kMinImageSide));
  }
  const int m = std::min(img.rows, img.cols);
  const int top = (img.rows - m) / 2;
  const int left = (img.cols - m) / 2;

  if (m == side) {
    GrayImage out(side, side);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) out.at(r, c) = img.at(top + r, left + c);
    return out;
  }

  // Bilinear, pixel-center convention: dst center maps to src coordinate
  // (d + 0.5) * m/side - 0.5, clamped to the crop window.
  GrayImage out(side, side);
  const double scale = static_cast<double>(m) / side;
  for (int r = 0; r < side; ++r) {
    double sy = (r + 0.5) * scale - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(m - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, m - 1);
    const double fy = sy - y0;
    for (int c = 0; c < side; ++c) {
      double sx = (c + 0.5) * scale - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(m - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, m - 1);
      const double fx = sx - x0;
      const double v00 = img.at(top + y0, left + x0);
      const double v01 = img.at(top + y0, left + x1);
      const double v10 = img.at(top + y1, left + x0);
      const double v11 = img.at(top + y1, left + x1);
      const double v = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                       fy * ((1.0 - fx) * v10 + fx * v11);
      // Convex combination; clamp only to shave rounding spill.
      out.at(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

namespace {

GrayImage make_carpet(int depth, int side) {
  int expected = 1;
  for (int i = 0; i < depth; ++i) expected *= 3;
  if (depth < 1 || side != expected) {
    throw argument_error("sierpinski_carpet requires side == 3^depth (got side=" +
                         std::to_string(side) + ", depth=" + std::to_string(depth) + ")");
  }
  GrayImage out(side, side, 1.0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      int x = c, y = r;
      for (int level = 0; level < depth; ++level) {
        if (x % 3 == 1 && y % 3 == 1) {
          out.at(r, c) = 0.0;
          break;
        }
        x /= 3;
        y /= 3;
      }
    }
  }
  return out;
}

}  // namespace

GrayImage synth_image(const SynthSpec& spec, int side) {
  if (side < kMinImageSide && spec.kind != SynthKind::sierpinski_carpet) {
    throw argument_error("side must be >= " + std::to_string(kMinImageSide));
  }
  switch (spec.kind) {
    case SynthKind::constant: {
      if (spec.value < 0.0 || spec.value > 1.0 || !std::isfinite(spec.value)) {
        throw argument_error("constant value must be in [0,1]");
      }
      return GrayImage(side, side, spec.value);
    }
    case SynthKind::uniform_noise: {
      GrayImage out(side, side);
      Rng rng(spec.seed);
      for (double& v : out.data) v = rng.uniform();
      return out;
    }
    case SynthKind::sierpinski_carpet:
      return make_carpet(spec.depth, side);
    case SynthKind::checkerboard: {
      if (spec.cell < 1 || side % spec.cell != 0) {
        throw argument_error("checkerboard cell must divide side");
      }
      GrayImage out(side, side);
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
          out.at(r, c) = ((r / spec.cell + c / spec.cell) % 2 == 0) ? 1.0 : 0.0;
      return out;
    }
  }
  throw argument_error("unknown synth kind");
}

}  // namespace fractsig
