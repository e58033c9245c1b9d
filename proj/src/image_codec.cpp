// PNG/JPEG decode and encode. OpenCV's imgcodecs handles the container
// formats; grayscale conversion and resampling stay in image.cpp as pure
// arithmetic so results do not depend on library defaults.
#include <cmath>
#include <filesystem>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fractsig/errors.hpp"
#include "fractsig/image.hpp"

namespace fractsig {

GrayImage load_grayscale(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec) {
    throw io_error("cannot read file: " + path.string());
  }
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) {
    throw format_error("undecodable image: " + path.string());
  }

  const int depth = raw.depth();
  if (depth != CV_8U && depth != CV_16U) {
    throw format_error("unsupported sample depth in " + path.string());
  }
  const double denom = (depth == CV_8U) ? 255.0 : 65535.0;

  GrayImage out(raw.rows, raw.cols);
  const int ch = raw.channels();
  for (int r = 0; r < raw.rows; ++r) {
    for (int c = 0; c < raw.cols; ++c) {
      double gray = 0.0;
      if (ch == 1) {
        gray = (depth == CV_8U) ? raw.at<uint8_t>(r, c) : raw.at<uint16_t>(r, c);
      } else if (ch == 3 || ch == 4) {
        // OpenCV stores BGR(A); alpha ignored. Rec. 601 luma weights.
        double b, g, rr;
        if (depth == CV_8U) {
          const uint8_t* p = raw.ptr<uint8_t>(r) + static_cast<size_t>(c) * ch;
          b = p[0]; g = p[1]; rr = p[2];
        } else {
          const uint16_t* p = raw.ptr<uint16_t>(r) + static_cast<size_t>(c) * ch;
          b = p[0]; g = p[1]; rr = p[2];
        }
        gray = 0.299 * rr + 0.587 * g + 0.114 * b;
      } else {
        throw format_error("unsupported channel count in " + path.string());
      }
      out.at(r, c) = gray / denom;
    }
  }
  return out;
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw argument_error("cannot save empty image");
  cv::Mat m(img.rows, img.cols, CV_8UC1);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const double v = std::clamp(img.at(r, c), 0.0, 1.0);
      m.at<uint8_t>(r, c) = static_cast<uint8_t>(std::lround(v * 255.0));
    }
  }
  if (!cv::imwrite(path.string(), m)) {
    throw io_error("cannot write PNG: " + path.string());
  }
}

void save_png_normalized(const Matrix& m, const std::filesystem::path& path) {
  if (m.empty()) throw argument_error("cannot save empty matrix");
  const double lo = m.min_value();
  const double hi = m.max_value();
  GrayImage img(m.rows, m.cols);
  if (hi > lo) {
    for (size_t i = 0; i < m.data.size(); ++i) img.data[i] = (m.data[i] - lo) / (hi - lo);
  }
  save_png(img, path);
}

}  // namespace fractsig
