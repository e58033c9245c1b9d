#include "fractsig/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "fractsig/errors.hpp"
#include "fractsig/features.hpp"
#include "io_util.hpp"

namespace fractsig {

using detail::atomic_write;

namespace {

// Fixed two-decimal coordinates keep the SVG bytes stable and compact.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_stat(double v) {
  if (!std::isfinite(v)) return "";
  return format_double(v);
}

struct Canvas {
  std::ostringstream out;
  double width, height;

  Canvas(double w, double h) : width(w), height(h) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(w)
        << "\" height=\"" << px(h) << "\" viewBox=\"0 0 " << px(w) << " " << px(h)
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color,
            double sw = 1.0) {
    out << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
        << "\" y2=\"" << px(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
        << px(sw) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "") {
    out << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
        << "\" height=\"" << px(h) << "\" fill=\"" << fill << "\"" << extra << "/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 11,
            const std::string& anchor = "start", const std::string& color = "#333") {
    out << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\" fill=\""
        << color << "\">" << s << "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color, double sw = 1.5) {
    if (pts.size() < 2) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << px(sw) << "\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << "," << px(y) << " ";
    out << "\"/>\n";
  }

  std::string finish() {
    out << "</svg>\n";
    return out.str();
  }
};

struct AxisMap {
  double lo, hi, p0, p1;  // data range -> pixel range
  double operator()(double v) const {
    if (hi <= lo) return (p0 + p1) / 2;
    return p0 + (v - lo) / (hi - lo) * (p1 - p0);
  }
};

constexpr double kMargin = 48.0;
constexpr double kPlotW = 520.0;
constexpr double kPlotH = 320.0;
const char* kRealColor = "#1f6fb4";
const char* kFakeColor = "#d0402b";

void draw_frame(Canvas& cv, const AxisMap& xm, const AxisMap& ym, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
  cv.line(xm.p0, ym.p0, xm.p1, ym.p0, "#444");
  cv.line(xm.p0, ym.p0, xm.p0, ym.p1, "#444");
  cv.text((xm.p0 + xm.p1) / 2, 20, title, 13, "middle", "#111");
  cv.text((xm.p0 + xm.p1) / 2, ym.p0 + 34, xlabel, 11, "middle");
  cv.text(14, (ym.p0 + ym.p1) / 2, ylabel, 11, "middle");
  for (int i = 0; i <= 4; ++i) {
    const double fx = xm.lo + (xm.hi - xm.lo) * i / 4;
    const double fy = ym.lo + (ym.hi - ym.lo) * i / 4;
    const double sx = xm(fx);
    const double sy = ym(fy);
    cv.line(sx, ym.p0, sx, ym.p0 + 4, "#444");
    cv.line(xm.p0 - 4, sy, xm.p0, sy, "#444");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", fx);
    cv.text(sx, ym.p0 + 16, buf, 9, "middle");
    std::snprintf(buf, sizeof(buf), "%.3g", fy);
    cv.text(xm.p0 - 6, sy + 3, buf, 9, "end");
  }
}

void draw_legend(Canvas& cv, double x, double y) {
  cv.rect(x, y - 8, 10, 10, kRealColor);
  cv.text(x + 14, y, "real");
  cv.rect(x + 58, y - 8, 10, 10, kFakeColor);
  cv.text(x + 72, y, "fake");
}

std::string histogram_svg(const std::string& title, const HistogramPair& h) {
  Canvas cv(kPlotW + 2 * kMargin, kPlotH + 2 * kMargin);
  long peak = 1;
  for (long c : h.real_counts) peak = std::max(peak, c);
  for (long c : h.fake_counts) peak = std::max(peak, c);

  const AxisMap xm{h.edges.front(), h.edges.back(), kMargin, kMargin + kPlotW};
  const AxisMap ym{0.0, static_cast<double>(peak), kMargin + kPlotH, kMargin};
  draw_frame(cv, xm, ym, title, "value", "count");

  const size_t bins = h.real_counts.size();
  for (size_t i = 0; i < bins; ++i) {
    const double x0 = xm(h.edges[i]);
    const double x1 = xm(h.edges[i + 1]);
    if (h.real_counts[i] > 0) {
      const double top = ym(static_cast<double>(h.real_counts[i]));
      cv.rect(x0, top, x1 - x0, ym.p0 - top, kRealColor, " fill-opacity=\"0.45\"");
    }
    if (h.fake_counts[i] > 0) {
      const double top = ym(static_cast<double>(h.fake_counts[i]));
      cv.rect(x0, top, x1 - x0, ym.p0 - top, kFakeColor, " fill-opacity=\"0.45\"");
    }
  }
  draw_legend(cv, kMargin + kPlotW - 120, kMargin + 14);
  return cv.finish();
}

std::vector<std::pair<double, double>> finite_points(const std::vector<double>& xs,
                                                     const std::vector<double>& ys,
                                                     const AxisMap& xm, const AxisMap& ym) {
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (std::isfinite(xs[i]) && std::isfinite(ys[i])) pts.push_back({xm(xs[i]), ym(ys[i])});
  }
  return pts;
}

std::string curves_svg(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<double>& x_real,
                       const std::vector<double>& y_real, const std::vector<double>& x_fake,
                       const std::vector<double>& y_fake) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  auto widen = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      xlo = std::min(xlo, xs[i]); xhi = std::max(xhi, xs[i]);
      ylo = std::min(ylo, ys[i]); yhi = std::max(yhi, ys[i]);
    }
  };
  widen(x_real, y_real);
  widen(x_fake, y_fake);
  if (!std::isfinite(xlo) || !std::isfinite(ylo)) {  // nothing plottable
    xlo = ylo = 0.0;
    xhi = yhi = 1.0;
  }
  if (!(xhi > xlo)) { xlo -= 0.5; xhi = xlo + 1.0; }
  if (!(yhi > ylo)) { ylo -= 0.5; yhi = ylo + 1.0; }

  Canvas cv(kPlotW + 2 * kMargin, kPlotH + 2 * kMargin);
  const AxisMap xm{xlo, xhi, kMargin, kMargin + kPlotW};
  const AxisMap ym{ylo, yhi, kMargin + kPlotH, kMargin};
  draw_frame(cv, xm, ym, title, xlabel, ylabel);
  cv.polyline(finite_points(x_real, y_real, xm, ym), kRealColor);
  cv.polyline(finite_points(x_fake, y_fake, xm, ym), kFakeColor);
  draw_legend(cv, kMargin + kPlotW - 120, kMargin + 14);
  return cv.finish();
}

// Three-stop blue -> green -> yellow ramp for D in [0,1]; NaN is gray.
std::string heat_color(double v) {
  if (!std::isfinite(v)) return "#cccccc";
  v = std::clamp(v, 0.0, 1.0);
  double r, g, b;
  if (v < 0.5) {
    const double t = v / 0.5;
    r = 33 + t * (64 - 33); g = 70 + t * (160 - 70); b = 156 + t * (72 - 156);
  } else {
    const double t = (v - 0.5) / 0.5;
    r = 64 + t * (247 - 64); g = 160 + t * (226 - 160); b = 72 + t * (36 - 72);
  }
  char buf[10];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r),
                static_cast<int>(g), static_cast<int>(b));
  return buf;
}

std::string heatmap_svg(const AnalysisReport& rep) {
  const std::vector<double>& q = rep.q_grid;
  std::vector<int> ns;
  for (const auto& [n, row] : rep.mfs_ks) ns.push_back(n);

  const double cell_w = std::max(14.0, 560.0 / q.size());
  const double cell_h = 26.0;
  const double left = 70.0, top = 50.0;
  Canvas cv(left + cell_w * q.size() + 120, top + cell_h * ns.size() + 60);
  cv.text(left, 24, "Two-sample KS statistic of f(alpha) by moment q and removed components N",
          13, "start", "#111");

  for (size_t r = 0; r < ns.size(); ++r) {
    const std::vector<double>& row = rep.mfs_ks.at(ns[r]);
    cv.text(left - 8, top + r * cell_h + cell_h / 2 + 4, "N=" + std::to_string(ns[r]), 10, "end");
    for (size_t c = 0; c < q.size() && c < row.size(); ++c) {
      cv.rect(left + c * cell_w, top + r * cell_h, cell_w - 1, cell_h - 1, heat_color(row[c]));
    }
  }
  for (size_t c = 0; c < q.size(); ++c) {
    if (c % 2 != 0) continue;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.3g", q[c]);
    cv.text(left + c * cell_w + cell_w / 2, top + ns.size() * cell_h + 16, buf, 9, "middle");
  }
  cv.text(left + cell_w * q.size() / 2, top + ns.size() * cell_h + 34, "q", 11, "middle");

  // color bar
  const double bar_x = left + cell_w * q.size() + 24;
  for (int i = 0; i < 50; ++i) {
    const double v = 1.0 - i / 49.0;
    cv.rect(bar_x, top + i * (cell_h * ns.size()) / 50.0, 14,
            (cell_h * ns.size()) / 50.0 + 0.5, heat_color(v));
  }
  cv.text(bar_x + 20, top + 8, "1.0", 9);
  cv.text(bar_x + 20, top + cell_h * ns.size(), "0.0", 9);
  return cv.finish();
}

std::string table1_csv(const AnalysisReport& rep) {
  std::ostringstream out;
  out << "feature,normality_real_d,normality_real_p,normality_fake_d,"
         "normality_fake_p,real_vs_fake_d,real_vs_fake_p\n";
  const auto& feats = rep.scalar.at(0);
  for (const std::string& name : scalar_feature_names()) {
    auto it = feats.find(name);
    if (it == feats.end()) continue;
    const ScalarFeatureKs& e = it->second;
    out << name << ',';
    if (e.normality_real.n1 > 0) {
      out << fmt_stat(e.normality_real.statistic_d) << ',' << fmt_stat(e.normality_real.p_value);
    } else {
      out << ',';
    }
    out << ',';
    if (e.normality_fake.n1 > 0) {
      out << fmt_stat(e.normality_fake.statistic_d) << ',' << fmt_stat(e.normality_fake.p_value);
    } else {
      out << ',';
    }
    out << ',' << fmt_stat(e.real_vs_fake.statistic_d) << ','
        << fmt_stat(e.real_vs_fake.p_value) << "\n";
  }
  out << "# raw-image (n=0) feature distributions; one-sample entries are blank when a\n";
  out << "# label has fewer than 8 rows\n";
  out << "# p-values are asymptotic Kolmogorov approximations\n";
  return out.str();
}

std::string table3_csv(const AnalysisReport& rep, bool heatmap_emitted) {
  std::ostringstream out;
  out << "n,fd_d,fd_p,entropy_d,entropy_p,mean_d,mean_p,std_d,std_p\n";
  for (const auto& [n, feats] : rep.scalar) {
    if (n == 0) continue;
    out << n;
    for (const std::string& name : scalar_feature_names()) {
      auto it = feats.find(name);
      if (it == feats.end()) {
        out << ",,";
        continue;
      }
      out << ',' << fmt_stat(it->second.real_vs_fake.statistic_d) << ','
          << fmt_stat(it->second.real_vs_fake.p_value);
    }
    out << "\n";
  }
  out << "# two-sample real-vs-fake KS statistics on residual features\n";
  out << "# p-values are asymptotic Kolmogorov approximations\n";
  if (!heatmap_emitted) {
    out << "# MFS KS matrix empty; heatmap omitted\n";
  }
  return out.str();
}

}  // namespace

std::vector<std::filesystem::path> render_report(const AnalysisReport& rep,
                                                 const std::filesystem::path& out_dir) {
  if (rep.empty()) throw argument_error("cannot render an empty analysis");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory: " + out_dir.string());

  std::vector<std::filesystem::path> emitted;
  auto emit = [&](const std::filesystem::path& name, const std::string& contents) {
    const std::filesystem::path p = out_dir / name;
    atomic_write(p, contents);
    emitted.push_back(p);
  };

  bool heatmap_ok = false;
  for (const auto& [n, row] : rep.mfs_ks) {
    for (double v : row) {
      if (std::isfinite(v)) heatmap_ok = true;
    }
  }

  if (rep.scalar.count(0)) emit("table1_raw.csv", table1_csv(rep));
  bool have_residual = false;
  for (const auto& [n, feats] : rep.scalar) {
    if (n != 0) have_residual = true;
  }
  if (have_residual) emit("table3_residual.csv", table3_csv(rep, heatmap_ok));

  for (const auto& [n, feats] : rep.histograms) {
    for (const auto& [name, h] : feats) {
      const std::string title = name + " (N=" + std::to_string(n) + ")";
      emit("hist_" + name + "_n" + std::to_string(n) + ".svg", histogram_svg(title, h));
    }
  }

  for (const auto& [n, m] : rep.mean_mfs) {
    emit("mfs_mean_n" + std::to_string(n) + ".svg",
         curves_svg("Mean multifractal spectrum (N=" + std::to_string(n) + ")", "alpha",
                    "f(alpha)", m.alpha_real, m.f_real, m.alpha_fake, m.f_fake));
  }

  for (const auto& [n, m] : rep.mean_lac) {
    std::vector<double> xs(m.scales.begin(), m.scales.end());
    emit("lacunarity_mean_n" + std::to_string(n) + ".svg",
         curves_svg("Mean lacunarity (N=" + std::to_string(n) + ")", "box side",
                    "Lambda", xs, m.real_mean, xs, m.fake_mean));
  }

  if (heatmap_ok) emit("ks_heatmap_mfs.svg", heatmap_svg(rep));

  return emitted;
}

}  // namespace fractsig
