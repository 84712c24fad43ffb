#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "boot3d/error.hpp"
#include "boot3d/metrics.hpp"

namespace boot3d {

namespace {

std::string num(double v, const char* fmt = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::io_failure, "cannot open for write: " + path);
  return out;
}

struct SvgCanvas {
  std::ostringstream body;
  int width = 640;
  int height = 400;
  // Plot area margins.
  int left = 60, right = 20, top = 40, bottom = 50;

  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;  // data ranges

  double px(double x) const {
    return left + (x - x0) / (x1 - x0) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom);
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body << "  <rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
         << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"/>\n";
  }
  void line(double xa, double ya, double xb, double yb) {
    body << "  <line x1=\"" << num(xa) << "\" y1=\"" << num(ya) << "\" x2=\"" << num(xb)
         << "\" y2=\"" << num(yb) << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "middle",
            int size = 12) {
    body << "  <text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
         << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
         << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    body << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) body << num(px(x)) << "," << num(py(y)) << " ";
    body << "\"/>\n";
  }
  void axes(const std::string& xlabel, const std::string& ylabel, int yticks = 5) {
    line(left, height - bottom, width - right, height - bottom);
    line(left, top, left, height - bottom);
    for (int k = 0; k <= yticks; ++k) {
      const double v = y0 + (y1 - y0) * k / yticks;
      const double y = py(v);
      line(left - 4, y, left, y);
      text(left - 8, y + 4, num(v, "%.4g"), "end", 10);
    }
    text((left + width - right) / 2.0, height - 12, xlabel);
    body << "  <text x=\"14\" y=\"" << num((top + height - bottom) / 2.0)
         << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" "
            "transform=\"rotate(-90 14 "
         << num((top + height - bottom) / 2.0) << ")\">" << ylabel << "</text>\n";
  }

  void write(const std::string& path, const std::string& title,
             const std::string& data_comment) {
    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<!-- data table:\n" << data_comment << "-->\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2
        << "\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"middle\">"
        << title << "</text>\n";
    out << body.str();
    out << "</svg>\n";
    if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
  }
};

void draw_buckets(SvgCanvas& svg, const std::vector<YawBucket>& buckets, double bar_shift,
                  double bar_frac, const std::string& color) {
  for (const YawBucket& b : buckets) {
    const double x = svg.px(b.lower_deg + 10.0 * bar_shift);
    const double w = (svg.px(b.lower_deg + 10.0) - svg.px(b.lower_deg)) * bar_frac;
    const double y = svg.py(b.mean);
    svg.rect(x, y, w, svg.py(svg.y0) - y, color);
  }
}

}  // namespace

void write_report_rows_csv(const std::string& path, const NmeReport& report) {
  std::ofstream out = open_out(path);
  out << "id,yaw_deg,pitch_deg,nme,aligned,flags\n";
  for (const NmeRow& r : report.rows) {
    out << r.id << ',' << num(r.yaw_deg, "%.17g") << ',' << num(r.pitch_deg, "%.17g") << ','
        << num(r.nme, "%.17g") << ',' << (r.aligned ? 1 : 0) << ',' << r.flags << '\n';
  }
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

void write_report_aggregate_csv(const std::string& path, const NmeReport& report) {
  std::ofstream out = open_out(path);
  out << "metric,value\n";
  out << "mean," << num(report.mean, "%.17g") << '\n';
  out << "median," << num(report.median, "%.17g") << '\n';
  out << "samples," << report.valid_count() << '\n';
  out << "failed," << report.rows.size() - report.valid_count() << '\n';
  out << "bucket_lower_deg,count,mean,stddev\n";
  for (const YawBucket& b : report.buckets)
    out << b.lower_deg << ',' << b.count << ',' << num(b.mean, "%.17g") << ','
        << num(b.stddev, "%.17g") << '\n';
  if (!out) throw_error(ErrorCode::io_failure, "write failed: " + path);
}

void write_report_bucket_svg(const std::string& path, const NmeReport& report,
                             const std::string& title) {
  SvgCanvas svg;
  double lo = 0.0, hi = 10.0, peak = 0.0;
  if (!report.buckets.empty()) {
    lo = report.buckets.front().lower_deg;
    hi = report.buckets.back().lower_deg + 10.0;
    for (const YawBucket& b : report.buckets) peak = std::max(peak, b.mean);
  }
  svg.x0 = lo;
  svg.x1 = hi;
  svg.y0 = 0.0;
  svg.y1 = peak > 0.0 ? peak * 1.15 : 1.0;
  svg.axes("yaw bucket (deg)", "mean NME");
  draw_buckets(svg, report.buckets, 0.1, 0.8, "#4878b8");
  for (const YawBucket& b : report.buckets)
    svg.text(svg.px(b.lower_deg + 5.0), svg.height - svg.bottom + 16,
             num(b.lower_deg, "%g"), "middle", 10);

  std::ostringstream data;
  data << "bucket_lower_deg,count,mean,stddev\n";
  for (const YawBucket& b : report.buckets)
    data << b.lower_deg << ',' << b.count << ',' << num(b.mean, "%.17g") << ','
         << num(b.stddev, "%.17g") << '\n';
  svg.write(path, title, data.str());
}

void write_report_bucket_svg_compare(const std::string& path, const NmeReport& a,
                                     const NmeReport& b, const std::string& label_a,
                                     const std::string& label_b) {
  SvgCanvas svg;
  double lo = 1e9, hi = -1e9, peak = 0.0;
  for (const NmeReport* r : {&a, &b}) {
    for (const YawBucket& bk : r->buckets) {
      lo = std::min(lo, static_cast<double>(bk.lower_deg));
      hi = std::max(hi, bk.lower_deg + 10.0);
      peak = std::max(peak, bk.mean);
    }
  }
  if (lo > hi) {
    lo = 0.0;
    hi = 10.0;
  }
  svg.x0 = lo;
  svg.x1 = hi;
  svg.y0 = 0.0;
  svg.y1 = peak > 0.0 ? peak * 1.15 : 1.0;
  svg.axes("yaw bucket (deg)", "mean NME");
  draw_buckets(svg, a.buckets, 0.08, 0.4, "#4878b8");
  draw_buckets(svg, b.buckets, 0.52, 0.4, "#e08030");
  svg.rect(svg.width - 150, 30, 12, 12, "#4878b8");
  svg.text(svg.width - 132, 40, label_a, "start", 11);
  svg.rect(svg.width - 150, 48, 12, 12, "#e08030");
  svg.text(svg.width - 132, 58, label_b, "start", 11);

  std::ostringstream data;
  data << "series,bucket_lower_deg,count,mean,stddev\n";
  for (const YawBucket& bk : a.buckets)
    data << label_a << ',' << bk.lower_deg << ',' << bk.count << ',' << num(bk.mean, "%.17g")
         << ',' << num(bk.stddev, "%.17g") << '\n';
  for (const YawBucket& bk : b.buckets)
    data << label_b << ',' << bk.lower_deg << ',' << bk.count << ',' << num(bk.mean, "%.17g")
         << ',' << num(bk.stddev, "%.17g") << '\n';
  svg.write(path, label_a + " vs " + label_b, data.str());
}

void write_report_curve_svg(const std::string& path, const NmeReport& report,
                            const std::string& title) {
  SvgCanvas svg;
  double xmax = 0.0;
  for (const auto& [x, _] : report.curve) xmax = std::max(xmax, x);
  svg.x0 = 0.0;
  svg.x1 = xmax > 0.0 ? xmax * 1.05 : 1.0;
  svg.y0 = 0.0;
  svg.y1 = 1.0;
  svg.axes("NME threshold", "fraction of images");
  if (!report.curve.empty()) {
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    for (const auto& p : report.curve) pts.push_back(p);
    svg.polyline(pts, "#4878b8");
  }
  std::ostringstream data;
  data << "nme_threshold,fraction\n";
  for (const auto& [x, y] : report.curve)
    data << num(x, "%.17g") << ',' << num(y, "%.17g") << '\n';
  svg.write(path, title, data.str());
}

}  // namespace boot3d
