#include "ase/svg.hpp"

#include <algorithm>
#include <cmath>

#include "ase/errors.hpp"
#include "ase/io.hpp"

namespace ase {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  double lo = 0.0, hi = 1.0;   // data range
  double p0 = 0.0, p1 = 1.0;   // pixel range
  double map(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

void pad(double& lo, double& hi) {
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double m = 0.06 * (hi - lo);
  lo -= m;
  hi += m;
}

void line(std::ostream& os, double x1, double y1, double x2, double y2, const char* style) {
  os << "<line x1=\"" << fmt6(x1) << "\" y1=\"" << fmt6(y1) << "\" x2=\"" << fmt6(x2)
     << "\" y2=\"" << fmt6(y2) << "\" " << style << "/>\n";
}

void text(std::ostream& os, double x, double y, const std::string& s, const char* extra = "") {
  os << "<text x=\"" << fmt6(x) << "\" y=\"" << fmt6(y)
     << "\" font-family=\"monospace\" font-size=\"12\" " << extra << ">" << s << "</text>\n";
}

}  // namespace

void write_sweep_svg(std::ostream& os, const SweepSummary& summary) {
  std::vector<double> xs, ys, lo_bar, hi_bar;
  for (const auto& p : summary.per_n) {
    if (!(p.mean_err > 0.0)) continue;
    xs.push_back(std::log10((double)p.n));
    ys.push_back(std::log10(p.mean_err));
    const double lo = std::max(p.mean_err - p.stderr_err, p.mean_err * 1e-3);
    lo_bar.push_back(std::log10(lo));
    hi_bar.push_back(std::log10(p.mean_err + p.stderr_err));
  }
  if (xs.empty()) throw ValidationError("plot: no positive means to draw");

  const double W = 800, H = 600;
  Axis ax{*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end()),
          80, W - 40};
  Axis ay{*std::min_element(lo_bar.begin(), lo_bar.end()),
          *std::max_element(hi_bar.begin(), hi_bar.end()), H - 60, 40};
  pad(ax.lo, ax.hi);
  pad(ay.lo, ay.hi);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  // frame
  line(os, ax.p0, ay.p0, ax.p1, ay.p0, "stroke=\"black\"");
  line(os, ax.p0, ay.p0, ax.p0, ay.p1, "stroke=\"black\"");
  text(os, (ax.p0 + ax.p1) / 2 - 40, H - 16, "n (log scale)");
  text(os, 10, 30, "mean 2-to-inf error (log scale)");

  // x ticks at the grid values, y ticks at integer powers of ten
  for (const auto& p : summary.per_n) {
    const double px = ax.map(std::log10((double)p.n));
    line(os, px, ay.p0, px, ay.p0 + 6, "stroke=\"black\"");
    text(os, px - 14, ay.p0 + 22, std::to_string(p.n));
  }
  for (int e = (int)std::floor(ay.lo); e <= (int)std::ceil(ay.hi); ++e) {
    if (e < ay.lo || e > ay.hi) continue;
    const double py = ay.map(e);
    line(os, ax.p0 - 6, py, ax.p0, py, "stroke=\"black\"");
    text(os, 30, py + 4, "1e" + std::to_string(e));
  }

  // error bars
  for (size_t i = 0; i < xs.size(); ++i) {
    const double px = ax.map(xs[i]);
    const double y1 = ay.map(lo_bar[i]), y2 = ay.map(hi_bar[i]);
    line(os, px, y1, px, y2, "stroke=\"#1f77b4\"");
    line(os, px - 4, y1, px + 4, y1, "stroke=\"#1f77b4\"");
    line(os, px - 4, y2, px + 4, y2, "stroke=\"#1f77b4\"");
  }

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ' ';
    os << fmt6(ax.map(xs[i])) << ',' << fmt6(ay.map(ys[i]));
  }
  os << "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i)
    os << "<circle cx=\"" << fmt6(ax.map(xs[i])) << "\" cy=\"" << fmt6(ay.map(ys[i]))
       << "\" r=\"3\" fill=\"#1f77b4\"/>\n";

  if (std::isfinite(summary.fit.slope)) {
    text(os, ax.p0 + 10, 56,
         "slope " + fmt6(summary.fit.slope) + "  [" + fmt6(summary.fit.ci_lo) + ", " +
             fmt6(summary.fit.ci_hi) + "]");
  }
  os << "</svg>\n";
}

namespace {

void scatter_panel(std::ostream& os, const char* id, double x_off, const Matrix& pts,
                   const std::vector<int>& labels, const std::string& title) {
  const double side = 520, margin = 50;
  double lo_x = pts(0, 0), hi_x = pts(0, 0), lo_y = pts(0, 1), hi_y = pts(0, 1);
  for (int i = 0; i < pts.rows(); ++i) {
    lo_x = std::min(lo_x, pts(i, 0));
    hi_x = std::max(hi_x, pts(i, 0));
    lo_y = std::min(lo_y, pts(i, 1));
    hi_y = std::max(hi_y, pts(i, 1));
  }
  pad(lo_x, hi_x);
  pad(lo_y, hi_y);
  Axis ax{lo_x, hi_x, x_off + margin, x_off + side - margin};
  Axis ay{lo_y, hi_y, side - margin, margin};

  os << "<g id=\"" << id << "\">\n";
  os << "<rect x=\"" << fmt6(x_off + margin) << "\" y=\"" << fmt6(margin) << "\" width=\""
     << fmt6(side - 2 * margin) << "\" height=\"" << fmt6(side - 2 * margin)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  text(os, x_off + margin, margin - 12, title);
  for (int i = 0; i < pts.rows(); ++i) {
    const int k = labels.empty() ? 0 : labels[i] % 8;
    os << "<circle class=\"block" << k << "\" cx=\"" << fmt6(ax.map(pts(i, 0))) << "\" cy=\""
       << fmt6(ay.map(pts(i, 1))) << "\" r=\"2.5\" fill=\"" << kPalette[k]
       << "\" fill-opacity=\"0.7\"/>\n";
  }
  os << "</g>\n";
}

}  // namespace

void write_scatter_svg(std::ostream& os, const Matrix& Xhat, const std::vector<int>& labels,
                       const Matrix* projected) {
  if (Xhat.rows() < 1 || Xhat.cols() < 2)
    throw ValidationError("plot: scatter needs at least two embedding dimensions");
  if (!labels.empty() && (int)labels.size() != Xhat.rows())
    throw ValidationError("plot: label count does not match the embedding");
  const double W = projected ? 1100 : 560, H = 540;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  scatter_panel(os, "xhat", 0, Xhat, labels, "embedded rows");
  if (projected) scatter_panel(os, "yhat", 540, *projected, labels, "sphere projection");
  os << "</svg>\n";
}

}  // namespace ase
