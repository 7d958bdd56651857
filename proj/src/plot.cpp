#include "rcepc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace rcepc {

PlotAxis plot_axis_from_name(const std::string& name) {
  if (name == "available") return PlotAxis::available;
  if (name == "radiated") return PlotAxis::radiated;
  if (name == "pa") return PlotAxis::pa;
  throw std::invalid_argument("plot axis must be available, radiated or pa");
}

namespace {

const char* axis_label(PlotAxis axis, bool db) {
  switch (axis) {
    case PlotAxis::available: return db ? "Available power [dBW]" : "Available power [W]";
    case PlotAxis::radiated: return db ? "Radiated power [dBW]" : "Radiated power [W]";
    case PlotAxis::pa: return db ? "PA consumed power [dBW]" : "PA consumed power [W]";
  }
  return "";
}

double row_x(const ResultRow& r, PlotAxis axis) {
  switch (axis) {
    case PlotAxis::available: return r.ptx;
    case PlotAxis::radiated: return r.radiated;
    case PlotAxis::pa: return r.pa_power;
  }
  return 0.0;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string render_plot_svg(const std::vector<ResultRow>& rows, PlotAxis axis,
                            bool db_axis) {
  if (rows.empty()) throw std::invalid_argument("plot: no rows");

  // Group by precoder, keeping first-seen order and the row order per group.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    if (!groups.count(r.precoder)) order.push_back(r.precoder);
    groups[r.precoder].push_back(&r);
  }

  double xmin = 1e300, xmax = -1e300;
  double ber_min = 1.0;
  for (const auto& r : rows) {
    double x = row_x(r, axis);
    if (db_axis) x = 10.0 * std::log10(std::max(x, 1e-300));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    if (r.ber > 0.0) ber_min = std::min(ber_min, r.ber);
  }
  if (xmax <= xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  // Zero-BER points are drawn clamped to the bottom decade.
  const double floor_ber = std::max(ber_min / 10.0, 1e-8);
  const double ymin = std::floor(std::log10(floor_ber));
  const double ymax = 0.0;  // BER <= 1

  const double width = 640, height = 480;
  const double ml = 70, mr = 150, mt = 30, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double logber) {
    return mt + (ymax - logber) / (ymax - ymin) * ph;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // y grid: one line per decade.
  for (double d = ymax; d >= ymin - 1e-9; d -= 1.0) {
    const double y = sy(d);
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
           fmt(ml + pw) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">1e" + fmt(d) + "</text>\n";
  }
  // x ticks: 6 evenly spaced.
  for (int i = 0; i <= 5; ++i) {
    const double x = xmin + (xmax - xmin) * i / 5.0;
    const double px = sx(x);
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
           fmt(px) + "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + fmt(x) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"14\">" +
         axis_label(axis, db_axis) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 " +
         fmt(mt + ph / 2) + ")\">BER</text>\n";

  int color_idx = 0;
  double legend_y = mt + 15;
  for (const auto& name : order) {
    const char* color = kPalette[color_idx++ % 7];
    const auto& pts = groups[name];
    std::string poly;
    for (const auto* r : pts) {
      double x = row_x(*r, axis);
      if (db_axis) x = 10.0 * std::log10(std::max(x, 1e-300));
      const double ber = r->ber > 0.0 ? r->ber : floor_ber;
      const double px = sx(x), py = sy(std::log10(ber));
      poly += fmt(px) + "," + fmt(py) + " ";
      svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(py) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    if (pts.size() > 1)
      svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" +
             color + "\" stroke-width=\"1.5\"/>\n";
    svg += "<line x1=\"" + fmt(ml + pw + 12) + "\" y1=\"" + fmt(legend_y - 4) +
           "\" x2=\"" + fmt(ml + pw + 36) + "\" y2=\"" + fmt(legend_y - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(ml + pw + 42) + "\" y=\"" + fmt(legend_y) +
           "\" font-size=\"12\">" + name + "</text>\n";
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::vector<ResultRow>& rows, PlotAxis axis,
               const std::string& path, bool db_axis) {
  const std::string svg = render_plot_svg(rows, axis, db_axis);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << svg;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rcepc
