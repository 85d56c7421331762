#include "synchrony/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "synchrony/csv.hpp"

namespace synchrony {

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string fnum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string line_chart_svg(const std::vector<LineSeries>& series,
                           const LineChartOptions& options) {
  const int w = options.width, h = options.height;
  const double ml = 60, mr = options.legend ? 150 : 20, mt = 36, mb = 48;
  const double plot_w = w - ml - mr, plot_h = h - mt - mb;

  std::size_t max_len = 1;
  double y_min = 0.0, y_max = 0.0;
  for (const auto& s : series) {
    max_len = std::max(max_len, s.values.size());
    for (double v : s.values) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (y_max <= y_min) y_max = y_min + 1.0;
  const double x_max = static_cast<double>(max_len > 1 ? max_len - 1 : 1);

  const auto sx = [&](double x) { return ml + plot_w * (x / x_max); };
  const auto sy = [&](double y) { return mt + plot_h * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    out << "  <text x=\"" << fnum(ml) << "\" y=\"22\" font-family=\"sans-serif\" "
        << "font-size=\"15\" fill=\"#222\">" << xml_escape(options.title) << "</text>\n";

  // Axes.
  out << "  <line x1=\"" << fnum(ml) << "\" y1=\"" << fnum(mt) << "\" x2=\"" << fnum(ml)
      << "\" y2=\"" << fnum(mt + plot_h) << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << fnum(ml) << "\" y1=\"" << fnum(mt + plot_h) << "\" x2=\""
      << fnum(ml + plot_w) << "\" y2=\"" << fnum(mt + plot_h)
      << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  // Ticks: 5 per axis.
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_max * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    out << "  <text x=\"" << fnum(sx(fx)) << "\" y=\"" << fnum(mt + plot_h + 16)
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\" "
        << "text-anchor=\"middle\">" << csv::num(fx) << "</text>\n";
    out << "  <text x=\"" << fnum(ml - 6) << "\" y=\"" << fnum(sy(fy) + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\" "
        << "text-anchor=\"end\">" << csv::num(fy) << "</text>\n";
    out << "  <line x1=\"" << fnum(ml) << "\" y1=\"" << fnum(sy(fy)) << "\" x2=\""
        << fnum(ml + plot_w) << "\" y2=\"" << fnum(sy(fy))
        << "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
  }

  // Axis labels.
  out << "  <text x=\"" << fnum(ml + plot_w / 2) << "\" y=\"" << fnum(h - 10)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
      << "text-anchor=\"middle\">" << xml_escape(options.x_label) << "</text>\n";
  out << "  <text x=\"16\" y=\"" << fnum(mt + plot_h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << fnum(mt + plot_h / 2) << ")\">"
      << xml_escape(options.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ls = series[s];
    if (ls.values.empty()) continue;
    const std::string color =
        ls.color.empty() ? kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))] : ls.color;
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ls.values.size(); ++i) {
      if (i) out << ' ';
      out << fnum(sx(static_cast<double>(i))) << ',' << fnum(sy(ls.values[i]));
    }
    out << "\"/>\n";
    if (options.legend) {
      const double ly = mt + 14 + 18 * static_cast<double>(s);
      out << "  <line x1=\"" << fnum(ml + plot_w + 10) << "\" y1=\"" << fnum(ly - 4) << "\" x2=\""
          << fnum(ml + plot_w + 34) << "\" y2=\"" << fnum(ly - 4) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      out << "  <text x=\"" << fnum(ml + plot_w + 40) << "\" y=\"" << fnum(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">"
          << xml_escape(ls.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string network_snapshot_svg(const Graph& graph, const SystemState& state,
                                 const SnapshotOptions& options) {
  const int size = options.size;
  const double cx = size / 2.0, cy = size / 2.0;
  const double radius = size / 2.0 - 40.0;
  constexpr double kTau = 6.283185307179586;

  std::vector<std::pair<double, double>> pos(graph.n);
  for (int i = 0; i < graph.n; ++i) {
    const double angle = kTau * i / graph.n - kTau / 4.0;
    pos[i] = {cx + radius * std::cos(angle), cy + radius * std::sin(angle)};
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    out << "  <text x=\"12\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
        << "fill=\"#222\">" << xml_escape(options.title) << "</text>\n";
  for (int u = 0; u < graph.n; ++u) {
    for (int v : graph.adj[u]) {
      if (u >= v) continue;
      out << "  <line x1=\"" << fnum(pos[u].first) << "\" y1=\"" << fnum(pos[u].second)
          << "\" x2=\"" << fnum(pos[v].first) << "\" y2=\"" << fnum(pos[v].second)
          << "\" stroke=\"#cccccc\" stroke-width=\"0.7\"/>\n";
    }
  }
  const double node_r = std::max(2.5, std::min(7.0, 180.0 / graph.n + 2.0));
  for (int i = 0; i < graph.n; ++i) {
    const bool acting = state.actions[i] != 0;
    out << "  <circle cx=\"" << fnum(pos[i].first) << "\" cy=\"" << fnum(pos[i].second)
        << "\" r=\"" << fnum(node_r) << "\" fill=\"" << (acting ? "#d62728" : "#111111")
        << "\"/>\n";
  }
  // Legend: acting red, inactive black.
  out << "  <circle cx=\"18\" cy=\"" << size - 34 << "\" r=\"5\" fill=\"#d62728\"/>\n";
  out << "  <text x=\"28\" y=\"" << size - 30
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">acting</text>\n";
  out << "  <circle cx=\"18\" cy=\"" << size - 16 << "\" r=\"5\" fill=\"#111111\"/>\n";
  out << "  <text x=\"28\" y=\"" << size - 12
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">inactive</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace synchrony
