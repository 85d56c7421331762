#pragma once

#include <string>
#include <vector>

#include "synchrony/dynamics.hpp"
#include "synchrony/graph.hpp"

namespace synchrony {

// Dependency-free SVG emission. Output is well-formed XML: one root element,
// balanced tags, quoted attributes, escaped text.

struct LineSeries {
  std::string label;
  std::vector<double> values;  // y per integer x
  std::string color;           // CSS color
};

struct LineChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 720;
  int height = 440;
  bool legend = true;
};

std::string line_chart_svg(const std::vector<LineSeries>& series, const LineChartOptions& options);

// Network snapshot on a deterministic circular layout; acting nodes red,
// inactive nodes black.
struct SnapshotOptions {
  std::string title;
  int size = 640;
};

std::string network_snapshot_svg(const Graph& graph, const SystemState& state,
                                 const SnapshotOptions& options);

std::string xml_escape(const std::string& text);

}  // namespace synchrony
