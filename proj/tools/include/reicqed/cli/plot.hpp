#pragma once

#include <string>
#include <variant>
#include <vector>

namespace reicqed::cli {

struct LinePlot {
  std::string x;
  std::vector<std::string> y;
  std::string x_label;  // with unit, e.g. "detuning (MHz)"
  std::string y_label;
  std::string title;
  double x_scale = 1.0;  // applied to the CSV value before plotting
  double y_scale = 1.0;
  bool log_x = false;
  bool log_y = false;
};

struct Heatmap {
  std::string x, y, z;
  std::string x_label, y_label, z_label;
  std::string title;
  double x_scale = 1.0;
  double y_scale = 1.0;
};

using PlotSpec = std::variant<LinePlot, Heatmap>;

// Renders a self-contained SVG from a CSV. Throws ValidationError when the
// CSV lacks the requested columns or holds no data; no file is written then.
void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& svg_path);

}  // namespace reicqed::cli
