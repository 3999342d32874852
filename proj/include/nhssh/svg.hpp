#pragma once

#include <string>
#include <vector>

#include "nhssh/hamiltonian.hpp"

namespace nhssh::svg {

struct Series {
  std::string label;
  std::string color;  // any SVG color
  std::vector<cplx> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "Re E";
  std::string y_label = "Im E";
  int width = 640;
  int height = 480;
  double marker_radius = 1.6;
  std::string metadata;  // written verbatim (escaped) into <metadata> when nonempty
};

// Fixed color per boundary tag, legend order PBC, xOBC, yOBC, xyOBC.
std::string bc_color(const std::string& bc);
int bc_rank(const std::string& bc);  // position in the legend order, unknown tags last

// Scatter of (Re E, Im E) with axes, ticks and a legend. Deterministic output: coordinates are
// printed with a fixed number of decimals.
std::string render_scatter(const std::vector<Series>& series, const PlotOptions& opts = {});

}  // namespace nhssh::svg
