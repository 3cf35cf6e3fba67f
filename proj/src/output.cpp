// Copyright 2026 The crlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crlab/driver.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace crlab {
namespace {

std::string to_chars_string(double x, std::chars_format fmt, int precision) {
  std::array<char, 64> buf{};
  const auto res = precision < 0
                       ? std::to_chars(buf.data(), buf.data() + buf.size(), x)
                       : std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                       fmt, precision);
  if (res.ec != std::errc())
    throw std::runtime_error("number formatting failed");
  return {buf.data(), res.ptr};
}

// Shortest round-trip form, for coordinates.
std::string exact(double x) {
  return to_chars_string(x, std::chars_format::general, -1);
}

std::string fixed(double x) {
  return to_chars_string(x, std::chars_format::fixed, 2);
}

void optional_cell(std::ostream &os, const std::optional<double> &v) {
  os << ',';
  if (v)
    os << format_number(*v);
}

void scalars(std::ostream &os, const char *name,
             const std::vector<double> &values) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values)
    os << format_number(v) << '\n';
}

} // namespace

std::string format_number(double x) {
  return to_chars_string(x, std::chars_format::scientific, 5);
}

void write_csv(std::ostream &os, std::span<const RunRow> rows, Variant v) {
  os << "k,n_elements,err,eoc,est,eff,ncf,eta,osc\n";
  for (const auto &row : rows) {
    const auto &s = row.get(v);
    os << row.k << ',' << row.n_elements;
    optional_cell(os, row.err);
    optional_cell(os, row.eoc);
    os << ',' << format_number(s.est);
    optional_cell(os, s.eff);
    os << ',' << format_number(s.ncf) << ',' << format_number(s.eta) << ','
       << format_number(s.osc) << '\n';
  }
}

void write_vtk(std::ostream &os, const Mesh &mesh,
               const EstimatorReport &report) {
  const auto nt = mesh.num_elements();
  if (report.total2.size() != nt)
    throw std::invalid_argument("estimator report does not match the mesh");
  os << "# vtk DataFile Version 3.0\n"
     << "crlab estimator " << to_string(report.variant) << '\n'
     << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto &p : mesh.vertices())
    os << exact(p.x) << ' ' << exact(p.y) << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto &el : mesh.elements())
    os << "3 " << el.v[0] << ' ' << el.v[1] << ' ' << el.v[2] << '\n';
  os << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t)
    os << "5\n";
  os << "CELL_DATA " << nt << '\n';
  scalars(os, "ncf2", report.ncf2);
  scalars(os, "eta2", report.eta2);
  scalars(os, "osc2", report.osc2);
  scalars(os, "total2", report.total2);
}

void write_svg(std::ostream &os, std::span<const RunRow> rows, Variant v) {
  constexpr double width = 640, height = 480;
  constexpr double left = 70, right = 20, top = 20, bottom = 50;

  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  auto extend_y = [&](double y) {
    if (y > 0.0) {
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  };
  for (const auto &row : rows) {
    const double x = std::log10(static_cast<double>(row.n_elements));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    if (row.err)
      extend_y(*row.err);
    extend_y(row.get(v).est);
  }
  if (rows.empty() || !(ymin <= ymax)) {
    xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  }
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);

  auto px = [&](double lx) {
    return left + (lx - xmin) / (xmax - xmin) * (width - left - right);
  };
  auto py = [&](double ly) {
    return top + (ymax - ly) / (ymax - ymin) * (height - top - bottom);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
     << width - left - right << "\" height=\"" << height - top - bottom
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = xmin; d <= xmax; d += 1.0)
    os << "<text x=\"" << fixed(px(d)) << "\" y=\"" << height - bottom + 18
       << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
  for (double d = ymin; d <= ymax; d += 1.0)
    os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(py(d) + 4)
       << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  os << "<text x=\"" << fixed(left + (width - left - right) / 2) << "\" y=\""
     << height - 10 << "\" text-anchor=\"middle\">number of elements</text>\n";

  auto polyline = [&](const char *color, auto value) {
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto &row : rows) {
      const auto y = value(row);
      if (!y || !(*y > 0.0))
        continue;
      os << (first ? "" : " ")
         << fixed(px(std::log10(static_cast<double>(row.n_elements)))) << ','
         << fixed(py(std::log10(*y)));
      first = false;
    }
    os << "\"/>\n";
  };
  polyline("#1f77b4", [](const RunRow &r) { return r.err; });
  polyline("#d62728", [v](const RunRow &r) {
    return std::optional<double>(r.get(v).est);
  });

  // Slope -1/2 guide through the upper right corner region.
  const double y0 = ymax - 0.5, x0 = xmin;
  const double x1 = xmax, y1 = y0 - 0.5 * (x1 - x0);
  os << "<line x1=\"" << fixed(px(x0)) << "\" y1=\"" << fixed(py(y0))
     << "\" x2=\"" << fixed(px(x1)) << "\" y2=\"" << fixed(py(y1))
     << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

  const double lx = width - right - 150;
  const char *labels[] = {"err", "est", "slope -1/2"};
  const char *colors[] = {"#1f77b4", "#d62728", "gray"};
  for (int i = 0; i < 3; ++i) {
    const double ly = top + 20 + 18 * i;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24
       << "\" y2=\"" << ly << "\" stroke=\"" << colors[i] << "\"/>\n"
       << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
       << labels[i] << (i == 1 ? std::string(" (") +
                                     std::string(to_string(v)) + ")"
                               : std::string())
       << "</text>\n";
  }
  os << "</svg>\n";
}

} // namespace crlab
