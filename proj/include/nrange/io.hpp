// SPDX-License-Identifier: Apache-2.0
//
// File formats shared by the CLI drivers: observable JSON files, per-shot
// CSV data and minimal SVG plotting.
#ifndef NRANGE_IO_HPP
#define NRANGE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "nrange/qlinalg.hpp"

namespace nrange::cli {

using qlinalg::HermitianMatrix;
using qlinalg::ObservableSet;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Observable JSON schema:
// { "dims": [d1, ...], "observables": [ {"re": [[..]], "im": [[..]]}, ...] }
// re must be symmetric and im antisymmetric (Hermiticity).
nlohmann::json observable_set_to_json(const ObservableSet& obs);
ObservableSet observable_set_from_json(const nlohmann::json& j);
ObservableSet load_observables(const std::string& path);
void save_observables(const std::string& path, const ObservableSet& obs);

// Shot CSV: one column per observable, one row per shot; an optional
// non-numeric header line is skipped.
std::vector<std::vector<double>> load_shots_csv(const std::string& path,
                                                int observables);
void save_shots_csv(const std::string& path,
                    const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

// Y-flipped drawing canvas writing standalone SVG files.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height, double x_lo, double x_hi, double y_lo,
            double y_hi);

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color, double stroke_width = 1.5,
                bool closed = false);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(double x, double y, double radius_px, const std::string& color);
  void text(double x, double y, const std::string& label, int font_px = 12);
  void axes();
  void write(const std::string& path) const;

 private:
  std::pair<double, double> map(double x, double y) const;
  double width_, height_, x_lo_, x_hi_, y_lo_, y_hi_;
  std::string body_;
};

// Simple blue-to-red heatmap over a row-major grid of values.
void write_heatmap_svg(const std::string& path,
                       const std::vector<std::vector<double>>& values,
                       double x_lo, double x_hi, double y_lo, double y_hi,
                       const std::string& title);

std::string timestamp_suffix();

}  // namespace nrange::cli

#endif
