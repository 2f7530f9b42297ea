// SPDX-License-Identifier: Apache-2.0
#include "nrange/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace nrange::cli {

nlohmann::json observable_set_to_json(const ObservableSet& obs) {
  nlohmann::json j;
  j["dims"] = obs.profile.local_dims();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : obs.observables) {
    const int d = m.dim();
    std::vector<std::vector<double>> re(d, std::vector<double>(d));
    std::vector<std::vector<double>> im(d, std::vector<double>(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        re[r][c] = m(r, c).real();
        im[r][c] = m(r, c).imag();
      }
    list.push_back({{"re", re}, {"im", im}});
  }
  j["observables"] = std::move(list);
  return j;
}

ObservableSet observable_set_from_json(const nlohmann::json& j) {
  if (!j.contains("dims") || !j.contains("observables"))
    throw IoError("observable file needs 'dims' and 'observables'");
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  qlinalg::DimensionProfile profile(dims);
  const int d = profile.total_dim();

  std::vector<HermitianMatrix> obs;
  for (const auto& entry : j.at("observables")) {
    const auto re = entry.at("re").get<std::vector<std::vector<double>>>();
    const auto im = entry.at("im").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
      throw IoError("observable matrix does not match the dimension profile");
    std::vector<cd> entries(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r) {
      if (static_cast<int>(re[r].size()) != d || static_cast<int>(im[r].size()) != d)
        throw IoError("ragged observable matrix");
      for (int c = 0; c < d; ++c) entries[r * d + c] = cd{re[r][c], im[r][c]};
    }
    try {
      obs.emplace_back(d, std::move(entries));
    } catch (const InvalidMatrixError& err) {
      throw IoError(std::string("observable is not Hermitian: ") + err.what());
    }
  }
  if (obs.empty()) throw IoError("observable file contains no observables");
  return ObservableSet(profile, std::move(obs));
}

ObservableSet load_observables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open observable file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return observable_set_from_json(j);
}

void save_observables(const std::string& path, const ObservableSet& obs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write observable file: " + path);
  out << observable_set_to_json(obs).dump(2) << "\n";
}

std::vector<std::vector<double>> load_shots_csv(const std::string& path,
                                                int observables) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        row.push_back(v);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw IoError("non-numeric cell in data file: " + path);
    }
    first = false;
    if (static_cast<int>(row.size()) != observables)
      throw IoError("data row width does not match observable count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("data file contains no shots: " + path);
  return rows;
}

void save_shots_csv(const std::string& path,
                    const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write data file: " + path);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

SvgCanvas::SvgCanvas(double width, double height, double x_lo, double x_hi,
                     double y_lo, double y_hi)
    : width_(width), height_(height), x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo),
      y_hi_(y_hi) {}

std::pair<double, double> SvgCanvas::map(double x, double y) const {
  const double margin = 40.0;
  const double sx = (width_ - 2 * margin) / (x_hi_ - x_lo_);
  const double sy = (height_ - 2 * margin) / (y_hi_ - y_lo_);
  return {margin + (x - x_lo_) * sx, height_ - margin - (y - y_lo_) * sy};
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double stroke_width,
                         bool closed) {
  std::ostringstream s;
  s << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << color
    << "\" stroke-width=\"" << stroke_width << "\" points=\"";
  for (const auto& [x, y] : pts) {
    const auto [px, py] = map(x, y);
    s << format_double(px) << "," << format_double(py) << " ";
  }
  s << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::rect(double x, double y, double w, double h,
                     const std::string& fill) {
  const auto [px, py] = map(x, y + h);
  const auto [qx, qy] = map(x + w, y);
  std::ostringstream s;
  s << "<rect x=\"" << format_double(px) << "\" y=\"" << format_double(py)
    << "\" width=\"" << format_double(qx - px) << "\" height=\""
    << format_double(qy - py) << "\" fill=\"" << fill << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::circle(double x, double y, double radius_px,
                       const std::string& color) {
  const auto [px, py] = map(x, y);
  std::ostringstream s;
  s << "<circle cx=\"" << format_double(px) << "\" cy=\"" << format_double(py)
    << "\" r=\"" << radius_px << "\" fill=\"" << color << "\"/>\n";
  body_ += s.str();
}

void SvgCanvas::text(double x, double y, const std::string& label, int font_px) {
  const auto [px, py] = map(x, y);
  std::ostringstream s;
  s << "<text x=\"" << format_double(px) << "\" y=\"" << format_double(py)
    << "\" font-size=\"" << font_px << "\" font-family=\"sans-serif\">" << label
    << "</text>\n";
  body_ += s.str();
}

void SvgCanvas::axes() {
  polyline({{x_lo_, 0.0}, {x_hi_, 0.0}}, "#888", 0.8);
  polyline({{0.0, y_lo_}, {0.0, y_hi_}}, "#888", 0.8);
}

void SvgCanvas::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write SVG file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
      << "\" height=\"" << height_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_ << "</svg>\n";
}

void write_heatmap_svg(const std::string& path,
                       const std::vector<std::vector<double>>& values,
                       double x_lo, double x_hi, double y_lo, double y_hi,
                       const std::string& title) {
  if (values.empty() || values.front().empty())
    throw IoError("heatmap needs a non-empty grid");
  double vmin = values[0][0], vmax = values[0][0];
  for (const auto& row : values)
    for (double v : row) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  const double span = (vmax > vmin) ? vmax - vmin : 1.0;

  SvgCanvas canvas(560, 520, x_lo, x_hi, y_lo, y_hi);
  const int ny = static_cast<int>(values.size());
  const int nx = static_cast<int>(values.front().size());
  const double dx = (x_hi - x_lo) / nx, dy = (y_hi - y_lo) / ny;
  for (int r = 0; r < ny; ++r) {
    for (int c = 0; c < nx; ++c) {
      const double t = (values[r][c] - vmin) / span;
      const int red = static_cast<int>(40 + 215 * t);
      const int blue = static_cast<int>(255 - 215 * t);
      char color[16];
      std::snprintf(color, sizeof(color), "#%02x30%02x", red, blue);
      canvas.rect(x_lo + c * dx, y_lo + r * dy, dx, dy, color);
    }
  }
  canvas.text(x_lo, y_hi + 0.02 * (y_hi - y_lo),
              title + "  [" + format_double(vmin) + ", " + format_double(vmax) + "]");
  canvas.write(path);
}

std::string timestamp_suffix() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&now));
  return buf;
}

}  // namespace nrange::cli
