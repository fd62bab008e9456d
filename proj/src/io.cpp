#include "spectropt/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spectropt::io {

using nlohmann::ordered_json;

const char* library_version() { return "spectropt 0.3.0"; }

namespace {

ordered_json grid_to_json(const GridSpec& g) {
  return ordered_json{{"L", g.L}, {"d", g.d}, {"n", g.n}};
}

GridSpec grid_from_json(const ordered_json& j) {
  return build_grid(j.at("d").get<int>(), j.at("L").get<double>(),
                    j.at("n").get<int>());
}

}  // namespace

std::string field_to_json(const ScalarField& f) {
  ordered_json j = grid_to_json(f.grid);
  j["values"] = f.values;
  return j.dump();
}

std::string potential_to_json(const GeneralizedPotential& p) {
  ordered_json j = grid_to_json(p.grid);
  j["mask"] = p.inf_mask;
  j["values"] = p.vfin;
  return j.dump();
}

ScalarField field_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  ScalarField f(grid_from_json(j));
  f.values = j.at("values").get<std::vector<double>>();
  if (f.values.size() != static_cast<std::size_t>(f.grid.dofs()))
    throw std::invalid_argument("field_from_json: values/grid size mismatch");
  return f;
}

GeneralizedPotential potential_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  GeneralizedPotential p(grid_from_json(j));
  p.vfin = j.at("values").get<std::vector<double>>();
  p.inf_mask = j.at("mask").get<std::vector<std::uint8_t>>();
  if (p.vfin.size() != static_cast<std::size_t>(p.grid.dofs()) ||
      p.inf_mask.size() != p.vfin.size())
    throw std::invalid_argument("potential_from_json: size mismatch");
  return p;
}

std::string field_to_csv(const ScalarField& f) {
  std::ostringstream out;
  out.precision(17);
  out << (f.grid.d == 1 ? "i,x,value\n" : "i,x,y,value\n");
  for (std::int64_t i = 0; i < f.grid.dofs(); ++i) {
    double x, y;
    node_xy(f.grid, i, &x, &y);
    out << i << ',' << x;
    if (f.grid.d == 2) out << ',' << y;
    out << ',' << f.values[i] << '\n';
  }
  return out.str();
}

namespace {

// Blue -> white -> red-ish ramp, v in [0,1].
void ramp(double v, int* r, int* g, int* b) {
  v = std::min(1.0, std::max(0.0, v));
  *r = static_cast<int>(255.0 * std::min(1.0, 2.0 * v));
  *g = static_cast<int>(255.0 * (1.0 - std::fabs(2.0 * v - 1.0)));
  *b = static_cast<int>(255.0 * std::min(1.0, 2.0 * (1.0 - v)));
}

}  // namespace

std::string field_to_svg(const ScalarField& f,
                         const std::vector<std::uint8_t>* mask) {
  const GridSpec& g = f.grid;
  std::ostringstream out;
  out.precision(6);
  double lo = f.values.empty() ? 0.0 : f.values[0], hi = lo;
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  if (g.d == 1) {
    const int W = 640, H = 360, pad = 20;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" "
           "points=\"";
    for (int i = 0; i < g.n; ++i) {
      const double px =
          pad + (g.coord(i) + g.L) / (2.0 * g.L) * (W - 2 * pad);
      const double py = H - pad - (f.values[i] - lo) / span * (H - 2 * pad);
      out << px << ',' << py << ' ';
    }
    out << "\"/>\n";
    if (mask) {
      for (int i = 0; i < g.n; ++i) {
        if (!(*mask)[i]) continue;
        const double px =
            pad + (g.coord(i) + g.L) / (2.0 * g.L) * (W - 2 * pad);
        out << "<line x1=\"" << px << "\" y1=\"" << H - pad << "\" x2=\"" << px
            << "\" y2=\"" << H - pad + 6
            << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
      }
    }
    out << "</svg>\n";
    return out.str();
  }

  const int n = g.n;
  const int px_cell = std::max(1, 512 / n);
  const int W = n * px_cell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << W << "\" viewBox=\"0 0 " << W << ' ' << W
      << "\" shape-rendering=\"crispEdges\">\n";
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::int64_t i = static_cast<std::int64_t>(r) * n + c;
      int cr, cg, cb;
      if (mask && (*mask)[i]) {
        cr = cg = cb = 40;
      } else {
        ramp((f.values[i] - lo) / span, &cr, &cg, &cb);
      }
      out << "<rect x=\"" << c * px_cell << "\" y=\"" << (n - 1 - r) * px_cell
          << "\" width=\"" << px_cell << "\" height=\"" << px_cell
          << "\" fill=\"rgb(" << cr << ',' << cg << ',' << cb << ")\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace spectropt::io
