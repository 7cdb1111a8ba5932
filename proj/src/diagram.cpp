#include "siegel/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace siegel {

namespace {

constexpr int kCell = 28;
constexpr int kMargin = 40;
constexpr int kRadius = 7;

const char* kFillPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

}  // namespace

std::string render_diagram_points(const std::vector<std::vector<KTypePair>>& fills,
                                  const std::vector<Wall>& walls,
                                  const DiagramWindow& win) {
  if (win.empty()) throw std::domain_error("render_diagram: empty window");
  int na = win.amax - win.amin;
  int nb = win.bmax - win.bmin;
  int width = 2 * kMargin + na * kCell;
  int height = 2 * kMargin + nb * kCell;

  auto px = [&](double a) { return kMargin + (a - win.amin) * kCell; };
  auto py = [&](double b) { return kMargin + (win.bmax - b) * kCell; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" "
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
        "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444\"/></marker></defs>\n";

  std::vector<std::set<std::pair<int, int>>> marked(fills.size());
  for (std::size_t s = 0; s < fills.size(); ++s)
    for (const auto& p : fills[s]) marked[s].insert({p.a, p.b});

  // circles over the dominant region
  for (int a = win.amin; a <= win.amax; ++a) {
    for (int b = win.bmin; b <= win.bmax; ++b) {
      if (a < b) continue;
      int owner = -1;
      for (std::size_t s = 0; s < marked.size(); ++s)
        if (marked[s].count({a, b})) {
          owner = int(s);
          break;
        }
      os << "<circle cx=\"" << px(a) << "\" cy=\"" << py(b) << "\" r=\"" << kRadius
         << "\" stroke=\"#333\" stroke-width=\"1.2\" fill=\""
         << (owner >= 0 ? kFillPalette[owner % 4] : "none") << "\"/>\n";
    }
  }

  // wall lines with direction arrows
  for (const auto& w : walls) {
    if (w.wa == 0 && w.wb == 0) continue;
    double x1, y1, x2, y2;
    if (w.wb == 0) {
      // vertical line a = wc/wa
      double a = double(w.wc) / w.wa;
      x1 = x2 = px(a);
      y1 = py(win.bmax) - kCell / 2.0;
      y2 = py(win.bmin) + kCell / 2.0;
    } else if (w.wa == 0) {
      double b = double(w.wc) / w.wb;
      y1 = y2 = py(b);
      x1 = px(win.amin) - kCell / 2.0;
      x2 = px(win.amax) + kCell / 2.0;
    } else {
      // generic line: clip on the window's a-range
      double a1 = win.amin - 0.5, a2 = win.amax + 0.5;
      double b1 = (w.wc - w.wa * a1) / double(w.wb);
      double b2 = (w.wc - w.wa * a2) / double(w.wb);
      x1 = px(a1);
      y1 = py(b1);
      x2 = px(a2);
      y2 = py(b2);
    }
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\""
       << y2 << "\" stroke=\"#444\" stroke-width=\"1.5\"/>\n";
    // arrow from the line midpoint into the surviving half plane
    double mx = (x1 + x2) / 2.0, my = (y1 + y2) / 2.0;
    // gradient of w_a a + w_b b in pixel coordinates: a to the right, b upward
    double gx = w.sign * w.wa, gy = -w.sign * w.wb;
    double norm = std::sqrt(gx * gx + gy * gy);
    gx *= kCell * 0.8 / norm;
    gy *= kCell * 0.8 / norm;
    os << "<line x1=\"" << mx << "\" y1=\"" << my << "\" x2=\"" << mx + gx
       << "\" y2=\"" << my + gy
       << "\" stroke=\"#444\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
  }

  os << "</svg>\n";
  return os.str();
}

std::string render_diagram(const std::vector<SupportSpec>& supports,
                           const std::vector<Wall>& walls, const DiagramWindow& win) {
  if (win.empty()) throw std::domain_error("render_diagram: empty window");
  std::vector<std::vector<KTypePair>> fills;
  fills.reserve(supports.size());
  for (const auto& s : supports)
    fills.push_back(s.enumerate_window(win.amin, win.amax, win.bmin, win.bmax));
  return render_diagram_points(fills, walls, win);
}

}  // namespace siegel
