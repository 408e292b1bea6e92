#include "smoothset/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>

namespace smoothset {

Grid::Grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny)
    : x_min(x_min), x_max(x_max), y_min(y_min), y_max(y_max), nx(nx), ny(ny) {
  if (!(x_min < x_max) || !(y_min < y_max))
    throw InvalidGrid("grid bounds must satisfy x_min < x_max and y_min < y_max");
  if (nx < 1 || ny < 1) throw InvalidGrid("grid resolution must be positive");
  if (cells() > kMaxCells) throw GridTooLarge("grid exceeds the cell limit");
}

std::int64_t Bitmap::inside_count() const {
  std::int64_t n = 0;
  for (std::uint8_t v : inside) n += v;
  return n;
}

std::int64_t Bitmap::undefined_count() const {
  std::int64_t n = 0;
  for (std::uint8_t v : undefined) n += v;
  return n;
}

double Bitmap::inside_fraction() const {
  return static_cast<double>(inside_count()) / static_cast<double>(grid.cells());
}

Bitmap sample_membership(const Region& r, const Grid& g) {
  Bitmap bm(g);
  std::size_t idx = 0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.cell_y(j);
    for (int i = 0; i < g.nx; ++i, ++idx) {
      const double l = log_field(r, {g.cell_x(i), y});
      if (std::isnan(l)) {
        bm.undefined[idx] = 1;
      } else if (l <= 0.0) {  // boundary counts inside
        bm.inside[idx] = 1;
      }
    }
  }
  return bm;
}

namespace {

bool crisp_node(const SetNode& s, const SetProgram& program, Point p) {
  switch (s.op) {
    case SetOp::kVar: {
      const auto it = program.definitions.find(s.name);
      if (it == program.definitions.end()) throw UnresolvedName(s.name);
      const double f = it->second.body.eval(p);
      return f <= 0.0;  // NaN compares false: non-member
    }
    case SetOp::kNot: return !crisp_node(*s.left, program, p);
    case SetOp::kAnd: return crisp_node(*s.left, program, p) && crisp_node(*s.right, program, p);
    case SetOp::kOr: return crisp_node(*s.left, program, p) || crisp_node(*s.right, program, p);
  }
  throw Error("corrupt set expression");
}

}  // namespace

Bitmap boolean_oracle(const SetProgram& p, const Grid& g) {
  if (!p.expression.valid()) throw Error("program has no expression");
  Bitmap bm(g);
  std::size_t idx = 0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.cell_y(j);
    for (int i = 0; i < g.nx; ++i, ++idx) {
      if (crisp_node(*p.expression.node(), p, {g.cell_x(i), y})) bm.inside[idx] = 1;
    }
  }
  return bm;
}

MismatchReport mismatch(const Bitmap& a, const Bitmap& b) {
  if (!a.grid.same_shape(b.grid)) throw GridMismatch("bitmaps sample different grids");
  MismatchReport rep;
  rep.total_cells = a.grid.cells();
  const int half_x = a.grid.nx / 2;
  const int half_y = a.grid.ny / 2;
  std::size_t idx = 0;
  for (int j = 0; j < a.grid.ny; ++j) {
    for (int i = 0; i < a.grid.nx; ++i, ++idx) {
      rep.undefined_a += a.undefined[idx];
      rep.undefined_b += b.undefined[idx];
      if (a.inside[idx] != b.inside[idx]) {
        ++rep.differing_cells;
        ++rep.quadrant_differing[(i >= half_x ? 1 : 0) + (j >= half_y ? 2 : 0)];
      }
    }
  }
  rep.fraction = static_cast<double>(rep.differing_cells) /
                 static_cast<double>(rep.total_cells);
  return rep;
}

double ContourSet::total_length() const {
  double len = 0.0;
  for (const auto& line : polylines) {
    for (std::size_t i = 1; i < line.size(); ++i)
      len += std::hypot(line[i].x - line[i - 1].x, line[i].y - line[i - 1].y);
  }
  return len;
}

namespace {

// A contour vertex lives on a unique grid edge; keying segments by edge ids
// makes stitching exact (no floating point comparisons).
struct EdgeId {
  bool horizontal;
  int i, j;
  auto operator<=>(const EdgeId&) const = default;
};

struct Segment {
  EdgeId a, b;
};

Point edge_point(const Grid& g, const EdgeId& e, const std::vector<double>& corner_l) {
  const auto corner = [&](int i, int j) {
    return corner_l[static_cast<std::size_t>(j) * (g.nx + 1) + i];
  };
  double x0, y0, x1, y1, l0, l1;
  if (e.horizontal) {
    x0 = g.corner_x(e.i); y0 = g.corner_y(e.j);
    x1 = g.corner_x(e.i + 1); y1 = y0;
    l0 = corner(e.i, e.j); l1 = corner(e.i + 1, e.j);
  } else {
    x0 = g.corner_x(e.i); y0 = g.corner_y(e.j);
    x1 = x0; y1 = g.corner_y(e.j + 1);
    l0 = corner(e.i, e.j); l1 = corner(e.i, e.j + 1);
  }
  double t = 0.5;
  if (l0 != l1) t = l0 / (l0 - l1);
  t = std::clamp(t, 0.0, 1.0);
  return {x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
}

}  // namespace

ContourSet marching_squares(const Region& r, const Grid& g) {
  // Corner samples, (nx+1) x (ny+1); the Grid constructor already bounds
  // the cell count.
  const int cx = g.nx + 1, cy = g.ny + 1;
  std::vector<double> corner_l(static_cast<std::size_t>(cx) * cy);
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i)
      corner_l[static_cast<std::size_t>(j) * cx + i] =
          log_field(r, {g.corner_x(i), g.corner_y(j)});

  const auto corner = [&](int i, int j) {
    return corner_l[static_cast<std::size_t>(j) * cx + i];
  };

  std::vector<Segment> segments;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double l00 = corner(i, j), l10 = corner(i + 1, j);
      const double l01 = corner(i, j + 1), l11 = corner(i + 1, j + 1);
      if (std::isnan(l00) || std::isnan(l10) || std::isnan(l01) || std::isnan(l11))
        continue;
      // Inside = L <= 0; bit order: 1 = (i,j), 2 = (i+1,j), 4 = (i+1,j+1),
      // 8 = (i,j+1).
      int mask = 0;
      if (l00 <= 0.0) mask |= 1;
      if (l10 <= 0.0) mask |= 2;
      if (l11 <= 0.0) mask |= 4;
      if (l01 <= 0.0) mask |= 8;
      if (mask == 0 || mask == 15) continue;

      const EdgeId bottom{true, i, j};
      const EdgeId top{true, i, j + 1};
      const EdgeId left{false, i, j};
      const EdgeId right{false, i + 1, j};

      switch (mask) {
        case 1: case 14: segments.push_back({left, bottom}); break;
        case 2: case 13: segments.push_back({bottom, right}); break;
        case 4: case 11: segments.push_back({right, top}); break;
        case 8: case 7: segments.push_back({top, left}); break;
        case 3: case 12: segments.push_back({left, right}); break;
        case 6: case 9: segments.push_back({bottom, top}); break;
        case 5: case 10: {
          // Saddle: the cell-center sample decides whether the two inside
          // corners connect. Connected inside corners leave the outside
          // corners isolated, and vice versa; each isolated corner gets one
          // segment across its two adjacent edges.
          const double lc = log_field(r, {g.cell_x(i), g.cell_y(j)});
          const bool center_in = !std::isnan(lc) && lc <= 0.0;
          const bool isolate_main_diag = (mask == 5) != center_in;
          if (isolate_main_diag) {
            // segments hug (i,j) and (i+1,j+1)
            segments.push_back({left, bottom});
            segments.push_back({right, top});
          } else {
            // segments hug (i+1,j) and (i,j+1)
            segments.push_back({bottom, right});
            segments.push_back({top, left});
          }
          break;
        }
        default: break;
      }
    }
  }

  // Stitch segments into polylines by walking shared edges.
  std::multimap<EdgeId, std::size_t> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge.emplace(segments[s].a, s);
    by_edge.emplace(segments[s].b, s);
  }
  std::vector<bool> used(segments.size(), false);

  ContourSet contours(g);
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    // Build the chain of edge ids through s0, extending both directions.
    std::vector<EdgeId> chain{segments[s0].a, segments[s0].b};
    used[s0] = true;
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        const EdgeId tip = dir == 0 ? chain.back() : chain.front();
        std::size_t next = segments.size();
        auto [lo, hi] = by_edge.equal_range(tip);
        for (auto it = lo; it != hi; ++it) {
          if (!used[it->second]) { next = it->second; break; }
        }
        if (next == segments.size()) break;
        used[next] = true;
        const EdgeId other =
            segments[next].a == tip ? segments[next].b : segments[next].a;
        if (dir == 0) chain.push_back(other);
        else chain.insert(chain.begin(), other);
      }
    }
    std::vector<Point> line;
    line.reserve(chain.size());
    for (const EdgeId& e : chain) line.push_back(edge_point(g, e, corner_l));
    contours.polylines.push_back(std::move(line));
  }
  return contours;
}

void write_pgm(const Bitmap& b, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << b.grid.nx << " " << b.grid.ny << "\n255\n";
  std::vector<char> row(b.grid.nx);
  for (int j = b.grid.ny - 1; j >= 0; --j) {  // top row = highest y
    for (int i = 0; i < b.grid.nx; ++i)
      row[i] = b.inside[static_cast<std::size_t>(j) * b.grid.nx + i] ? '\xff' : '\0';
    out.write(row.data(), row.size());
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_svg(const ContourSet& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const Grid& g = c.grid;
  const double w = g.x_max - g.x_min;
  const double h = g.y_max - g.y_min;
  const double stroke = 0.004 * std::min(w, h);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << format_double(g.x_min) << " " << format_double(g.y_min) << " "
      << format_double(w) << " " << format_double(h) << "\">\n";
  for (const auto& line : c.polylines) {
    if (line.size() < 2) continue;
    out << "  <path fill=\"none\" stroke=\"black\" stroke-width=\""
        << format_double(stroke) << "\" d=\"";
    for (std::size_t i = 0; i < line.size(); ++i) {
      // Flip y into screen orientation while keeping the same viewBox range.
      const double sy = g.y_min + g.y_max - line[i].y;
      out << (i == 0 ? "M" : " L") << format_double(line[i].x) << " "
          << format_double(sy);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

std::vector<Bitmap> sweep_frames(const SetProgram& p,
                                 std::span<const double> a_values,
                                 const Grid& g) {
  for (double a : a_values) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw InvalidSharpness("sweep sharpness values must be positive");
  }
  std::vector<Bitmap> frames;
  frames.reserve(a_values.size());
  for (double a : a_values) {
    SetProgram q = p;
    q.global_sharpness = a;
    frames.push_back(sample_membership(compile(q), g));
  }
  return frames;
}

}  // namespace smoothset
