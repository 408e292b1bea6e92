#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smoothset/region.hpp"
#include "smoothset/set_program.hpp"
#include "smoothset/types.hpp"

namespace smoothset {

// Sampling window. Bitmaps sample cell centers; marching squares samples
// cell corners, so the two stay decoupled.
struct Grid {
  double x_min, x_max, y_min, y_max;
  int nx, ny;

  static constexpr std::int64_t kMaxCells = 16'000'000;

  Grid(double x_min, double x_max, double y_min, double y_max, int nx, int ny);

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  double cell_x(int i) const { return x_min + (i + 0.5) * dx(); }
  double cell_y(int j) const { return y_min + (j + 0.5) * dy(); }
  double corner_x(int i) const { return x_min + i * dx(); }
  double corner_y(int j) const { return y_min + j * dy(); }
  std::int64_t cells() const {
    return static_cast<std::int64_t>(nx) * static_cast<std::int64_t>(ny);
  }
  bool same_shape(const Grid& o) const {
    return nx == o.nx && ny == o.ny && x_min == o.x_min && x_max == o.x_max &&
           y_min == o.y_min && y_max == o.y_max;
  }
};

// Boolean membership raster, row-major with index j*nx + i. Boundary
// samples count inside; undefined (NaN) samples count outside but are
// tracked separately so fixtures with partial domains stay auditable.
struct Bitmap {
  Grid grid;
  std::vector<std::uint8_t> inside;
  std::vector<std::uint8_t> undefined;

  explicit Bitmap(const Grid& g)
      : grid(g), inside(g.cells(), 0), undefined(g.cells(), 0) {}

  bool at(int i, int j) const { return inside[static_cast<std::size_t>(j) * grid.nx + i] != 0; }
  std::int64_t inside_count() const;
  std::int64_t undefined_count() const;
  double inside_fraction() const;
};

struct MismatchReport {
  std::int64_t total_cells = 0;
  std::int64_t differing_cells = 0;
  double fraction = 0.0;
  // Counts by window quadrant (0: -x-y, 1: +x-y, 2: -x+y, 3: +x+y, split at
  // the cell-index midpoints).
  std::array<std::int64_t, 4> quadrant_differing{};
  std::int64_t undefined_a = 0;
  std::int64_t undefined_b = 0;
};

// Polylines traced along the F = 1 boundary (log-field zero crossings).
struct ContourSet {
  Grid grid;
  std::vector<std::vector<Point>> polylines;

  explicit ContourSet(const Grid& g) : grid(g) {}
  double total_length() const;
};

// Membership at every cell center. Deterministic for a given region and
// grid regardless of evaluation order.
Bitmap sample_membership(const Region& r, const Grid& g);

// Exact crisp-set evaluation of a program: each definition is a member
// where its body is <= 0 (NaN counts non-member), combined with ordinary
// boolean logic. This is the limit the smooth construction approaches as
// sharpness grows.
Bitmap boolean_oracle(const SetProgram& p, const Grid& g);

// Cellwise XOR statistics of two bitmaps on the same grid.
MismatchReport mismatch(const Bitmap& a, const Bitmap& b);

// Standard 16-case marching squares over the log-field with linear
// interpolation of the zero crossing; saddle cells are disambiguated by the
// cell-center sample, cells with a NaN corner are skipped.
ContourSet marching_squares(const Region& r, const Grid& g);

// Binary PGM (P5), 255 = inside, top row = highest y.
void write_pgm(const Bitmap& b, const std::string& path);

// SVG 1.1, one path per polyline, viewBox equal to the grid window, y axis
// flipped to mathematical orientation.
void write_svg(const ContourSet& c, const std::string& path);

// Recompiles the program once per sharpness value and rasterizes each; the
// frame order matches a_values. Per-definition sharpness overrides stay
// pinned; only the global default varies.
std::vector<Bitmap> sweep_frames(const SetProgram& p,
                                 std::span<const double> a_values,
                                 const Grid& g);

}  // namespace smoothset
