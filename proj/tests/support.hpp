#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smoothset/region.hpp"
#include "smoothset/set_program.hpp"
#include "smoothset/types.hpp"

#ifndef SMOOTHSET_FIXTURE_DIR
#define SMOOTHSET_FIXTURE_DIR "fixtures"
#endif

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(SMOOTHSET_FIXTURE_DIR) + "/" + name;
}

inline smoothset::SetProgram load_fixture(const std::string& name) {
  return smoothset::load_program_file(fixture_path(name));
}

struct Window {
  double x_min, x_max, y_min, y_max;
};

inline std::vector<smoothset::Point> random_points(const Window& w, int n,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(w.x_min, w.x_max);
  std::uniform_real_distribution<double> uy(w.y_min, w.y_max);
  std::vector<smoothset::Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back({ux(rng), uy(rng)});
  return pts;
}

// Central-difference gradient of the log-field; the independent oracle for
// the forward-mode implementation.
inline smoothset::Point fd_grad_log_field(const smoothset::Region& r,
                                          smoothset::Point p, double h) {
  using smoothset::log_field;
  const double dx =
      (log_field(r, {p.x + h, p.y}) - log_field(r, {p.x - h, p.y})) / (2.0 * h);
  const double dy =
      (log_field(r, {p.x, p.y + h}) - log_field(r, {p.x, p.y - h})) / (2.0 * h);
  return {dx, dy};
}

// FNV-1a 64-bit, used for frozen raster goldens.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
