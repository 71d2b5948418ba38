#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "octaflow/proj.hpp"
#include "octaflow/s8geom.hpp"

namespace octaflow::basin {

// Lines: the pixel is z = re + i im, homogeneous (1, z).
// Planes: the pixel is the real point (x, y) of the chart Z = 1.
struct Window {
  double re_min = -2, re_max = 2, im_min = -2, im_max = 2;
};

struct RenderConfig {
  s8::RestrictedTag tag = s8::RestrictedTag::Line28;
  int width = 400, height = 400;
  Window window;
  int max_iter = 60;
  double radius = 1e-6;     // projective distance for pixel classification
  bool computed = false;    // restrict g4 through the chart instead of the closed form
  std::vector<CVec> attractors;  // supplied fixed points; empty = auto-detect
  int threads = 0;               // 0 = hardware concurrency
};

struct Attractor {
  std::vector<CVec> orbit;  // normalized; size is the period
  std::array<std::uint8_t, 3> color{};
};

struct Image {
  int width = 0, height = 0;
  std::vector<int> label;  // -1 for cells over the iteration cap
  std::vector<std::uint8_t> rgb;
  std::vector<Attractor> attractors;
  int unclassified = 0;
};

// one step of the restricted map on homogeneous coordinates
CVec step(const RenderConfig& cfg, const CVec& h);
CVec pixel_point(const RenderConfig& cfg, int col, int row);

// attracting cycles (period <= 4) reached from a coarse grid over the window
std::vector<Attractor> detect_attractors(const RenderConfig& cfg, int grid = 24);

// attractor index reached from h, or -1
int classify(const RenderConfig& cfg, const std::vector<Attractor>& at, CVec h);

Image render(const RenderConfig& cfg);
std::string to_ppm(const Image& img);  // binary P6
void write_ppm(const Image& img, const std::string& path);

}  // namespace octaflow::basin
