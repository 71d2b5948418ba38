#include "octaflow/basin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "octaflow/errors.hpp"

namespace octaflow::basin {

namespace {

CVec normalized(const CVec& h) {
  const double n = h.norm();
  if (!(n > 0) || !std::isfinite(n)) throw IndeterminatePoint("restricted map image vanished");
  return canonical(h / n);
}

std::array<std::uint8_t, 3> palette(int i) {
  static const std::array<std::array<std::uint8_t, 3>, 8> fixed = {{{230, 25, 75},
                                                                     {60, 180, 75},
                                                                     {0, 130, 200},
                                                                     {255, 225, 25},
                                                                     {245, 130, 48},
                                                                     {145, 30, 180},
                                                                     {70, 240, 240},
                                                                     {240, 50, 230}}};
  if (i < static_cast<int>(fixed.size())) return fixed[i];
  // golden-angle hue walk, full saturation
  const double h = std::fmod(i * 0.6180339887498949, 1.0) * 6;
  const int k = static_cast<int>(h);
  const double f = h - k;
  const auto c = [](double v) { return static_cast<std::uint8_t>(40 + 215 * v); };
  switch (k % 6) {
    case 0: return {c(1), c(f), c(0)};
    case 1: return {c(1 - f), c(1), c(0)};
    case 2: return {c(0), c(1), c(f)};
    case 3: return {c(0), c(1 - f), c(1)};
    case 4: return {c(f), c(0), c(1)};
    default: return {c(1), c(0), c(1 - f)};
  }
}

bool near_orbit(const Attractor& a, const CVec& h, double r) {
  for (const auto& p : a.orbit)
    if (proj_distance(p, h) < r) return true;
  return false;
}

}  // namespace

CVec step(const RenderConfig& cfg, const CVec& h) {
  const bool closed = !cfg.computed && s8::tag_has_closed_form(cfg.tag);
  CVec out = closed ? s8::restricted_closed(cfg.tag, h) : s8::restricted_computed(cfg.tag, h);
  if (!s8::tag_is_line(cfg.tag))
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = out[i].real();
  return out;
}

CVec pixel_point(const RenderConfig& cfg, int col, int row) {
  const Window& w = cfg.window;
  const double a = w.re_min + (col + 0.5) * (w.re_max - w.re_min) / cfg.width;
  const double b = w.im_max - (row + 0.5) * (w.im_max - w.im_min) / cfg.height;
  CVec h;
  if (s8::tag_is_line(cfg.tag)) {
    h.resize(2);
    h << 1.0, cplx(a, b);
  } else {
    h.resize(3);
    h << a, b, 1.0;
  }
  return h;
}

std::vector<Attractor> detect_attractors(const RenderConfig& cfg, int grid) {
  if (grid < 2) throw DomainError("attractor grid must be at least 2");
  RenderConfig probe = cfg;
  probe.width = probe.height = grid;
  std::vector<Attractor> out;
  for (int r = 0; r < grid; ++r)
    for (int c = 0; c < grid; ++c) {
      CVec h;
      try {
        h = normalized(pixel_point(probe, c, r));
        for (int i = 0; i < 400; ++i) h = normalized(step(cfg, h));
        for (int p = 1; p <= 4; ++p) {
          std::vector<CVec> orbit{h};
          CVec q = h;
          for (int i = 1; i < p; ++i) orbit.push_back(q = normalized(step(cfg, q)));
          q = normalized(step(cfg, q));
          if (proj_distance(q, h) > 1e-9) continue;
          bool seen = false;
          for (const auto& a : out) seen = seen || near_orbit(a, h, cfg.radius);
          if (!seen) out.push_back({orbit, palette(static_cast<int>(out.size()))});
          break;
        }
      } catch (const IndeterminatePoint&) {
      }
    }
  return out;
}

int classify(const RenderConfig& cfg, const std::vector<Attractor>& at, CVec h) {
  try {
    h = normalized(h);
    for (int it = 0; it <= cfg.max_iter; ++it) {
      for (size_t k = 0; k < at.size(); ++k)
        if (near_orbit(at[k], h, cfg.radius)) return static_cast<int>(k);
      if (it < cfg.max_iter) h = normalized(step(cfg, h));
    }
  } catch (const IndeterminatePoint&) {
  }
  return -1;
}

Image render(const RenderConfig& cfg) {
  if (cfg.width <= 0 || cfg.height <= 0) throw DomainError("image size must be positive");
  if (cfg.max_iter < 0) throw DomainError("iteration cap must be nonnegative");
  const Window& w = cfg.window;
  if (!(w.re_max > w.re_min) || !(w.im_max > w.im_min)) throw DomainError("empty window");
  const int n = s8::tag_is_line(cfg.tag) ? 2 : 3;

  Image img;
  img.width = cfg.width;
  img.height = cfg.height;
  if (cfg.attractors.empty()) {
    img.attractors = detect_attractors(cfg);
  } else {
    for (const auto& p : cfg.attractors) {
      if (p.size() != n) throw DimensionError("attractor has wrong number of coordinates");
      img.attractors.push_back({{normalized(p)}, palette(static_cast<int>(img.attractors.size()))});
    }
  }

  img.label.resize(static_cast<size_t>(cfg.width) * cfg.height);
  img.rgb.assign(img.label.size() * 3, 0);
  std::atomic<int> next_row{0};
  const auto work = [&] {
    for (int r; (r = next_row++) < cfg.height;)
      for (int c = 0; c < cfg.width; ++c) {
        const size_t i = static_cast<size_t>(r) * cfg.width + c;
        const int k = classify(cfg, img.attractors, pixel_point(cfg, c, r));
        img.label[i] = k;
        if (k >= 0)
          for (int j = 0; j < 3; ++j) img.rgb[3 * i + j] = img.attractors[k].color[j];
      }
  };
  int nt = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  nt = std::clamp(nt, 1, cfg.height);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  img.unclassified = static_cast<int>(std::count(img.label.begin(), img.label.end(), -1));
  return img;
}

std::string to_ppm(const Image& img) {
  std::string s = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  s.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return s;
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  const std::string s = to_ppm(img);
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw Error("write failed: " + path);
}

}  // namespace octaflow::basin
