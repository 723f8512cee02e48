#include "uaflow/render.hpp"

#include <algorithm>
#include <cmath>

namespace uaflow {

const std::vector<Rgb8>& label_palette() {
  static const std::vector<Rgb8> pal = {
      {230, 25, 75},   {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
      {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
      {210, 245, 60},  {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
      {170, 110, 40},  {255, 250, 200}, {128, 0, 0},    {128, 128, 128},
  };
  return pal;
}

void save_labeling_png(const std::filesystem::path& path, const std::vector<int>& labeling,
                       GridShape grid) {
  if (static_cast<int>(labeling.size()) != grid.pixels())
    throw InvalidArgument("save_labeling_png: labeling does not match the grid");
  std::vector<uint8_t> idx(labeling.size());
  for (size_t i = 0; i < labeling.size(); ++i)
    idx[i] = static_cast<uint8_t>(labeling[i] % static_cast<int>(label_palette().size()));
  save_png_indexed(path, grid.width, grid.height, idx, label_palette());
}

namespace {

struct Canvas {
  int w, h;
  std::vector<uint8_t> rgb;
  Canvas(int w_, int h_, Rgb8 bg) : w(w_), h(h_), rgb(static_cast<size_t>(w_) * h_ * 3) {
    for (int i = 0; i < w * h; ++i) set(i % w, i / w, bg);
  }
  void set(int x, int y, Rgb8 c) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    size_t o = (static_cast<size_t>(y) * w + x) * 3;
    rgb[o] = c[0];
    rgb[o + 1] = c[1];
    rgb[o + 2] = c[2];
  }
  void fill_rect(int x0, int y0, int x1, int y1, Rgb8 c) {
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) set(x, y, c);
  }
  void line(int x0, int y0, int x1, int y1, Rgb8 c) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
};

}  // namespace

void save_histogram_png(const std::filesystem::path& path, const Vec& mass) {
  const int bar_w = 24, gap = 8, plot_h = 128, margin = 12;
  int n = static_cast<int>(mass.size());
  int w = margin * 2 + n * bar_w + (n - 1) * gap;
  int h = plot_h + 2 * margin;
  Canvas canvas(w, h, {255, 255, 255});
  double top = std::max(1e-12, mass.maxCoeff());
  for (int j = 0; j < n; ++j) {
    int x0 = margin + j * (bar_w + gap);
    int bh = static_cast<int>(std::lround(plot_h * (mass[j] / top)));
    Rgb8 c = label_palette()[j % label_palette().size()];
    canvas.fill_rect(x0, h - margin - bh, x0 + bar_w - 1, h - margin, c);
  }
  // baseline
  canvas.fill_rect(margin / 2, h - margin + 1, w - margin / 2, h - margin + 1, {0, 0, 0});
  save_png_rgb8(path, w, h, canvas.rgb);
}

void save_rgb_dictionary_png(const std::filesystem::path& path, const LabelDictionary& dict) {
  if (dict.manifold.kind() != ManifoldKind::Euclidean || dict.manifold.dim() != 3)
    throw InvalidArgument("save_rgb_dictionary_png expects euclidean RGB labels");
  const int cell = 24;
  int n = static_cast<int>(dict.size());
  Canvas canvas(n * cell, cell, {255, 255, 255});
  for (int j = 0; j < n; ++j) {
    auto q = [&](double v) {
      return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    Rgb8 c = {q(dict.labels(j, 0)), q(dict.labels(j, 1)), q(dict.labels(j, 2))};
    canvas.fill_rect(j * cell, 0, (j + 1) * cell - 1, cell - 1, c);
  }
  save_png_rgb8(path, canvas.w, canvas.h, canvas.rgb);
}

void save_trihedron_png(const std::filesystem::path& path, const LabelDictionary& dict) {
  if (dict.manifold.kind() != ManifoldKind::Rotation3)
    throw InvalidArgument("save_trihedron_png expects so3 labels");
  const int cell = 48;
  int n = static_cast<int>(dict.size());
  Canvas canvas(n * cell, cell, {255, 255, 255});
  const Rgb8 axis_color[3] = {{200, 0, 0}, {0, 160, 0}, {0, 0, 220}};
  for (int j = 0; j < n; ++j) {
    Rgb8 bg = label_palette()[j % label_palette().size()];
    // muted background so the axes stay visible
    Rgb8 soft = {static_cast<uint8_t>((bg[0] + 255) / 2), static_cast<uint8_t>((bg[1] + 255) / 2),
                 static_cast<uint8_t>((bg[2] + 255) / 2)};
    canvas.fill_rect(j * cell, 0, (j + 1) * cell - 1, cell - 1, soft);
    int cx = j * cell + cell / 2, cy = cell / 2;
    double scale = cell * 0.38;
    // draw back-to-front by depth
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dict.labels(j, 3 * 2 + a) < dict.labels(j, 3 * 2 + b); });
    for (int k : order) {
      double ex = dict.labels(j, 0 + k);   // row 0, column k
      double ey = dict.labels(j, 3 + k);   // row 1, column k
      canvas.line(cx, cy, cx + static_cast<int>(std::lround(scale * ex)),
                  cy - static_cast<int>(std::lround(scale * ey)), axis_color[k]);
    }
  }
  save_png_rgb8(path, canvas.w, canvas.h, canvas.rgb);
}

}  // namespace uaflow
