// Generates the synthetic inputs referenced by the shipped experiment
// configs. Everything is deterministic in the seed.

#include "uaflow/fixtures.hpp"
#include "uaflow/png_io.hpp"
#include "uaflow/render.hpp"
#include "uaflow/serialize.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace uaflow;

int main(int argc, char** argv) {
  CLI::App app{"uaflow synthetic input generator"};
  std::string out = "data";
  uint64_t seed = 7;
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    fs::create_directories(out);
    fs::path dir(out);

    save_png(dir / "gradient.png", fixtures::gradient_image());
    save_png(dir / "gradient32.png", fixtures::gradient_image(32, 32));

    GridShape grid{64, 64};
    auto regions4 = fixtures::quadrant_regions(grid, 4);
    ColorSynthetic four = fixtures::color_scene(regions4, grid, 0.1, seed);
    save_png(dir / "regions4.png", four.image);
    {
      std::vector<uint8_t> idx(four.truth.begin(), four.truth.end());
      save_png_indexed(dir / "regions4_truth.png", grid.width, grid.height, idx, label_palette());
    }

    auto regions3 = fixtures::disk_bar_regions(grid);
    ColorSynthetic three = fixtures::color_scene(regions3, grid, 0.1, seed + 1);
    save_png(dir / "regions3.png", three.image);
    {
      std::vector<uint8_t> idx(three.truth.begin(), three.truth.end());
      save_png_indexed(dir / "regions3_truth.png", grid.width, grid.height, idx, label_palette());
    }

    FeatureField truth = fixtures::so3_truth(grid, regions4);
    save_field(dir / "so3_truth.uff", truth);
    save_field(dir / "so3_field.uff", so3_synthetic(truth, std::sqrt(0.5), seed + 2));

    save_png(dir / "rings.png", fixtures::rings_image());
    save_png(dir / "texture.png", fixtures::rotated_texture_image());

    std::cout << "wrote fixtures to " << out << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
