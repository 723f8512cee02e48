#pragma once

#include "uaflow/features.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace uaflow {

using Rgb8 = std::array<uint8_t, 3>;

/// 8- or 16-bit gray/RGB/palette PNG -> intensities in [0, 1].
RawImage load_png(const std::filesystem::path& path);

/// Indexed or grayscale PNG -> one label per pixel (palette index resp.
/// gray level).
struct LabelImage {
  int width = 0, height = 0;
  std::vector<int> labels;
};
LabelImage load_label_png(const std::filesystem::path& path);

void save_png_rgb8(const std::filesystem::path& path, int width, int height,
                   const std::vector<uint8_t>& interleaved_rgb);

void save_png_gray8(const std::filesystem::path& path, int width, int height,
                    const std::vector<uint8_t>& gray);

/// Palette PNG; one byte per pixel indexing into the palette.
void save_png_indexed(const std::filesystem::path& path, int width, int height,
                      const std::vector<uint8_t>& indices, const std::vector<Rgb8>& palette);

/// RawImage (1 or 3 channels) -> 8-bit PNG.
void save_png(const std::filesystem::path& path, const RawImage& image);

}  // namespace uaflow
