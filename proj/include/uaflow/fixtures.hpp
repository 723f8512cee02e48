#pragma once

#include "uaflow/features.hpp"

namespace uaflow {
namespace fixtures {

// Deterministic synthetic scenes used by the shipped experiment configs and
// by the test suites.

/// Smooth color gradient: red grows left to right, blue shrinks left to
/// right, green grows top to bottom.
RawImage gradient_image(int width = 64, int height = 64);

/// Quadrant region map with `regions` in {2,3,4}: 4 gives the four
/// quadrants, 3 merges the bottom two, 2 splits along the diagonal-ish
/// vertical halves.
std::vector<int> quadrant_regions(GridShape grid, int regions);

/// Three-region scene (disk, background, bar) with a distinct palette.
std::vector<int> disk_bar_regions(GridShape grid);

/// Noisy color scene over the given regions with a fixed distinct palette.
ColorSynthetic color_scene(const std::vector<int>& regions, GridShape grid, double noise_sigma,
                           uint64_t seed);
std::vector<std::array<double, 3>> default_palette(int regions);

/// Ground-truth SO(3) field: one well-separated frame per quadrant region.
FeatureField so3_truth(GridShape grid, const std::vector<int>& regions);
LabelDictionary so3_truth_frames(int count);

/// Concentric rings; orientations of the local structure cover all of
/// [0, pi).
RawImage rings_image(int width = 64, int height = 64);

/// 2x2 tiles of one stripe texture rotated by the given angles (radians).
RawImage rotated_texture_image(int tile = 32, const std::vector<double>& angles = {});

}  // namespace fixtures
}  // namespace uaflow
