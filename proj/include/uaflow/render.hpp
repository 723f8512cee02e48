#pragma once

#include "uaflow/field.hpp"
#include "uaflow/png_io.hpp"

namespace uaflow {

/// Fixed 16-color maximally distinct false-color palette; label j gets
/// entry j mod 16.
const std::vector<Rgb8>& label_palette();

/// Labeling as an indexed PNG with the false-color palette.
void save_labeling_png(const std::filesystem::path& path, const std::vector<int>& labeling,
                       GridShape grid);

/// Per-label mass histogram: bars colored by their label.
void save_histogram_png(const std::filesystem::path& path, const Vec& mass);

/// Euclidean RGB dictionary as a strip of color swatches.
void save_rgb_dictionary_png(const std::filesystem::path& path, const LabelDictionary& dict);

/// SO(3) dictionary as a strip of trihedron glyphs on the labels'
/// false-color backgrounds.
void save_trihedron_png(const std::filesystem::path& path, const LabelDictionary& dict);

}  // namespace uaflow
