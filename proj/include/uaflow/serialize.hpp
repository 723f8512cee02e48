#pragma once

#include "uaflow/field.hpp"

#include <filesystem>

namespace uaflow {

// Versioned UTF-8 text formats. Values are printed with 17 significant
// digits so a load/save round trip is exact at double precision.
//
//   uaflow dictionary 1          uaflow field 1
//   manifold spd 6               manifold so3 3
//   count 8                      grid 64 64
//   <packed row per label>       <packed row per pixel>

void save_dictionary(const std::filesystem::path& path, const LabelDictionary& dict);
LabelDictionary load_dictionary(const std::filesystem::path& path);

void save_field(const std::filesystem::path& path, const FeatureField& field);
FeatureField load_field(const std::filesystem::path& path);

std::string manifold_tag(const FeatureManifold& m);
FeatureManifold manifold_from_tag(const std::string& tag, int dim);

}  // namespace uaflow
