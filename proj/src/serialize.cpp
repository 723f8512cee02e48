#include "uaflow/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uaflow {

namespace {

void write_rows(std::FILE* f, const RowMat& rows) {
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < rows.cols(); ++j)
      std::fprintf(f, j == 0 ? "%.17g" : " %.17g", rows(i, j));
    std::fprintf(f, "\n");
  }
}

struct Header {
  FeatureManifold manifold;
  Index rows = 0;
  GridShape grid;
  bool has_grid = false;
};

Header read_header(std::istream& in, const std::string& kind, const std::string& path) {
  std::string word, tag;
  int version = 0;
  in >> word >> tag >> version;
  if (!in || word != "uaflow" || tag != kind || version != 1)
    throw InvalidArgument(path + ": not a uaflow " + kind + " file");
  Header h;
  std::string key;
  in >> key >> tag;
  int dim = 0;
  in >> dim;
  if (!in || key != "manifold") throw InvalidArgument(path + ": missing manifold header");
  h.manifold = manifold_from_tag(tag, dim);
  in >> key;
  if (key == "grid") {
    in >> h.grid.width >> h.grid.height;
    h.has_grid = true;
    h.rows = h.grid.pixels();
  } else if (key == "count") {
    in >> h.rows;
  } else {
    throw InvalidArgument(path + ": missing count/grid header");
  }
  if (!in || h.rows < 1) throw InvalidArgument(path + ": bad header");
  return h;
}

RowMat read_rows(std::istream& in, Index rows, Index cols, const std::string& path) {
  RowMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw InvalidArgument(path + ": truncated data");
  return m;
}

std::FILE* open_out(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw InvalidArgument("cannot write " + path.string());
  return f;
}

}  // namespace

std::string manifold_tag(const FeatureManifold& m) { return to_string(m.kind()); }

FeatureManifold manifold_from_tag(const std::string& tag, int dim) {
  if (tag == "euclidean") return FeatureManifold::euclidean(dim);
  if (tag == "orientation") return FeatureManifold::orientation();
  if (tag == "so3") return FeatureManifold::rotation3();
  if (tag == "spd") return FeatureManifold::spd(dim);
  throw InvalidArgument("unknown manifold tag '" + tag + "'");
}

void save_dictionary(const std::filesystem::path& path, const LabelDictionary& dict) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "uaflow dictionary 1\n");
  std::fprintf(f, "manifold %s %d\n", manifold_tag(dict.manifold).c_str(), dict.manifold.dim());
  std::fprintf(f, "count %" PRId64 "\n", static_cast<int64_t>(dict.size()));
  write_rows(f, dict.labels);
  std::fclose(f);
}

LabelDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  Header h = read_header(in, "dictionary", path.string());
  LabelDictionary d;
  d.manifold = h.manifold;
  d.labels = read_rows(in, h.rows, h.manifold.packed_size(), path.string());
  d.validate();
  return d;
}

void save_field(const std::filesystem::path& path, const FeatureField& field) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "uaflow field 1\n");
  std::fprintf(f, "manifold %s %d\n", manifold_tag(field.manifold).c_str(), field.manifold.dim());
  std::fprintf(f, "grid %d %d\n", field.grid.width, field.grid.height);
  write_rows(f, field.points);
  std::fclose(f);
}

FeatureField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  Header h = read_header(in, "field", path.string());
  if (!h.has_grid) throw InvalidArgument(path.string() + ": field file without grid");
  FeatureField f;
  f.manifold = h.manifold;
  f.grid = h.grid;
  f.points = read_rows(in, h.rows, h.manifold.packed_size(), path.string());
  f.validate();
  return f;
}

}  // namespace uaflow
