#include "uaflow/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace uaflow {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngBytes {
  int width = 0, height = 0, channels = 0, bit_depth = 8;
  bool palette = false;
  std::vector<Rgb8> pal;
  std::vector<uint16_t> samples;  // interleaved
};

PngBytes read_png_file(const std::filesystem::path& path, bool keep_palette) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw InvalidArgument("cannot read " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw NumericalFailure("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InvalidArgument(path.string() + ": PNG decode error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  PngBytes out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  int color = png_get_color_type(png, info);
  out.bit_depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE && keep_palette) {
    out.palette = true;
    png_colorp pal = nullptr;
    int npal = 0;
    png_get_PLTE(png, info, &pal, &npal);
    for (int k = 0; k < npal; ++k) out.pal.push_back({pal[k].red, pal[k].green, pal[k].blue});
    if (out.bit_depth < 8) png_set_packing(png);
    png_read_update_info(png, info);
    out.channels = 1;
    std::vector<uint8_t> row(out.width);
    out.samples.resize(static_cast<size_t>(out.width) * out.height);
    for (int y = 0; y < out.height; ++y) {
      png_read_row(png, row.data(), nullptr);
      for (int x = 0; x < out.width; ++x)
        out.samples[static_cast<size_t>(y) * out.width + x] = row[x];
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
  }

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && out.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  out.channels = png_get_channels(png, info);
  size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<uint8_t> row(rowbytes);
  out.samples.resize(static_cast<size_t>(out.width) * out.height * out.channels);
  for (int y = 0; y < out.height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < out.width * out.channels; ++x) {
      uint16_t v;
      if (out.bit_depth == 16)
        v = static_cast<uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
      else
        v = row[x];
      out.samples[(static_cast<size_t>(y) * out.width * out.channels) + x] = v;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png_file(const std::filesystem::path& path, int width, int height, int color_type,
                    int bit_depth, const uint8_t* rows, size_t rowbytes,
                    const std::vector<Rgb8>* palette) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw InvalidArgument("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw NumericalFailure("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw NumericalFailure(path.string() + ": PNG encode error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_color> pal;
  if (palette) {
    pal.reserve(palette->size());
    for (const auto& c : *palette) pal.push_back({c[0], c[1], c[2]});
    png_set_PLTE(png, info, pal.data(), static_cast<int>(pal.size()));
  }
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(rows + static_cast<size_t>(y) * rowbytes));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RawImage load_png(const std::filesystem::path& path) {
  PngBytes b = read_png_file(path, false);
  if (b.channels != 1 && b.channels != 3)
    throw InvalidArgument(path.string() + ": expected gray or RGB");
  RawImage img = RawImage::zero(b.width, b.height, b.channels);
  double scale = (b.bit_depth == 16) ? 65535.0 : 255.0;
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x)
      for (int c = 0; c < b.channels; ++c)
        img.at(c, x, y) =
            b.samples[(static_cast<size_t>(y) * b.width + x) * b.channels + c] / scale;
  return img;
}

LabelImage load_label_png(const std::filesystem::path& path) {
  PngBytes b = read_png_file(path, true);
  LabelImage out;
  out.width = b.width;
  out.height = b.height;
  out.labels.reserve(b.samples.size());
  if (b.palette || b.channels == 1) {
    size_t n = static_cast<size_t>(b.width) * b.height;
    for (size_t i = 0; i < n; ++i) out.labels.push_back(b.samples[i]);
  } else {
    throw InvalidArgument(path.string() + ": expected an indexed or grayscale label image");
  }
  return out;
}

void save_png_rgb8(const std::filesystem::path& path, int width, int height,
                   const std::vector<uint8_t>& rgb) {
  if (rgb.size() != static_cast<size_t>(width) * height * 3)
    throw InvalidArgument("save_png_rgb8: buffer size mismatch");
  write_png_file(path, width, height, PNG_COLOR_TYPE_RGB, 8, rgb.data(),
                 static_cast<size_t>(width) * 3, nullptr);
}

void save_png_gray8(const std::filesystem::path& path, int width, int height,
                    const std::vector<uint8_t>& gray) {
  if (gray.size() != static_cast<size_t>(width) * height)
    throw InvalidArgument("save_png_gray8: buffer size mismatch");
  write_png_file(path, width, height, PNG_COLOR_TYPE_GRAY, 8, gray.data(),
                 static_cast<size_t>(width), nullptr);
}

void save_png_indexed(const std::filesystem::path& path, int width, int height,
                      const std::vector<uint8_t>& indices, const std::vector<Rgb8>& palette) {
  if (indices.size() != static_cast<size_t>(width) * height)
    throw InvalidArgument("save_png_indexed: buffer size mismatch");
  if (palette.empty() || palette.size() > 256)
    throw InvalidArgument("save_png_indexed: palette must have 1..256 entries");
  write_png_file(path, width, height, PNG_COLOR_TYPE_PALETTE, 8, indices.data(),
                 static_cast<size_t>(width), &palette);
}

void save_png(const std::filesystem::path& path, const RawImage& image) {
  auto quant = [](double v) {
    double q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    return static_cast<uint8_t>(q);
  };
  if (image.channels == 1) {
    std::vector<uint8_t> g(static_cast<size_t>(image.width) * image.height);
    for (int y = 0; y < image.height; ++y)
      for (int x = 0; x < image.width; ++x)
        g[static_cast<size_t>(y) * image.width + x] = quant(image.at(0, x, y));
    save_png_gray8(path, image.width, image.height, g);
    return;
  }
  if (image.channels == 3) {
    std::vector<uint8_t> rgb(static_cast<size_t>(image.width) * image.height * 3);
    for (int y = 0; y < image.height; ++y)
      for (int x = 0; x < image.width; ++x)
        for (int c = 0; c < 3; ++c)
          rgb[(static_cast<size_t>(y) * image.width + x) * 3 + c] = quant(image.at(c, x, y));
    save_png_rgb8(path, image.width, image.height, rgb);
    return;
  }
  throw InvalidArgument("save_png: only 1- or 3-channel images");
}

}  // namespace uaflow
