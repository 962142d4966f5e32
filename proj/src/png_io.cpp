#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>
#include <png.h>

#include "recist_kit/io.hpp"

namespace recist_kit::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_gray8(const std::string& path, std::int64_t width, std::int64_t height,
                 const std::vector<std::uint8_t>& pixels) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write failed: " + path);
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::int64_t y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(pixels.data() + y * width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void read_gray8(const std::string& path, std::int64_t& width, std::int64_t& height,
                std::vector<std::uint8_t>& pixels) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open for reading: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read failed: " + path);
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  // Normalize any input to 8-bit grayscale.
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  pixels.assign(static_cast<std::size_t>(width * height), 0);
  for (std::int64_t y = 0; y < height; ++y)
    png_read_row(png, pixels.data() + y * width, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
}

}  // namespace

void write_mask_png(const BinaryMask& mask, const std::string& png_path,
                    const std::string& sidecar_path) {
  std::vector<std::uint8_t> pixels(mask.bits.size());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) pixels[i] = mask.bits[i] ? 255 : 0;
  write_gray8(png_path, mask.width, mask.height, pixels);

  nlohmann::json j;
  j["origin_x"] = mask.origin_x;
  j["origin_y"] = mask.origin_y;
  j["width"] = mask.width;
  j["height"] = mask.height;
  std::ofstream f(sidecar_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + sidecar_path);
  f << j.dump() << "\n";
}

BinaryMask read_mask_png(const std::string& png_path, const std::string& sidecar_path) {
  std::ifstream f(sidecar_path);
  if (!f) throw std::runtime_error("cannot open sidecar: " + sidecar_path);
  nlohmann::json j;
  f >> j;

  BinaryMask mask;
  mask.origin_x = j.at("origin_x").get<std::int64_t>();
  mask.origin_y = j.at("origin_y").get<std::int64_t>();

  std::vector<std::uint8_t> pixels;
  read_gray8(png_path, mask.width, mask.height, pixels);
  mask.bits.resize(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) mask.bits[i] = pixels[i] ? 1 : 0;
  return mask;
}

}  // namespace recist_kit::io
