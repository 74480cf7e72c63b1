#include <png.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ptycho/io.hpp"

namespace ptycho {

RealField read_png_gray(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) throw IoError("cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    if (png != nullptr) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("libpng initialization failed");
  }

  // All C++ objects live before setjmp; the error path only sets a string.
  std::string error;
  std::vector<png_byte> pixels;
  std::vector<png_bytep> row_ptrs;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;

  if (setjmp(png_jmpbuf(png))) {
    error = path + ": PNG decode failed";
  } else {
    png_init_io(png, fp);
    png_read_info(png, info);
    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_GRAY_ALPHA) {
      error = path + ": expected an 8/16-bit grayscale PNG";
    } else {
      if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(png);
      if (bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        bit_depth = 8;
      }
      if (bit_depth == 16) png_set_swap(png);  // PNG is big-endian on disk
      png_read_update_info(png, info);

      const std::size_t rowbytes = png_get_rowbytes(png, info);
      pixels.resize(rowbytes * height);
      row_ptrs.resize(height);
      for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = pixels.data() + y * rowbytes;
      png_read_image(png, row_ptrs.data());
      png_read_end(png, nullptr);
    }
  }

  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  if (!error.empty()) throw IoError(error);
  if (width < 1 || height < 1) throw IoError(path + ": empty image");

  RealField image(static_cast<int>(height), static_cast<int>(width));
  const std::size_t rowbytes = pixels.size() / height;
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = pixels.data() + y * rowbytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      if (bit_depth == 16) {
        const unsigned v = row[2 * x] | (static_cast<unsigned>(row[2 * x + 1]) << 8);
        image(static_cast<int>(y), static_cast<int>(x)) = v / 65535.0;
      } else {
        image(static_cast<int>(y), static_cast<int>(x)) = row[x] / 255.0;
      }
    }
  }
  return image;
}

void write_png_gray(const std::string& path, const RealField& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw IoError("PNG bit depth must be 8 or 16");
  image.require_finite("PNG image");

  const int rows = image.rows();
  const int cols = image.cols();
  const double max_value = bit_depth == 8 ? 255.0 : 65535.0;
  const std::size_t rowbytes = static_cast<std::size_t>(cols) * (bit_depth / 8);

  // Pixel bytes are assembled (big-endian for 16-bit) before touching libpng.
  std::vector<png_byte> pixels(rowbytes * rows);
  std::vector<png_bytep> row_ptrs(rows);
  for (int y = 0; y < rows; ++y) {
    png_byte* row = pixels.data() + static_cast<std::size_t>(y) * rowbytes;
    row_ptrs[y] = row;
    for (int x = 0; x < cols; ++x) {
      double v = image(y, x);
      v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      const auto q = static_cast<unsigned>(std::llround(v * max_value));
      if (bit_depth == 8) {
        row[x] = static_cast<png_byte>(q);
      } else {
        row[2 * x] = static_cast<png_byte>(q >> 8);
        row[2 * x + 1] = static_cast<png_byte>(q & 0xff);
      }
    }
  }

  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) throw IoError("cannot open " + path + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    if (png != nullptr) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("libpng initialization failed");
  }

  bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows),
                 bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
  }

  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  if (failed) throw IoError(path + ": PNG encode failed");
}

}  // namespace ptycho
