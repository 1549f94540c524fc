#include "forge/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "forge/error.hpp"

namespace forge {

void validate_image(const Image& img, const char* what) {
  if (img.width <= 0 || img.height <= 0)
    throw ContractError(std::string(what) + ": non-positive dimensions");
  if (img.channels != 1 && img.channels != 3)
    throw ContractError(std::string(what) + ": channels must be 1 or 3");
  size_t expect = static_cast<size_t>(img.width) * img.height * img.channels;
  if (img.pixels.size() != expect)
    throw ContractError(std::string(what) + ": pixel buffer length mismatch");
  for (float v : img.pixels) {
    if (!(v >= 0.0f && v <= 1.0f))
      throw ContractError(std::string(what) + ": pixel outside [0,1]");
  }
}

static uint8_t to_byte(float v) {
  float c = clamp01(v);
  return static_cast<uint8_t>(std::lround(c * 255.0f));
}

std::vector<uint8_t> encode_png(const Image& img) {
  validate_image(img, "encode_png");
  png_image meta{};
  meta.version = PNG_IMAGE_VERSION;
  meta.width = static_cast<png_uint_32>(img.width);
  meta.height = static_cast<png_uint_32>(img.height);
  meta.format = img.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

  std::vector<uint8_t> raw(img.pixels.size());
  for (size_t i = 0; i < img.pixels.size(); ++i) raw[i] = to_byte(img.pixels[i]);

  png_alloc_size_t out_size = 0;
  if (!png_image_write_to_memory(&meta, nullptr, &out_size, 0, raw.data(), 0, nullptr))
    throw IoError(std::string("png encode (size pass): ") + meta.message);
  std::vector<uint8_t> out(out_size);
  if (!png_image_write_to_memory(&meta, out.data(), &out_size, 0, raw.data(), 0, nullptr))
    throw IoError(std::string("png encode: ") + meta.message);
  out.resize(out_size);
  return out;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  std::vector<uint8_t> bytes = encode_png(img);
  FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot open for writing: " + path.string());
  size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
  std::fclose(f);
  if (n != bytes.size()) throw IoError("short write: " + path.string());
}

static Image decode_common(png_image& meta, const void* data, size_t size,
                           const std::filesystem::path* path) {
  bool ok = path ? png_image_begin_read_from_file(&meta, path->string().c_str())
                 : png_image_begin_read_from_memory(&meta, data, size);
  if (!ok) throw IoError(std::string("png decode: ") + meta.message);

  bool gray = (meta.format & PNG_FORMAT_FLAG_COLOR) == 0;
  meta.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

  Image img(static_cast<int>(meta.width), static_cast<int>(meta.height), gray ? 1 : 3);
  std::vector<uint8_t> raw(img.pixels.size());
  if (!png_image_finish_read(&meta, nullptr, raw.data(), 0, nullptr))
    throw IoError(std::string("png decode: ") + meta.message);
  for (size_t i = 0; i < raw.size(); ++i)
    img.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
  return img;
}

Image read_png(const std::filesystem::path& path) {
  png_image meta{};
  meta.version = PNG_IMAGE_VERSION;
  return decode_common(meta, nullptr, 0, &path);
}

Image decode_png(const uint8_t* data, size_t size) {
  png_image meta{};
  meta.version = PNG_IMAGE_VERSION;
  return decode_common(meta, data, size, nullptr);
}

Image crop(const Image& img, int left, int top, int w, int h) {
  if (left < 0 || top < 0 || w < 1 || h < 1 || left + w > img.width ||
      top + h > img.height)
    throw ContractError("crop: region outside image bounds");
  Image out(w, h, img.channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = img.at(left + x, top + y, c);
  return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ParameterError("resize: non-positive size");
  Image out(out_w, out_h, img.channels);
  double sx = static_cast<double>(img.width) / out_w;
  double sy = static_cast<double>(img.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    int ya = std::clamp(y0, 0, img.height - 1);
    int yb = std::clamp(y0 + 1, 0, img.height - 1);
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      int xa = std::clamp(x0, 0, img.width - 1);
      int xb = std::clamp(x0 + 1, 0, img.width - 1);
      for (int c = 0; c < img.channels; ++c) {
        double top = img.at(xa, ya, c) * (1.0 - wx) + img.at(xb, ya, c) * wx;
        double bot = img.at(xa, yb, c) * (1.0 - wx) + img.at(xb, yb, c) * wx;
        out.at(x, y, c) = static_cast<float>(top * (1.0 - wy) + bot * wy);
      }
    }
  }
  return out;
}

Image pad_to_square(const Image& img, float background) {
  int side = std::max(img.width, img.height);
  Image out(side, side, img.channels, background);
  int ox = (side - img.width) / 2;
  int oy = (side - img.height) / 2;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(ox + x, oy + y, c) = img.at(x, y, c);
  return out;
}

float max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ContractError("max_abs_diff: shape mismatch");
  float m = 0.0f;
  for (size_t i = 0; i < a.pixels.size(); ++i)
    m = std::max(m, std::fabs(a.pixels[i] - b.pixels[i]));
  return m;
}

}  // namespace forge
