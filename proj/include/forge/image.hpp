#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace forge {

// Pixel raster with explicit dimensions. Row-major, interleaved channels,
// values in [0, 1]. channels is 1 (gray) or 3 (RGB). This is the universal
// currency of the pipeline.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> pixels;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        pixels(static_cast<size_t>(w) * h * c, fill) {}

  float& at(int x, int y, int c = 0) {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  size_t size() const { return pixels.size(); }
  bool empty() const { return pixels.empty(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Throws ContractError unless dimensions are positive, channels is 1 or 3,
// the buffer length matches, and every value is finite in [0, 1].
void validate_image(const Image& img, const char* what = "image");

inline float clamp01(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

// 8-bit PNG I/O (gray for 1 channel, RGB for 3). Reads collapse alpha.
Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& img);

// PNG encode/decode against memory buffers (used by the gate harness).
std::vector<uint8_t> encode_png(const Image& img);
Image decode_png(const uint8_t* data, size_t size);

Image crop(const Image& img, int left, int top, int w, int h);

// Center-aligned bilinear resampling.
Image resize_bilinear(const Image& img, int out_w, int out_h);

// Pads to a square canvas (side = max(w, h)) with the glyph centered.
Image pad_to_square(const Image& img, float background);

// Maximum absolute per-value difference; images must share shape.
float max_abs_diff(const Image& a, const Image& b);

}  // namespace forge
