#include <doctest.h>

#include <cmath>

#include "forge/error.hpp"
#include "forge/image_ops.hpp"
#include "forge/rng.hpp"

using namespace forge;

namespace {

Image random_image(int w, int h, int c, uint64_t seed) {
  Image img(w, h, c);
  Rng rng(seed);
  for (float& p : img.pixels) p = rng.next_float();
  return img;
}

}  // namespace

TEST_CASE("grayscale luminance weights") {
  Image white(4, 4, 3, 1.0f);
  Image g = grayscale(white);
  CHECK(g.channels == 1);
  for (float v : g.pixels) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  Image red(4, 4, 3, 0.0f);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) red.at(x, y, 0) = 1.0f;
  Image gr = grayscale(red);
  for (float v : gr.pixels) CHECK(v == doctest::Approx(0.299).epsilon(1e-6));
}

TEST_CASE("grayscale is idempotent") {
  Image img = random_image(16, 9, 3, 42);
  Image g1 = grayscale(img);
  Image g2 = grayscale(g1);
  CHECK(max_abs_diff(g1, g2) == 0.0f);
}

TEST_CASE("gaussian_smooth keeps a constant image constant") {
  Image img(12, 7, 1, 0.37f);
  Image out = gaussian_smooth(img, 1.0, 5);
  CHECK(max_abs_diff(img, out) < 1e-6f);
}

TEST_CASE("gaussian_smooth center weight matches the analytic 3x3 kernel") {
  Image img(11, 11, 1, 0.0f);
  img.at(5, 5) = 1.0f;
  Image out = gaussian_smooth(img, 1.0, 3);
  // separable weights exp(0), exp(-1/2) normalized
  double w0 = 1.0 / (1.0 + 2.0 * std::exp(-0.5));
  CHECK(out.at(5, 5) == doctest::Approx(w0 * w0).epsilon(1e-5));
}

TEST_CASE("gaussian_smooth preserves interior intensity") {
  Image img(31, 31, 1, 0.0f);
  Rng rng(7);
  for (int y = 10; y < 21; ++y)
    for (int x = 10; x < 21; ++x) img.at(x, y) = rng.next_float();
  double before = 0.0, after = 0.0;
  Image out = gaussian_smooth(img, 1.0, 5);
  for (float v : img.pixels) before += v;
  for (float v : out.pixels) after += v;
  CHECK(after == doctest::Approx(before).epsilon(1e-6));
}

TEST_CASE("gaussian_smooth rejects even kernels") {
  Image img(8, 8, 1, 0.5f);
  CHECK_THROWS_AS(gaussian_smooth(img, 1.0, 4), ParameterError);
  CHECK_THROWS_AS(gaussian_smooth(img, 0.0, 3), ParameterError);
}

TEST_CASE("gaussian_smooth with tiny sigma approaches identity") {
  Image img = random_image(20, 12, 1, 3);
  Image out = gaussian_smooth(img, 0.1, 3);
  CHECK(max_abs_diff(img, out) < 0.05f);
}

TEST_CASE("normalize stretches to the full range") {
  Image img(10, 10, 1);
  Rng rng(5);
  for (float& p : img.pixels) p = 0.2f + 0.5f * rng.next_float();
  img.pixels[0] = 0.2f;
  img.pixels[1] = 0.7f;
  Image out = normalize(img);
  float lo = 1.0f, hi = 0.0f;
  for (float v : out.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == 0.0f);
  CHECK(hi == 1.0f);
}

TEST_CASE("normalize maps constant images to zero") {
  Image img(6, 4, 1, 0.5f);
  Image out = normalize(img);
  for (float v : out.pixels) CHECK(v == 0.0f);
}

TEST_CASE("normalize is idempotent") {
  Image img = random_image(14, 8, 1, 11);
  Image n1 = normalize(img);
  Image n2 = normalize(n1);
  CHECK(max_abs_diff(n1, n2) == 0.0f);
}

TEST_CASE("morphology closing recovers an isolated pixel") {
  Image img(15, 15, 1, 0.0f);
  img.at(7, 7) = 1.0f;
  Image closed = morphology(morphology(img, MorphOp::kDilate, 3), MorphOp::kErode, 3);
  CHECK(closed.at(7, 7) == 1.0f);  // superset of the original pixel
}

TEST_CASE("erosion removes an isolated pixel") {
  Image img(15, 15, 1, 0.0f);
  img.at(7, 7) = 1.0f;
  Image out = morphology(img, MorphOp::kErode, 3);
  for (float v : out.pixels) CHECK(v == 0.0f);
}

TEST_CASE("dilation of a 2x2 block gives a 4x4 block (brute-force oracle)") {
  Image img(16, 16, 1, 0.0f);
  for (int y = 7; y < 9; ++y)
    for (int x = 7; x < 9; ++x) img.at(x, y) = 1.0f;
  Image out = morphology(img, MorphOp::kDilate, 3);

  int on = 0;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      bool expect = x >= 6 && x <= 9 && y >= 6 && y <= 9;
      CHECK(out.at(x, y) == (expect ? 1.0f : 0.0f));
      if (out.at(x, y) == 1.0f) ++on;
    }
  CHECK(on == 16);
}

TEST_CASE("morphology vs brute force on random binary images") {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    Image img(12, 9, 1, 0.0f);
    for (float& p : img.pixels) p = rng.next_double() < 0.3 ? 1.0f : 0.0f;
    for (MorphOp op : {MorphOp::kErode, MorphOp::kDilate}) {
      Image got = morphology(img, op, 3);
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          float acc = op == MorphOp::kErode ? 1.0f : 0.0f;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              // symmetric reflection
              int rx = x + dx, ry = y + dy;
              if (rx < 0) rx = -rx - 1;
              if (rx >= img.width) rx = 2 * img.width - 1 - rx;
              if (ry < 0) ry = -ry - 1;
              if (ry >= img.height) ry = 2 * img.height - 1 - ry;
              float v = img.at(rx, ry);
              acc = op == MorphOp::kErode ? std::min(acc, v) : std::max(acc, v);
            }
          CHECK(got.at(x, y) == acc);
        }
    }
  }
}

TEST_CASE("morphology rejects multi-channel input") {
  Image img(6, 6, 3, 0.5f);
  CHECK_THROWS_AS(morphology(img, MorphOp::kErode, 3), ParameterError);
}

TEST_CASE("otsu separates a bimodal image") {
  Image img(10, 10, 1);
  for (size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = i % 2 == 0 ? 0.1f : 0.9f;
  float t = otsu_threshold(img);
  CHECK(t > 0.1f);
  CHECK(t < 0.9f);
  Image b = binarize(img, BinarizeMethod::kOtsu);
  for (size_t i = 0; i < img.pixels.size(); ++i)
    CHECK(b.pixels[i] == (img.pixels[i] > 0.5f ? 1.0f : 0.0f));
}

TEST_CASE("fixed threshold on a 0.4/0.6 checkerboard") {
  Image img(8, 8, 1);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) img.at(x, y) = (x + y) % 2 == 0 ? 0.4f : 0.6f;
  Image b = binarize(img, BinarizeMethod::kFixed, 0.5f);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) CHECK(b.at(x, y) == ((x + y) % 2 == 0 ? 0.0f : 1.0f));
}

TEST_CASE("otsu output is invariant under affine rescaling") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    Image img = random_image(16, 16, 1, 1000 + trial);
    Image scaled = img;
    float a = 0.2f + 0.6f * static_cast<float>(rng.next_double());
    float b = 0.1f * static_cast<float>(rng.next_double());
    for (float& p : scaled.pixels) p = a * p + b;
    Image x = binarize(img, BinarizeMethod::kOtsu);
    Image y = binarize(scaled, BinarizeMethod::kOtsu);
    CHECK(max_abs_diff(x, y) == 0.0f);
  }
}

TEST_CASE("ssim identity and symmetry") {
  Image a = random_image(24, 16, 1, 77);
  Image b = random_image(24, 16, 1, 78);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(ssim(a, b) - ssim(b, a)) < 1e-9);
}

TEST_CASE("ssim of opposite constants is near zero") {
  Image zero(16, 16, 1, 0.0f);
  Image one(16, 16, 1, 1.0f);
  // closed form: (C1 * C2) / ((1 + C1) * C2) = 1e-4 / 1.0001
  double expect = 1e-4 / 1.0001;
  CHECK(ssim(zero, one) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(ssim(zero, one) < 0.01);
}

TEST_CASE("ssim rejects mismatched dimensions and multi-channel input") {
  Image a(16, 16, 1, 0.5f);
  Image b(17, 16, 1, 0.5f);
  Image c(16, 16, 3, 0.5f);
  CHECK_THROWS_AS(ssim(a, b), ParameterError);
  CHECK_THROWS_AS(ssim(c, c), ParameterError);
}

TEST_CASE("ops preserve dimensions and the [0,1] contract") {
  Image img = random_image(21, 13, 3, 5);
  for (const Image& out :
       {grayscale(img), gaussian_smooth(img, 1.3, 5), normalize(img)}) {
    CHECK(out.width == img.width);
    CHECK(out.height == img.height);
    for (float v : out.pixels) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
}
