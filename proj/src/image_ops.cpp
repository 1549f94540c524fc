#include "forge/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "forge/error.hpp"

namespace forge {

Image grayscale(const Image& img) {
  validate_image(img, "grayscale");
  if (img.channels == 1) return img;
  Image out(img.width, img.height, 1);
  const size_t n = static_cast<size_t>(img.width) * img.height;
  for (size_t i = 0; i < n; ++i) {
    const float* p = &img.pixels[i * 3];
    out.pixels[i] = clamp01(0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]);
  }
  return out;
}

// Symmetric (edge-inclusive) reflection: -1 -> 0, -2 -> 1, n -> n-1, ...
static int reflect(int i, int n) {
  if (n == 1) return 0;
  int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

Image gaussian_smooth(const Image& img, double sigma, int kernel) {
  validate_image(img, "gaussian_smooth");
  if (kernel < 3 || kernel % 2 == 0)
    throw ParameterError("gaussian_smooth: kernel must be odd and >= 3");
  if (!(sigma > 0.0)) throw ParameterError("gaussian_smooth: sigma must be > 0");

  const int r = kernel / 2;
  std::vector<double> w(kernel);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    w[i + r] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += w[i + r];
  }
  for (double& v : w) v /= sum;

  const int W = img.width, H = img.height, C = img.channels;
  std::vector<double> tmp(img.pixels.size());
  // horizontal pass
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k)
          acc += w[k + r] * img.at(reflect(x + k, W), y, c);
        tmp[(static_cast<size_t>(y) * W + x) * C + c] = acc;
      }
  // vertical pass
  Image out(W, H, C);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k)
          acc += w[k + r] * tmp[(static_cast<size_t>(reflect(y + k, H)) * W + x) * C + c];
        out.at(x, y, c) = clamp01(static_cast<float>(acc));
      }
  return out;
}

Image normalize(const Image& img) {
  validate_image(img, "normalize");
  float lo = img.pixels[0], hi = img.pixels[0];
  for (float v : img.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Image out(img.width, img.height, img.channels);
  if (hi - lo <= 0.0f) return out;  // constant image -> all zeros
  const float scale = 1.0f / (hi - lo);
  for (size_t i = 0; i < img.pixels.size(); ++i)
    out.pixels[i] = clamp01((img.pixels[i] - lo) * scale);
  return out;
}

Image morphology(const Image& img, MorphOp op, int kernel) {
  validate_image(img, "morphology");
  if (img.channels != 1)
    throw ParameterError("morphology: single-channel input required");
  if (kernel < 1 || kernel % 2 == 0)
    throw ParameterError("morphology: kernel must be odd and >= 1");
  const int r = kernel / 2;
  const int W = img.width, H = img.height;
  Image out(W, H, 1);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      float acc = img.at(reflect(x - r, W), reflect(y - r, H));
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          float v = img.at(reflect(x + dx, W), reflect(y + dy, H));
          acc = op == MorphOp::kErode ? std::min(acc, v) : std::max(acc, v);
        }
      out.at(x, y) = acc;
    }
  return out;
}

// Between-class variance maximized over the exact empirical distribution.
// Candidate thresholds sit between consecutive distinct sorted values, so
// the chosen partition (and hence the binary output) is invariant under any
// strictly increasing affine map of the pixel values.
float otsu_threshold(const Image& img) {
  validate_image(img, "otsu_threshold");
  if (img.channels != 1) throw ParameterError("otsu: single-channel input required");
  std::vector<float> v(img.pixels);
  std::sort(v.begin(), v.end());
  const size_t n = v.size();

  std::vector<double> prefix(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  const double total = prefix[n];

  double best_var = -1.0;
  float best_t = v[0];
  for (size_t i = 1; i < n; ++i) {
    if (v[i] == v[i - 1]) continue;  // class boundary must separate distinct values
    const double w0 = static_cast<double>(i) / n;
    const double w1 = 1.0 - w0;
    const double mu0 = prefix[i] / i;
    const double mu1 = (total - prefix[i]) / (n - i);
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = 0.5f * (v[i - 1] + v[i]);
    }
  }
  return best_t;  // constant image: threshold at its value, everything -> 0
}

Image binarize(const Image& img, BinarizeMethod method, float fixed_threshold) {
  validate_image(img, "binarize");
  if (img.channels != 1) throw ParameterError("binarize: single-channel input required");
  const float t = method == BinarizeMethod::kOtsu ? otsu_threshold(img) : fixed_threshold;
  Image out(img.width, img.height, 1);
  for (size_t i = 0; i < img.pixels.size(); ++i)
    out.pixels[i] = img.pixels[i] > t ? 1.0f : 0.0f;
  return out;
}

double ssim(const Image& a, const Image& b) {
  validate_image(a, "ssim(a)");
  validate_image(b, "ssim(b)");
  if (a.channels != 1 || b.channels != 1)
    throw ParameterError("ssim: single-channel inputs required (grayscale first)");
  if (a.width != b.width || a.height != b.height)
    throw ParameterError("ssim: dimension mismatch");
  constexpr int kWin = 8;
  if (a.width < kWin || a.height < kWin)
    throw ParameterError("ssim: images smaller than the 8x8 window");

  const int W = a.width, H = a.height;
  // Integral images for a, b, a^2, b^2, ab, all in double.
  const int IW = W + 1;
  std::vector<double> ia(static_cast<size_t>(IW) * (H + 1), 0.0), ib = ia, iaa = ia,
                      ibb = ia, iab = ia;
  for (int y = 0; y < H; ++y) {
    double ra = 0, rb = 0, raa = 0, rbb = 0, rab = 0;
    for (int x = 0; x < W; ++x) {
      const double va = a.at(x, y), vb = b.at(x, y);
      ra += va;
      rb += vb;
      raa += va * va;
      rbb += vb * vb;
      rab += va * vb;
      const size_t idx = static_cast<size_t>(y + 1) * IW + (x + 1);
      const size_t up = static_cast<size_t>(y) * IW + (x + 1);
      ia[idx] = ia[up] + ra;
      ib[idx] = ib[up] + rb;
      iaa[idx] = iaa[up] + raa;
      ibb[idx] = ibb[up] + rbb;
      iab[idx] = iab[up] + rab;
    }
  }
  auto window_sum = [&](const std::vector<double>& s, int x, int y) {
    const size_t r0 = static_cast<size_t>(y) * IW, r1 = static_cast<size_t>(y + kWin) * IW;
    return s[r1 + x + kWin] - s[r1 + x] - s[r0 + x + kWin] + s[r0 + x];
  };

  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  constexpr double kN = kWin * kWin;

  double acc = 0.0;
  long count = 0;
  for (int y = 0; y + kWin <= H; ++y)
    for (int x = 0; x + kWin <= W; ++x) {
      const double sa = window_sum(ia, x, y), sb = window_sum(ib, x, y);
      const double mua = sa / kN, mub = sb / kN;
      const double va = window_sum(iaa, x, y) / kN - mua * mua;
      const double vb = window_sum(ibb, x, y) / kN - mub * mub;
      const double cab = window_sum(iab, x, y) / kN - mua * mub;
      const double s = ((2.0 * mua * mub + kC1) * (2.0 * cab + kC2)) /
                       ((mua * mua + mub * mub + kC1) * (va + vb + kC2));
      acc += s;
      ++count;
    }
  return acc / count;
}

}  // namespace forge
