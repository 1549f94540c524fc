#include "forge/font.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "forge/error.hpp"
#include "forge/image_ops.hpp"

namespace forge {

const std::vector<std::string> kBundledFonts = {"block", "bold", "slant"};

bool font_exists(const std::string& font_id) {
  return std::find(kBundledFonts.begin(), kBundledFonts.end(), font_id) !=
         kBundledFonts.end();
}

namespace {

struct Glyph {
  char ch;
  const char* rows[7];  // 5 columns each, '#' = ink
};

// 5x7 dot-matrix glyphs. Lowercase descenders are folded into the 7 rows.
constexpr Glyph kGlyphs[] = {
    {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
    {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
    {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'D', {"###..", "#..#.", "#...#", "#...#", "#...#", "#..#.", "###.."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {'N', {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"}},
    {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
    {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', {"#...#", "#...#", "#...#", ".#.#.", "..#..", "..#..", "..#.."}},
    {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
    {'a', {".....", ".....", ".###.", "....#", ".####", "#...#", ".####"}},
    {'b', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "####."}},
    {'c', {".....", ".....", ".###.", "#....", "#....", "#...#", ".###."}},
    {'d', {"....#", "....#", ".####", "#...#", "#...#", "#...#", ".####"}},
    {'e', {".....", ".....", ".###.", "#...#", "#####", "#....", ".###."}},
    {'f', {"..##.", ".#..#", ".#...", "###..", ".#...", ".#...", ".#..."}},
    {'g', {".....", ".####", "#...#", "#...#", ".####", "....#", ".###."}},
    {'h', {"#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#"}},
    {'i', {"..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###."}},
    {'j', {"...#.", ".....", "..##.", "...#.", "...#.", "#..#.", ".##.."}},
    {'k', {"#....", "#....", "#..#.", "#.#..", "##...", "#.#..", "#..#."}},
    {'l', {".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'m', {".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#"}},
    {'n', {".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#"}},
    {'o', {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###."}},
    {'p', {".....", ".....", "####.", "#...#", "####.", "#....", "#...."}},
    {'q', {".....", ".....", ".####", "#...#", ".####", "....#", "....#"}},
    {'r', {".....", ".....", "#.##.", "##..#", "#....", "#....", "#...."}},
    {'s', {".....", ".....", ".####", "#....", ".###.", "....#", "####."}},
    {'t', {".#...", ".#...", "###..", ".#...", ".#...", ".#..#", "..##."}},
    {'u', {".....", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#"}},
    {'v', {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'w', {".....", ".....", "#...#", "#...#", "#.#.#", "#.#.#", ".#.#."}},
    {'x', {".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#"}},
    {'y', {".....", ".....", "#...#", "#...#", ".####", "....#", ".###."}},
    {'z', {".....", ".....", "#####", "...#.", "..#..", ".#...", "#####"}},
};

const Glyph* find_glyph(char ch) {
  for (const Glyph& g : kGlyphs)
    if (g.ch == ch) return &g;
  return nullptr;
}

// Trims fully-empty rows so glyph height reflects actual ink (lowercase
// bitmaps lead with blank rows).
Image glyph_matrix(const Glyph& g) {
  int top = 0, bottom = 6;
  auto row_empty = [&](int r) {
    return std::string(g.rows[r]).find('#') == std::string::npos;
  };
  while (top < 6 && row_empty(top)) ++top;
  while (bottom > top && row_empty(bottom)) --bottom;
  Image m(5, bottom - top + 1, 1);
  for (int y = top; y <= bottom; ++y)
    for (int x = 0; x < 5; ++x)
      m.at(x, y - top) = g.rows[y][x] == '#' ? 1.0f : 0.0f;
  return m;
}

Image upscale_nearest(const Image& m, int out_w, int out_h) {
  Image out(out_w, out_h, 1);
  for (int y = 0; y < out_h; ++y) {
    int sy = std::min(m.height - 1, y * m.height / out_h);
    for (int x = 0; x < out_w; ++x) {
      int sx = std::min(m.width - 1, x * m.width / out_w);
      out.at(x, y) = m.at(sx, sy);
    }
  }
  return out;
}

Image shear_right(const Image& m, double factor) {
  int extra = static_cast<int>(std::ceil(factor * m.height));
  Image out(m.width + extra, m.height, 1);
  for (int y = 0; y < m.height; ++y) {
    // rows shift right as they go up
    double shift = factor * (m.height - 1 - y);
    int s0 = static_cast<int>(std::floor(shift));
    double frac = shift - s0;
    for (int x = 0; x < out.width; ++x) {
      double v = 0.0;
      int xa = x - s0, xb = x - s0 - 1;
      if (xa >= 0 && xa < m.width) v += (1.0 - frac) * m.at(xa, y);
      if (xb >= 0 && xb < m.width) v += frac * m.at(xb, y);
      out.at(x, y) = clamp01(static_cast<float>(v));
    }
  }
  return out;
}

Image rotate_expand(const Image& m, double deg) {
  if (deg == 0.0) return m;
  const double rad = deg * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const double w = m.width, h = m.height;
  const double nw = std::fabs(w * c) + std::fabs(h * s);
  const double nh = std::fabs(w * s) + std::fabs(h * c);
  const int W = std::max(1, static_cast<int>(std::ceil(nw)));
  const int H = std::max(1, static_cast<int>(std::ceil(nh)));
  Image out(W, H, 1);
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  const double ocx = (W - 1) / 2.0, ocy = (H - 1) / 2.0;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      // inverse rotation back into the source
      const double dx = x - ocx, dy = y - ocy;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      double v = 0.0;
      for (int oy = 0; oy <= 1; ++oy)
        for (int ox = 0; ox <= 1; ++ox) {
          const int px = x0 + ox, py = y0 + oy;
          if (px < 0 || py < 0 || px >= m.width || py >= m.height) continue;
          const double wgt = (ox ? fx : 1.0 - fx) * (oy ? fy : 1.0 - fy);
          v += wgt * m.at(px, py);
        }
      out.at(x, y) = clamp01(static_cast<float>(v));
    }
  return out;
}

Image tight_crop_mask(const Image& m, float eps = 0.02f) {
  int x0 = m.width, y0 = m.height, x1 = -1, y1 = -1;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(x, y) > eps) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return m;
  return crop(m, x0, y0, x1 - x0 + 1, y1 - y0 + 1);
}

}  // namespace

bool glyph_exists(char ch) { return find_glyph(ch) != nullptr; }

Image render_glyph(char ch, const std::string& font_id, int height_px,
                   double rotation_deg) {
  if (!font_exists(font_id))
    throw ResourceError("unknown font: \"" + font_id + "\"");
  const Glyph* g = find_glyph(ch);
  if (!g) throw ContractError(std::string("no glyph for character '") + ch + "'");
  if (height_px < 7) height_px = 7;

  Image m = glyph_matrix(*g);
  // Characters with trimmed rows keep their proportion of the em height.
  int target_h = std::max(4, height_px * m.height / 7);
  int target_w = std::max(3, target_h * m.width * 10 / (m.height * 14));  // ~5:7 aspect
  Image up = upscale_nearest(m, target_w, target_h);

  if (font_id == "bold") up = morphology(up, MorphOp::kDilate, 3);
  if (font_id == "slant") up = shear_right(up, 0.30);

  // Soft edges so downstream bilinear work looks like rasterized type.
  up = gaussian_smooth(up, 0.7, 3);
  up = rotate_expand(up, rotation_deg);
  return tight_crop_mask(up);
}

}  // namespace forge
