#include "forge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "forge/error.hpp"
#include "forge/image_ops.hpp"

namespace forge {

namespace {
constexpr double kNormalDotDensity = 3.0;
constexpr int kNormalCurveCount = 2;
}  // namespace

std::vector<Color> NoiseSpec::default_palette() {
  return {{0.55f, 0.25f, 0.25f},
          {0.25f, 0.55f, 0.30f},
          {0.30f, 0.30f, 0.60f},
          {0.55f, 0.50f, 0.25f},
          {0.50f, 0.28f, 0.55f}};
}

NoiseSpec NoiseSpec::none() {
  NoiseSpec n;
  n.dot_density = 0.0;
  n.curve_count = 0;
  n.background_color_jitter = false;
  n.palette = default_palette();
  return n;
}

const std::vector<std::string>& NoiseSpec::category_names() {
  static const std::vector<std::string> kNames = {
      "dots", "curves", "dots_curves", "dense_dots", "dense_curves",
      "dense_dots_curves"};
  return kNames;
}

NoiseSpec NoiseSpec::category(const std::string& name) {
  NoiseSpec n = none();
  bool dense = name.rfind("dense_", 0) == 0;
  std::string base = dense ? name.substr(6) : name;
  double mult = dense ? 2.0 : 1.0;
  if (base == "dots") {
    n.dot_density = kNormalDotDensity * mult;
  } else if (base == "curves") {
    n.curve_count = static_cast<int>(kNormalCurveCount * mult);
  } else if (base == "dots_curves") {
    n.dot_density = kNormalDotDensity * mult;
    n.curve_count = static_cast<int>(kNormalCurveCount * mult);
  } else {
    throw ParameterError("unknown noise category: " + name);
  }
  n.density_tier = dense ? DensityTier::kDense : DensityTier::kNormal;
  return n;
}

void NoiseSpec::validate() const {
  if (dot_density < 0.0) throw ParameterError("noise: dot_density must be >= 0");
  if (curve_count < 0) throw ParameterError("noise: curve_count must be >= 0");
  if (curve_thickness_px < 1)
    throw ParameterError("noise: curve_thickness_px must be >= 1");
  if (density_tier == DensityTier::kDense) {
    bool dots_ok = dot_density == 0.0 || dot_density >= 2.0 * kNormalDotDensity;
    bool curves_ok = curve_count == 0 || curve_count >= 2 * kNormalCurveCount;
    if (!dots_ok || !curves_ok)
      throw ParameterError(
          "noise: dense tier requires at least 2x the normal dot/curve load");
  }
}

bool NoiseSpec::is_zero() const {
  return dot_density == 0.0 && curve_count == 0 && !background_color_jitter;
}

std::vector<Color> StyleSpec::default_fg_palette() {
  return {{0.95f, 0.95f, 0.95f},
          {0.95f, 0.85f, 0.40f},
          {0.50f, 0.92f, 0.95f},
          {0.60f, 0.95f, 0.50f},
          {0.95f, 0.65f, 0.85f}};
}

void StyleSpec::validate() const {
  if (min_length < 1 || min_length > max_length)
    throw ParameterError("style: need 1 <= min_length <= max_length");
  if (charset.symbols.empty()) throw ParameterError("style: empty charset");
  if (fonts.empty()) throw ParameterError("style: no fonts");
  for (const std::string& f : fonts)
    if (!font_exists(f)) throw ResourceError("unknown font: \"" + f + "\"");
  if (width < 16 || height < 16) throw ParameterError("style: canvas too small");
  if (rotation_range_deg < 0.0 || size_jitter_pct < 0.0)
    throw ParameterError("style: negative jitter range");
}

static std::vector<Color> fg_palette_of(const StyleSpec& s) {
  return s.fg_palette.empty() ? StyleSpec::default_fg_palette() : s.fg_palette;
}
static std::vector<Color> palette_of(const NoiseSpec& n) {
  return n.palette.empty() ? NoiseSpec::default_palette() : n.palette;
}

RenderedText render_text(const std::string& label, const StyleSpec& style,
                         uint64_t seed) {
  style.validate();
  if (label.empty()) throw DataError("render_text: empty label");
  for (char c : label) {
    if (!style.charset.contains(c))
      throw DataError(std::string("render_text: character '") + c +
                      "' not in charset");
    if (!glyph_exists(c))
      throw ResourceError(std::string("render_text: no bundled glyph for '") + c +
                          "'");
  }

  const int W = style.width, H = style.height;
  const int n = static_cast<int>(label.size());
  const std::vector<Color> palette = fg_palette_of(style);
  Rng rng(seed);

  struct Placed {
    Image mask;
    Color color;
  };
  std::vector<Placed> glyphs(n);
  const double base_h = 0.62 * H;
  for (int i = 0; i < n; ++i) {
    Rng r = rng.fork(0x100 + i);
    const std::string& font = style.fonts[r.next_int(0, static_cast<int>(style.fonts.size()) - 1)];
    double rot = r.uniform(-style.rotation_range_deg, style.rotation_range_deg);
    double jit = r.uniform(-style.size_jitter_pct, style.size_jitter_pct) / 100.0;
    int h = std::max(8, static_cast<int>(std::lround(base_h * (1.0 + jit))));
    glyphs[i].mask = render_glyph(label[i], font, h, rot);
    if (glyphs[i].mask.height > H - 2) {
      int nw = std::max(3, glyphs[i].mask.width * (H - 2) / glyphs[i].mask.height);
      glyphs[i].mask = resize_bilinear(glyphs[i].mask, nw, H - 2);
    }
    glyphs[i].color = palette[r.next_int(0, static_cast<int>(palette.size()) - 1)];
  }

  // Horizontal layout: spread evenly; when the canvas is too narrow the
  // inter-glyph gap goes negative and the characters overlap.
  const int margin = 3;
  int total = 0;
  for (const Placed& g : glyphs) total += g.mask.width;
  const int usable = W - 2 * margin;
  double gap = n > 1 ? static_cast<double>(usable - total) / (n + 1)
                     : (usable - total) / 2.0;
  if (usable < total && n > 1) gap = static_cast<double>(usable - total) / (n - 1);

  RenderedText out;
  out.image = Image(W, H, 3);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = style.background[c];
  out.glyph_mask = Image(W, H, 1, 0.0f);

  double cursor = margin + std::max(0.0, gap);
  for (int i = 0; i < n; ++i) {
    const Image& m = glyphs[i].mask;
    Rng r = rng.fork(0x9000 + i);
    int x0 = static_cast<int>(std::lround(cursor));
    x0 = std::clamp(x0, 0, std::max(0, W - m.width));
    double yj = r.uniform(-0.08, 0.08) * H;
    int y0 = static_cast<int>(std::lround((H - m.height) / 2.0 + yj));
    y0 = std::clamp(y0, 0, std::max(0, H - m.height));

    int bx0 = W, by0 = H, bx1 = -1, by1 = -1;
    for (int y = 0; y < m.height; ++y) {
      int py = y0 + y;
      if (py < 0 || py >= H) continue;
      for (int x = 0; x < m.width; ++x) {
        int px = x0 + x;
        if (px < 0 || px >= W) continue;
        float a = m.at(x, y);
        if (a <= 0.0f) continue;
        for (int c = 0; c < 3; ++c)
          out.image.at(px, py, c) = clamp01(out.image.at(px, py, c) * (1.0f - a) +
                                            glyphs[i].color[c] * a);
        out.glyph_mask.at(px, py) = std::max(out.glyph_mask.at(px, py), a);
        if (a > 0.5f) {
          bx0 = std::min(bx0, px);
          by0 = std::min(by0, py);
          bx1 = std::max(bx1, px);
          by1 = std::max(by1, py);
        }
      }
    }
    GlyphBox box;
    box.ch = label[i];
    if (bx1 >= 0) {
      box.left = bx0;
      box.top = by0;
      box.width = bx1 - bx0 + 1;
      box.height = by1 - by0 + 1;
    } else {
      box.left = x0;
      box.top = y0;
      box.width = std::max(1, m.width);
      box.height = std::max(1, m.height);
    }
    out.boxes.push_back(box);
    cursor += m.width + gap;
  }
  return out;
}

namespace {

// Pixels whose color departs from the flat clean background are treated as
// glyph ink; noise only brushes over them at low opacity.
Image estimate_ink_mask(const Image& clean) {
  Color bg{};
  const int cx[4] = {0, clean.width - 1, 0, clean.width - 1};
  const int cy[4] = {0, 0, clean.height - 1, clean.height - 1};
  for (int c = 0; c < clean.channels; ++c) {
    float vals[4];
    for (int k = 0; k < 4; ++k) vals[k] = clean.at(cx[k], cy[k], c);
    std::sort(vals, vals + 4);
    bg[c] = 0.5f * (vals[1] + vals[2]);
  }
  Image mask(clean.width, clean.height, 1, 0.0f);
  for (int y = 0; y < clean.height; ++y)
    for (int x = 0; x < clean.width; ++x) {
      float d = 0.0f;
      for (int c = 0; c < clean.channels; ++c)
        d = std::max(d, std::fabs(clean.at(x, y, c) - bg[c]));
      if (d > 0.10f) mask.at(x, y) = 1.0f;
    }
  return mask;
}

// Noise brushes over glyph ink at reduced opacity so the characters stay in
// their luminance class while the noise still visibly crosses them.
constexpr float kInkAlpha = 0.25f;

void stamp_disc(Image& cover, double cx, double cy, int radius) {
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy > radius * radius) continue;
      int x = static_cast<int>(std::lround(cx)) + dx;
      int y = static_cast<int>(std::lround(cy)) + dy;
      if (x < 0 || y < 0 || x >= cover.width || y >= cover.height) continue;
      cover.at(x, y) = 1.0f;
    }
}

// Single blend per covered pixel, no matter how many stamps hit it.
void blend_coverage(Image& img, const Image& cover, const Image& ink,
                    const Color& color) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      if (cover.at(x, y) <= 0.0f) continue;
      float a = ink.at(x, y) > 0.5f ? kInkAlpha : 1.0f;
      for (int c = 0; c < img.channels; ++c) {
        float nc = img.channels == 3 ? color[c]
                                     : 0.299f * color[0] + 0.587f * color[1] +
                                           0.114f * color[2];
        img.at(x, y, c) = clamp01(img.at(x, y, c) * (1.0f - a) + nc * a);
      }
    }
}

}  // namespace

Image apply_background_noise(const Image& clean, const NoiseSpec& noise,
                             uint64_t seed) {
  validate_image(clean, "apply_background_noise");
  noise.validate();
  if (noise.is_zero()) return clean;

  const int W = clean.width, H = clean.height;
  const std::vector<Color> palette = palette_of(noise);
  Image ink = estimate_ink_mask(clean);
  Image out = clean;
  Rng rng(seed);

  if (noise.background_color_jitter) {
    Rng r = rng.fork(1);
    Color tint{static_cast<float>(r.uniform(0.0, 0.45)),
               static_cast<float>(r.uniform(0.0, 0.45)),
               static_cast<float>(r.uniform(0.0, 0.45))};
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        float a = ink.at(x, y) > 0.5f ? 0.10f : 0.35f;
        for (int c = 0; c < out.channels; ++c) {
          float tc = out.channels == 3 ? tint[c]
                                       : 0.299f * tint[0] + 0.587f * tint[1] +
                                             0.114f * tint[2];
          out.at(x, y, c) = clamp01(out.at(x, y, c) * (1.0f - a) + tc * a);
        }
      }
  }

  {
    Rng r = rng.fork(2);
    long count = std::lround(noise.dot_density * (static_cast<double>(W) * H) / 1000.0);
    for (long i = 0; i < count; ++i) {
      double cx = r.uniform(0.0, W - 1.0);
      double cy = r.uniform(0.0, H - 1.0);
      const Color& col = palette[r.next_int(0, static_cast<int>(palette.size()) - 1)];
      Image cover(W, H, 1, 0.0f);
      stamp_disc(cover, cx, cy, 1);
      blend_coverage(out, cover, ink, col);
    }
  }

  {
    Rng r = rng.fork(3);
    const int radius = std::max(1, noise.curve_thickness_px / 2);
    for (int i = 0; i < noise.curve_count; ++i) {
      // Cubic Bezier spanning most of the width so it crosses characters.
      double x0 = r.uniform(0.0, 0.08 * W);
      double x3 = r.uniform(0.92 * W, W - 1.0);
      double x1 = r.uniform(0.15 * W, 0.50 * W);
      double x2 = r.uniform(0.50 * W, 0.85 * W);
      double y0 = r.uniform(0.12 * H, 0.88 * H);
      double y1 = r.uniform(0.05 * H, 0.95 * H);
      double y2 = r.uniform(0.05 * H, 0.95 * H);
      double y3 = r.uniform(0.12 * H, 0.88 * H);
      const Color& col = palette[r.next_int(0, static_cast<int>(palette.size()) - 1)];
      const int steps = 4 * std::max(W, H);
      Image cover(W, H, 1, 0.0f);
      for (int t = 0; t <= steps; ++t) {
        double u = static_cast<double>(t) / steps, v = 1.0 - u;
        double bx = v * v * v * x0 + 3 * v * v * u * x1 + 3 * v * u * u * x2 + u * u * u * x3;
        double by = v * v * v * y0 + 3 * v * v * u * y1 + 3 * v * u * u * y2 + u * u * u * y3;
        stamp_disc(cover, bx, by, radius);
      }
      blend_coverage(out, cover, ink, col);
    }
  }
  return out;
}

LabeledSample synthesize_pair(const StyleSpec& style, const NoiseSpec& noise,
                              uint64_t seed) {
  style.validate();
  noise.validate();
  Rng rng(seed);
  Rng lr = rng.fork(11);
  int len = lr.next_int(style.min_length, style.max_length);
  std::string label(len, '0');
  for (int i = 0; i < len; ++i)
    label[i] = style.charset.symbols[lr.next_int(0, style.charset.size() - 1)];

  RenderedText rt = render_text(label, style, mix64(seed ^ 0x52454e44ULL));
  LabeledSample s;
  s.clean = std::move(rt.image);
  s.noisy = apply_background_noise(s.clean, noise, mix64(seed ^ 0x4e4f4953ULL));
  s.label = label;
  s.noise = noise;
  s.seed = seed;
  s.boxes = std::move(rt.boxes);
  return s;
}

// --- manifest -------------------------------------------------------------

void to_json(nlohmann::json& j, const GlyphBox& b) {
  j = {{"ch", std::string(1, b.ch)},
       {"left", b.left},
       {"top", b.top},
       {"width", b.width},
       {"height", b.height}};
}

void from_json(const nlohmann::json& j, GlyphBox& b) {
  b.ch = j.at("ch").get<std::string>().at(0);
  b.left = j.at("left").get<int>();
  b.top = j.at("top").get<int>();
  b.width = j.at("width").get<int>();
  b.height = j.at("height").get<int>();
}

void to_json(nlohmann::json& j, const NoiseSpec& n) {
  j = {{"dot_density", n.dot_density},
       {"curve_count", n.curve_count},
       {"curve_thickness_px", n.curve_thickness_px},
       {"palette", n.palette},
       {"background_color_jitter", n.background_color_jitter},
       {"density_tier", n.density_tier == DensityTier::kDense ? "dense" : "normal"}};
}

void from_json(const nlohmann::json& j, NoiseSpec& n) {
  n.dot_density = j.at("dot_density").get<double>();
  n.curve_count = j.at("curve_count").get<int>();
  n.curve_thickness_px = j.at("curve_thickness_px").get<int>();
  n.palette = j.at("palette").get<std::vector<Color>>();
  n.background_color_jitter = j.at("background_color_jitter").get<bool>();
  n.density_tier = j.at("density_tier").get<std::string>() == "dense"
                       ? DensityTier::kDense
                       : DensityTier::kNormal;
}

void to_json(nlohmann::json& j, const StyleSpec& s) {
  j = {{"charset", s.charset.symbols},
       {"fold_case", s.charset.fold_case},
       {"min_length", s.min_length},
       {"max_length", s.max_length},
       {"fonts", s.fonts},
       {"rotation_range_deg", s.rotation_range_deg},
       {"size_jitter_pct", s.size_jitter_pct},
       {"fg_palette", s.fg_palette},
       {"background", s.background},
       {"width", s.width},
       {"height", s.height}};
}

void from_json(const nlohmann::json& j, StyleSpec& s) {
  s.charset.symbols = j.at("charset").get<std::string>();
  s.charset.fold_case = j.at("fold_case").get<bool>();
  s.min_length = j.at("min_length").get<int>();
  s.max_length = j.at("max_length").get<int>();
  s.fonts = j.at("fonts").get<std::vector<std::string>>();
  s.rotation_range_deg = j.at("rotation_range_deg").get<double>();
  s.size_jitter_pct = j.at("size_jitter_pct").get<double>();
  s.fg_palette = j.at("fg_palette").get<std::vector<Color>>();
  s.background = j.at("background").get<Color>();
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
}

static void entry_to_json(nlohmann::json& j, const ManifestEntry& e) {
  j = {{"image_path", e.image_path},
       {"label", e.label},
       {"length", e.length},
       {"seed", e.seed},
       {"noise", e.noise},
       {"boxes", e.boxes}};
  if (e.clean_path) j["clean_path"] = *e.clean_path;
}

static ManifestEntry entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  e.image_path = j.at("image_path").get<std::string>();
  if (j.contains("clean_path")) e.clean_path = j.at("clean_path").get<std::string>();
  e.label = j.at("label").get<std::string>();
  e.length = j.at("length").get<int>();
  e.seed = j.at("seed").get<uint64_t>();
  e.noise = j.at("noise").get<NoiseSpec>();
  if (j.contains("boxes")) e.boxes = j.at("boxes").get<std::vector<GlyphBox>>();
  return e;
}

static bool path_escapes_root(const std::string& rel) {
  if (rel.empty() || rel.front() == '/') return true;
  std::filesystem::path p(rel);
  for (const auto& part : p)
    if (part == "..") return true;
  return false;
}

void DatasetManifest::validate() const {
  if (charset.symbols.empty()) throw DataError("manifest: empty charset");
  if (width < 1 || height < 1) throw DataError("manifest: bad canonical size");
  std::set<std::string> seen;
  for (const ManifestEntry& e : entries) {
    if (static_cast<int>(e.label.size()) != e.length)
      throw DataError("manifest: length field does not match label \"" + e.label +
                      "\"");
    charset.require_label(e.label);
    if (path_escapes_root(e.image_path) ||
        (e.clean_path && path_escapes_root(*e.clean_path)))
      throw DataError("manifest: path escapes dataset root: " + e.image_path);
    if (!seen.insert(e.image_path).second)
      throw DataError("manifest: duplicate path: " + e.image_path);
  }
}

std::string DatasetManifest::serialize() const {
  nlohmann::json header = {{"type", "forge-dataset"},
                           {"version", 1},
                           {"charset", charset.symbols},
                           {"fold_case", charset.fold_case},
                           {"canonical_size", {width, height}}};
  std::string out = header.dump();
  out += '\n';
  for (const ManifestEntry& e : entries) {
    nlohmann::json j;
    entry_to_json(j, e);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
  validate();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write manifest: " + path.string());
  f << serialize();
  if (!f) throw IoError("short write: " + path.string());
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read manifest: " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw DataError("manifest empty: " + path.string());
  nlohmann::json header = nlohmann::json::parse(line);
  DatasetManifest m;
  m.charset.symbols = header.at("charset").get<std::string>();
  m.charset.fold_case = header.at("fold_case").get<bool>();
  m.width = header.at("canonical_size").at(0).get<int>();
  m.height = header.at("canonical_size").at(1).get<int>();
  m.root = path.parent_path();
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    m.entries.push_back(entry_from_json(nlohmann::json::parse(line)));
  }
  m.validate();
  return m;
}

uint64_t fnv1a(const void* data, size_t len, uint64_t h) {
  const uint8_t* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t content_hash(const DatasetManifest& m) {
  std::string s = m.serialize();
  return fnv1a(s.data(), s.size());
}

SplitCounts split_counts(long count, double split) {
  if (count < 1) throw ParameterError("build_dataset: count must be >= 1");
  if (!(split > 0.0 && split < 1.0))
    throw ParameterError("build_dataset: split must be in (0,1)");
  SplitCounts sc;
  sc.train = std::clamp(std::lround(count * split), 0L, count);
  sc.test = count - sc.train;
  return sc;
}

BuiltDataset build_dataset(const StyleSpec& style, const NoiseSpec& noise,
                           long count, double split,
                           const std::filesystem::path& out_root, uint64_t seed,
                           bool overwrite) {
  style.validate();
  noise.validate();
  SplitCounts sc = split_counts(count, split);

  namespace fs = std::filesystem;
  fs::path train_path = out_root / "train.jsonl";
  fs::path test_path = out_root / "test.jsonl";
  if (!overwrite && (fs::exists(train_path) || fs::exists(test_path)))
    throw IoError("build_dataset: " + out_root.string() +
                  " already holds a dataset (pass overwrite to replace)");
  std::error_code ec;
  fs::create_directories(out_root / "images", ec);
  if (ec) throw IoError("build_dataset: cannot create " + out_root.string());

  BuiltDataset out;
  for (DatasetManifest* m : {&out.train, &out.test}) {
    m->charset = style.charset;
    m->width = style.width;
    m->height = style.height;
    m->root = out_root;
  }

  for (long i = 0; i < count; ++i) {
    uint64_t sample_seed = mix64(seed ^ (0x5a5a5a5aULL + static_cast<uint64_t>(i) * 0x9e3779b97f4a7c15ULL));
    LabeledSample s = synthesize_pair(style, noise, sample_seed);
    char noisy_name[64], clean_name[64];
    std::snprintf(noisy_name, sizeof noisy_name, "images/noisy_%06ld.png", i);
    std::snprintf(clean_name, sizeof clean_name, "images/clean_%06ld.png", i);
    write_png(out_root / noisy_name, s.noisy);
    write_png(out_root / clean_name, s.clean);
    ManifestEntry e;
    e.image_path = noisy_name;
    e.clean_path = clean_name;
    e.label = s.label;
    e.length = static_cast<int>(s.label.size());
    e.seed = sample_seed;
    e.noise = noise;
    e.boxes = s.boxes;
    (i < sc.train ? out.train : out.test).entries.push_back(std::move(e));
  }

  out.train.save(train_path);
  out.test.save(test_path);
  out.train_manifest = train_path;
  out.test_manifest = test_path;
  return out;
}

}  // namespace forge
