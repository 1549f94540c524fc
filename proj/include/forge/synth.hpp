#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/charset.hpp"
#include "forge/font.hpp"
#include "forge/image.hpp"
#include "forge/rng.hpp"

namespace forge {

using Color = std::array<float, 3>;

enum class DensityTier { kNormal, kDense };

// Background security measures: dot noise, curve noise, background color
// change. "Normal" defaults are dot_density 3 per 1000 px^2, curve_count 2,
// thickness 2 px; the dense tier doubles dots and curves.
struct NoiseSpec {
  double dot_density = 3.0;
  int curve_count = 2;
  int curve_thickness_px = 2;
  std::vector<Color> palette;
  bool background_color_jitter = false;
  DensityTier density_tier = DensityTier::kNormal;

  void validate() const;
  bool is_zero() const;

  static NoiseSpec none();
  // One of: dots, curves, dots_curves, dense_dots, dense_curves,
  // dense_dots_curves (the six noise categories of the SSIM experiment).
  static NoiseSpec category(const std::string& name);
  static const std::vector<std::string>& category_names();
  static std::vector<Color> default_palette();
};

// Dots are stamped as radius-1 discs; this is the pixel footprint of one
// (used by the analytic pixel-count expectation in tests).
inline constexpr int kDotAreaPx = 5;

// Foreground security measures plus canvas geometry.
struct StyleSpec {
  Charset charset = Charset::alnum36();
  int min_length = 4;
  int max_length = 7;
  std::vector<std::string> fonts = kBundledFonts;
  double rotation_range_deg = 25.0;
  double size_jitter_pct = 20.0;
  std::vector<Color> fg_palette;
  Color background{0.05f, 0.05f, 0.07f};
  int width = 160;
  int height = 60;

  void validate() const;
  static std::vector<Color> default_fg_palette();
};

struct GlyphBox {
  char ch;
  int left, top, width, height;
};

struct RenderedText {
  Image image;       // RGB canvas, clean background
  Image glyph_mask;  // single-channel alpha of all glyphs
  std::vector<GlyphBox> boxes;
};

// Renders the label onto a clean background with per-character random font,
// rotation, size and color drawn deterministically from seed. Ground-truth
// glyph boxes (tight around alpha > 0.5) are recorded.
RenderedText render_text(const std::string& label, const StyleSpec& style,
                         uint64_t seed);

// Composites dots and curves behind and across the glyphs (noise is applied
// at full strength on background pixels and only faintly over glyph ink, so
// foreground pixels keep their luminance class). Deterministic in seed; a
// zero NoiseSpec is the identity map.
Image apply_background_noise(const Image& clean, const NoiseSpec& noise,
                             uint64_t seed);

struct LabeledSample {
  Image noisy;
  Image clean;
  std::string label;
  NoiseSpec noise;
  uint64_t seed = 0;
  std::vector<GlyphBox> boxes;
};

// Samples a label (length uniform over [min,max], characters uniform over
// the charset), renders it, applies noise.
LabeledSample synthesize_pair(const StyleSpec& style, const NoiseSpec& noise,
                              uint64_t seed);

struct ManifestEntry {
  std::string image_path;                 // relative to the manifest
  std::optional<std::string> clean_path;  // present for paired datasets
  std::string label;
  int length = 0;
  uint64_t seed = 0;
  NoiseSpec noise;
  std::vector<GlyphBox> boxes;
};

// JSONL on disk: a header object (charset, canonical size) followed by one
// object per entry. Paths are relative to the manifest file.
struct DatasetManifest {
  Charset charset;
  int width = 0;
  int height = 0;
  std::vector<ManifestEntry> entries;
  std::filesystem::path root;  // directory of the manifest; not serialized

  void validate() const;
  void save(const std::filesystem::path& path) const;
  static DatasetManifest load(const std::filesystem::path& path);

  std::filesystem::path resolve(const std::string& rel) const { return root / rel; }
  std::string serialize() const;
};

// FNV-1a over the serialized manifest; reports use it as the dataset
// content hash.
uint64_t content_hash(const DatasetManifest& m);
uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL);

struct SplitCounts {
  long train = 0;
  long test = 0;
};
SplitCounts split_counts(long count, double split);

struct BuiltDataset {
  DatasetManifest train;
  DatasetManifest test;
  std::filesystem::path train_manifest;
  std::filesystem::path test_manifest;
};

// Writes images/ plus train.jsonl and test.jsonl under out_root. Sample
// seeds are derived from seed and the sample index, so train and test draws
// are disjoint and two runs with one seed are byte-identical. Refuses to
// touch an out_root that already holds a dataset unless overwrite is set.
BuiltDataset build_dataset(const StyleSpec& style, const NoiseSpec& noise,
                           long count, double split,
                           const std::filesystem::path& out_root, uint64_t seed,
                           bool overwrite = false);

void to_json(nlohmann::json& j, const NoiseSpec& n);
void from_json(const nlohmann::json& j, NoiseSpec& n);
void to_json(nlohmann::json& j, const StyleSpec& s);
void from_json(const nlohmann::json& j, StyleSpec& s);
void to_json(nlohmann::json& j, const GlyphBox& b);
void from_json(const nlohmann::json& j, GlyphBox& b);

}  // namespace forge
