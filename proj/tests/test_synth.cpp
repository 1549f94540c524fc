#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "forge/error.hpp"
#include "forge/image_ops.hpp"
#include "forge/synth.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

StyleSpec digits4_style() {
  StyleSpec s;
  s.charset = Charset::digits();
  s.min_length = 4;
  s.max_length = 4;
  return s;
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "forge_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("render_text: single character yields one ground-truth box") {
  StyleSpec style;
  RenderedText rt = render_text("A", style, 0);
  CHECK(rt.image.width == style.width);
  CHECK(rt.image.height == style.height);
  CHECK(rt.boxes.size() == 1);
  CHECK(rt.boxes[0].width >= 1);
  CHECK(rt.boxes[0].height >= 1);
}

TEST_CASE("render_text is deterministic") {
  StyleSpec style;
  RenderedText a = render_text("Mq42", style, 7);
  RenderedText b = render_text("Mq42", style, 7);
  CHECK(a.image.pixels == b.image.pixels);
  CHECK(a.boxes.size() == b.boxes.size());
}

TEST_CASE("render_text: four digits give four boxes with increasing lefts") {
  RenderedText rt = render_text("8041", digits4_style(), 1);
  REQUIRE(rt.boxes.size() == 4);
  for (size_t i = 1; i < rt.boxes.size(); ++i)
    CHECK(rt.boxes[i].left > rt.boxes[i - 1].left);
}

TEST_CASE("render_text error paths") {
  StyleSpec style;
  CHECK_THROWS_AS(render_text("", style, 0), DataError);
  CHECK_THROWS_AS(render_text("A#B", style, 0), DataError);
  StyleSpec bad = style;
  bad.fonts = {"no-such-font"};
  CHECK_THROWS_AS(render_text("A", bad, 0), ResourceError);
}

TEST_CASE("zero noise is the identity map") {
  RenderedText rt = render_text("73", digits4_style(), 3);
  Image out = apply_background_noise(rt.image, NoiseSpec::none(), 12345);
  CHECK(out.pixels == rt.image.pixels);
}

TEST_CASE("dot coverage matches the analytic expectation within 30%") {
  Image blank(160, 60, 3, 1.0f);
  NoiseSpec noise = NoiseSpec::none();
  noise.dot_density = 5.0;
  Image out = apply_background_noise(blank, noise, 3);
  long changed = 0;
  for (size_t i = 0; i < out.pixels.size(); i += 3)
    if (out.pixels[i] != 1.0f || out.pixels[i + 1] != 1.0f || out.pixels[i + 2] != 1.0f)
      ++changed;
  double area = 160.0 * 60.0;
  double expect = noise.dot_density * (area / 1000.0) * kDotAreaPx;
  CHECK(changed > 0.7 * expect);
  CHECK(changed < 1.3 * expect);
}

TEST_CASE("dense noise degrades SSIM more than normal noise") {
  StyleSpec style;
  RenderedText rt = render_text("Mq42", style, 9);
  NoiseSpec normal = NoiseSpec::category("dots_curves");
  NoiseSpec dense = NoiseSpec::category("dense_dots_curves");
  Image gn = grayscale(apply_background_noise(rt.image, normal, 9));
  Image gd = grayscale(apply_background_noise(rt.image, dense, 9));
  Image gc = grayscale(rt.image);
  CHECK(ssim(gd, gc) < ssim(gn, gc));
}

TEST_CASE("noise crosses but does not erase glyphs") {
  StyleSpec style;
  for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    LabeledSample s = synthesize_pair(style, NoiseSpec::category("dense_dots_curves"), seed);
    Image clean_gray = grayscale(s.clean);
    Image noisy_gray = grayscale(s.noisy);
    float t = otsu_threshold(clean_gray);
    long glyph_px = 0, kept = 0;
    for (const GlyphBox& b : s.boxes)
      for (int y = b.top; y < b.top + b.height; ++y)
        for (int x = b.left; x < b.left + b.width; ++x) {
          if (clean_gray.at(x, y) <= t) continue;  // not glyph ink
          ++glyph_px;
          if (noisy_gray.at(x, y) > t) ++kept;
        }
    REQUIRE(glyph_px > 0);
    CHECK(static_cast<double>(kept) / glyph_px >= 0.95);
  }
}

TEST_CASE("otsu marks at least 99% of ground-truth glyph pixels as foreground") {
  StyleSpec style;
  RenderedText rt = render_text("EXAM71", style, 21);
  Image gray = grayscale(rt.image);
  Image bin = binarize(gray, BinarizeMethod::kOtsu);
  long glyph_px = 0, fg = 0;
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) {
      if (rt.glyph_mask.at(x, y) <= 0.5f) continue;
      ++glyph_px;
      if (bin.at(x, y) == 1.0f) ++fg;
    }
  REQUIRE(glyph_px > 0);
  CHECK(static_cast<double>(fg) / glyph_px >= 0.99);
}

TEST_CASE("synthesize_pair: collapsed range gives fixed-length digit labels") {
  LabeledSample s = synthesize_pair(digits4_style(), NoiseSpec::none(), 5);
  CHECK(s.label.size() == 4);
  for (char c : s.label) CHECK((c >= '0' && c <= '9'));
  CHECK(s.noisy.width == s.clean.width);
  CHECK(s.noisy.height == s.clean.height);
}

TEST_CASE("synthesize_pair is deterministic") {
  StyleSpec style;
  NoiseSpec noise = NoiseSpec::category("dots_curves");
  LabeledSample a = synthesize_pair(style, noise, 17);
  LabeledSample b = synthesize_pair(style, noise, 17);
  CHECK(a.label == b.label);
  CHECK(a.noisy.pixels == b.noisy.pixels);
  CHECK(a.clean.pixels == b.clean.pixels);
}

TEST_CASE("label lengths are uniform over the range") {
  StyleSpec style;
  style.min_length = 4;
  style.max_length = 7;
  std::map<int, int> freq;
  const int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    Rng rng(mix64(900 + i));
    Rng lr = rng.fork(11);  // same stream synthesize_pair uses for the label
    freq[lr.next_int(4, 7)]++;
  }
  for (int len = 4; len <= 7; ++len) {
    double pct = 100.0 * freq[len] / kDraws;
    CHECK(pct > 22.0);
    CHECK(pct < 28.0);
  }
}

TEST_CASE("split_counts arithmetic") {
  SplitCounts a = split_counts(10, 0.9);
  CHECK(a.train == 9);
  CHECK(a.test == 1);
  SplitCounts b = split_counts(11000, 10.0 / 11.0);
  CHECK(b.train == 10000);
  CHECK(b.test == 1000);
  CHECK_THROWS_AS(split_counts(0, 0.5), ParameterError);
  CHECK_THROWS_AS(split_counts(10, 1.0), ParameterError);
}

TEST_CASE("build_dataset writes a loadable, valid dataset") {
  fs::path root = scratch_dir("build_small");
  StyleSpec style = digits4_style();
  style.width = 96;
  style.height = 40;
  BuiltDataset built = build_dataset(style, NoiseSpec::category("dots"), 10, 0.9, root, 42);
  CHECK(built.train.entries.size() == 9);
  CHECK(built.test.entries.size() == 1);

  DatasetManifest loaded = DatasetManifest::load(built.train_manifest);
  CHECK(loaded.entries.size() == 9);
  for (const ManifestEntry& e : loaded.entries) {
    CHECK(static_cast<int>(e.label.size()) == e.length);
    Image img = read_png(loaded.resolve(e.image_path));
    CHECK(img.width == style.width);
    CHECK(img.height == style.height);
    REQUIRE(e.clean_path.has_value());
    Image clean = read_png(loaded.resolve(*e.clean_path));
    CHECK(clean.width == img.width);
  }
}

TEST_CASE("build_dataset refuses to overwrite by default") {
  fs::path root = scratch_dir("build_refuse");
  StyleSpec style = digits4_style();
  style.width = 64;
  style.height = 32;
  build_dataset(style, NoiseSpec::none(), 2, 0.5, root, 1);
  CHECK_THROWS_AS(build_dataset(style, NoiseSpec::none(), 2, 0.5, root, 1), IoError);
  CHECK_NOTHROW(build_dataset(style, NoiseSpec::none(), 2, 0.5, root, 1, true));
}

TEST_CASE("build_dataset is byte-deterministic") {
  StyleSpec style = digits4_style();
  style.width = 64;
  style.height = 32;
  fs::path a = scratch_dir("build_det_a");
  fs::path b = scratch_dir("build_det_b");
  build_dataset(style, NoiseSpec::category("curves"), 6, 0.5, a, 77);
  build_dataset(style, NoiseSpec::category("curves"), 6, 0.5, b, 77);
  CHECK(slurp(a / "train.jsonl") == slurp(b / "train.jsonl"));
  CHECK(slurp(a / "test.jsonl") == slurp(b / "test.jsonl"));
  CHECK(slurp(a / "images/noisy_000003.png") == slurp(b / "images/noisy_000003.png"));
  CHECK(content_hash(DatasetManifest::load(a / "train.jsonl")) ==
        content_hash(DatasetManifest::load(b / "train.jsonl")));
}

TEST_CASE("manifest validation catches corrupt entries") {
  DatasetManifest m;
  m.charset = Charset::digits();
  m.width = 64;
  m.height = 32;
  ManifestEntry e;
  e.image_path = "images/x.png";
  e.label = "12";
  e.length = 3;  // mismatch
  e.noise = NoiseSpec::none();
  m.entries.push_back(e);
  CHECK_THROWS_AS(m.validate(), DataError);

  m.entries[0].length = 2;
  CHECK_NOTHROW(m.validate());

  m.entries[0].image_path = "../escape.png";
  CHECK_THROWS_AS(m.validate(), DataError);

  m.entries[0].image_path = "images/x.png";
  m.entries.push_back(m.entries[0]);  // duplicate
  CHECK_THROWS_AS(m.validate(), DataError);
}

TEST_CASE("dense tier validation") {
  NoiseSpec n = NoiseSpec::category("dense_dots");
  CHECK_NOTHROW(n.validate());
  n.dot_density = 4.0;  // below 2x normal
  CHECK_THROWS_AS(n.validate(), ParameterError);
  CHECK_THROWS_AS(NoiseSpec::category("blizzard"), ParameterError);
  CHECK(NoiseSpec::category_names().size() == 6);
}
