#pragma once

#include <string>
#include <vector>

#include "forge/image.hpp"

namespace forge {

// Bundled bitmap typefaces. All are derived from one embedded 5x7 dot-matrix
// glyph set covering digits, uppercase and lowercase letters:
//   "block" - the base matrix, upscaled
//   "bold"  - thickened strokes (dilated at target scale)
//   "slant" - sheared to the right
extern const std::vector<std::string> kBundledFonts;

bool font_exists(const std::string& font_id);

// True if the embedded glyph set has a bitmap for ch.
bool glyph_exists(char ch);

// Rasterizes one glyph as an alpha mask (single channel, values in [0,1])
// at the requested pixel height, rotated by rotation_deg around its center.
// The canvas is tight around the rotated glyph. Throws ResourceError for an
// unknown font and ContractError for a missing glyph.
Image render_glyph(char ch, const std::string& font_id, int height_px,
                   double rotation_deg);

}  // namespace forge
