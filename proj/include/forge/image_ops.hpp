#pragma once

#include "forge/image.hpp"

namespace forge {

enum class MorphOp { kErode, kDilate };

enum class BinarizeMethod { kOtsu, kFixed };

// Rec. 601 luminance (0.299 R + 0.587 G + 0.114 B). Idempotent: a
// single-channel input is returned unchanged.
Image grayscale(const Image& img);

// Separable Gaussian convolution, symmetric (edge-inclusive) reflection at
// the borders, kernel normalized to sum 1. kernel must be odd and >= 3.
Image gaussian_smooth(const Image& img, double sigma = 1.0, int kernel = 5);

// Min-max rescale to [0, 1]. A constant image maps to all zeros.
Image normalize(const Image& img);

// Min- (erode) or max- (dilate) filter over a kernel x kernel neighborhood
// with symmetric border reflection. Single-channel input only.
Image morphology(const Image& img, MorphOp op, int kernel = 3);

// Threshold to {0, 1}: pixel > t becomes 1. kOtsu picks t maximizing the
// between-class variance over the exact empirical distribution (candidate
// thresholds are midpoints of consecutive distinct values), so the output
// is invariant under positive affine rescaling of the pixel values. Ties
// resolve to the smallest threshold. Single-channel input only.
Image binarize(const Image& img, BinarizeMethod method, float fixed_threshold = 0.5f);

// The Otsu threshold itself (for diagnostics and tests).
float otsu_threshold(const Image& img);

// Mean local SSIM over all fully-interior 8x8 windows, stride 1, with the
// standard constants C1=(0.01)^2, C2=(0.03)^2 on the [0,1] range. Inputs
// must be single-channel and the same size, at least 8x8.
double ssim(const Image& a, const Image& b);

}  // namespace forge
