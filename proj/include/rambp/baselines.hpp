#pragma once

#include <cstdint>
#include <string>

#include "rambp/histogram.hpp"
#include "rambp/image.hpp"

namespace rambp {

enum class BaselineKind { lbp, lbp_riu2, mbp };

/// LBP(8,1): bit i set when neighbor i (patch_centers order, radius 1) is
/// >= the center. Replicate-edge padding.
PatternImage lbp_code_image(const GrayImage& img);
FeatureHistogram lbp_descriptor(const GrayImage& img);

/// Rotation-invariant uniform mapping: codes with at most two circular bit
/// transitions map to their popcount, all others to 9.
int riu2_map(std::uint8_t code);
FeatureHistogram lbp_riu2_descriptor(const GrayImage& img);

/// Median binary pattern: the 3x3 block binarized against its own median,
/// neighbors as bits 0..7 (patch_centers order) and the center as bit 8.
PatternImage mbp_code_image(const GrayImage& img);
FeatureHistogram mbp_descriptor(const GrayImage& img);

FeatureHistogram baseline_descriptor(BaselineKind kind, const GrayImage& img);

}  // namespace rambp
