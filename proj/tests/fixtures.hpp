// Hand-checked fixtures shared by the unit and acceptance tests.
#pragma once

#include <vector>

#include "rambp/pixel_classifier.hpp"
#include "support.hpp"

namespace fixtures {

// Sorted 5x5 neighborhood of the detection walk-through; center value 202.
inline const std::vector<std::uint8_t> kDetectionValues = {0,   0,   0,   0,   0,   0,   39,  47,  50,
                                                           62,  72,  81,  165, 179, 202, 205, 224, 245,
                                                           255, 255, 255, 255, 255, 255, 255};

// Those 25 values laid out with the inner 3x3 holding
// {0,0,0,165,202,224,245,255,255} around the center.
inline rambp::GrayImage detection_window() {
  return testing::from_rows({{0, 39, 47, 50, 62},
                             {72, 0, 0, 255, 81},
                             {179, 165, 202, 224, 205},
                             {255, 0, 245, 255, 255},
                             {0, 0, 255, 255, 255}});
}

// Threshold walk-through: 3 clean pixels in the 3x3 window, 14 in the 5x5
// one, embedded at (4,4) of a 9x9 clean gray image.
struct ThresholdCase {
  rambp::GrayImage img{9, 9, 128};
  rambp::CorruptionMask mask{9, 9, 1};
};

inline ThresholdCase threshold_case() {
  const int values[5][5] = {{255, 47, 255, 50, 0},
                            {0, 72, 255, 0, 0},
                            {224, 255, 255, 0, 255},
                            {62, 179, 0, 255, 0},
                            {255, 255, 0, 255, 0}};
  const int clean[5][5] = {{1, 1, 1, 1, 0},
                           {1, 1, 0, 0, 1},
                           {1, 0, 0, 1, 0},
                           {1, 1, 0, 0, 1},
                           {1, 1, 0, 0, 0}};
  ThresholdCase f;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      f.img.set(r + 2, c + 2, static_cast<std::uint8_t>(values[r][c]));
      f.mask.set(r + 2, c + 2, clean[r][c] == 1);
    }
  return f;
}

}  // namespace fixtures
