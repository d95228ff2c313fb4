#pragma once

#include <cstdint>

namespace funcmark::detail {

// Standard 256-case marching cubes tables. Corner numbering:
//   0:(0,0,0) 1:(1,0,0) 2:(1,0,1) 3:(0,0,1)
//   4:(0,1,0) 5:(1,1,0) 6:(1,1,1) 7:(0,1,1)
// Edge e is between corners kEdgeCorners[e][0] and [1].
extern const uint16_t kEdgeTable[256];
extern const int8_t kTriTable[256][16];

inline constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1},
    {0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1},
};

inline constexpr int kEdgeCorners[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0},
    {4, 5}, {5, 6}, {6, 7}, {7, 4},
    {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

}  // namespace funcmark::detail
