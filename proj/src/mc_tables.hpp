#pragma once

namespace boot3d::detail {

extern const int kEdgeTable[256];
extern const signed char kTriTable[256][16];
extern const signed char kTriTableAlt[256][16];
extern const bool kCaseAmbiguous[256];

}  // namespace boot3d::detail
