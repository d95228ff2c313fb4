#pragma once

namespace funcmark {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace funcmark
