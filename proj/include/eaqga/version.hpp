#pragma once

namespace eaqga {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eaqga
