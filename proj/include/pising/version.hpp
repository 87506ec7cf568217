#pragma once

namespace pising {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pising
