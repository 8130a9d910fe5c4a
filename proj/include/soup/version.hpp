#pragma once

namespace soup {

inline constexpr char kVersion[] = "0.1.0";

}  // namespace soup
