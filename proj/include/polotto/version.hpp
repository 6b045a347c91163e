#pragma once

namespace polotto {

inline constexpr const char* version = "0.1.0";

}  // namespace polotto
