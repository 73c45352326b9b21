#pragma once

namespace panelcurve {

inline constexpr const char* kVersion = "1.0.0";

} // namespace panelcurve
