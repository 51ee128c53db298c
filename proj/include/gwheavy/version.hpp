#pragma once

namespace gw {

constexpr const char* kVersion = "gwheavy 0.1.0";

}  // namespace gw
