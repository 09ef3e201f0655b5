#pragma once

namespace seqmine {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace seqmine
