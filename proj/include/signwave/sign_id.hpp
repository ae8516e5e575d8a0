#pragma once

#include <string>

namespace signwave {

// Signs are identified by name so new ones can be enrolled without code
// changes; the three below are the built-in marshalling set.
using SignId = std::string;

inline const SignId kSignAttentionGained = "AttentionGained";
inline const SignId kSignYes = "Yes";
inline const SignId kSignNo = "No";

}  // namespace signwave
