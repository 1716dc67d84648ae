#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bianchi {

// Presentation files compiled into the library, keyed by D.
const std::vector<std::pair<long, std::string>>& builtin_presentation_texts();

}  // namespace bianchi
