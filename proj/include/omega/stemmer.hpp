#pragma once

#include <string>
#include <string_view>

namespace omega::metrics {

/// Porter's 1980 suffix-stripping stemmer, as published (no departures for
/// short words). Expects a lowercase ASCII word; other input is returned as-is.
std::string porter_stem(std::string_view word);

}  // namespace omega::metrics
