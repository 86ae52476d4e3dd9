#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vulmatch {

int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Lexicographically earliest optimal alignment as (index in a, index in b)
// pairs, both ascending.
std::vector<std::pair<int, int>> lcs_align(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b);

} // namespace vulmatch
