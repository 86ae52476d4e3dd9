#include "vulmatch/lcs.hpp"

namespace vulmatch {

namespace {

// table[i][j] = LCS length of a[i..] and b[j..]
std::vector<std::vector<int>> suffix_table(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::vector<int>> table(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            if (a[i] == b[j]) {
                table[i][j] = table[i + 1][j + 1] + 1;
            } else {
                table[i][j] = std::max(table[i + 1][j], table[i][j + 1]);
            }
        }
    }
    return table;
}

} // namespace

int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) {
        return 0;
    }
    // Rolling single-row DP; only the length is needed.
    std::vector<int> row(b.size() + 1, 0);
    for (std::size_t i = a.size(); i-- > 0;) {
        int diag = 0;  // table[i+1][j+1] from the previous row
        for (std::size_t j = b.size(); j-- > 0;) {
            const int below = row[j];  // table[i+1][j]
            if (a[i] == b[j]) {
                row[j] = diag + 1;
            } else {
                row[j] = std::max(below, row[j + 1]);
            }
            diag = below;
        }
    }
    return row[0];
}

std::vector<std::pair<int, int>> lcs_align(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
    std::vector<std::pair<int, int>> alignment;
    if (a.empty() || b.empty()) {
        return alignment;
    }
    const auto table = suffix_table(a, b);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j] && table[i][j] == table[i + 1][j + 1] + 1) {
            alignment.emplace_back(static_cast<int>(i), static_cast<int>(j));
            ++i;
            ++j;
        } else if (table[i][j + 1] == table[i][j]) {
            // Advancing b first keeps the next pair's a-index as small as
            // possible, which makes the alignment lexicographically
            // earliest.
            ++j;
        } else {
            ++i;
        }
    }
    return alignment;
}

} // namespace vulmatch
