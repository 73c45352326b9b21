#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace panelcurve {

/// Calendar quarter, e.g. "1980Q1". Periods are (year, quarter) pairs; there
/// is no finer calendar resolution anywhere in the library.
struct Quarter {
    int year = 0;
    int quarter = 1; // 1..4

    static Quarter parse(std::string_view text); // throws DataError
    std::string str() const;

    // Total quarter count; adjacent quarters differ by exactly 1.
    long index() const { return static_cast<long>(year) * 4 + (quarter - 1); }
    static Quarter from_index(long index);
    Quarter next() const;

    auto operator<=>(const Quarter&) const = default;
};

} // namespace panelcurve
