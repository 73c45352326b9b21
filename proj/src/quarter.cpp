#include "panelcurve/quarter.hpp"

#include <charconv>
#include <cstdio>

#include "panelcurve/errors.hpp"

namespace panelcurve {

Quarter Quarter::parse(std::string_view text) {
    // Expected form YYYYQn with n in 1..4. Years may have any digit count.
    auto qpos = text.find_first_of("Qq");
    if (qpos == std::string_view::npos || qpos == 0 || qpos + 2 != text.size())
        throw DataError("unparseable period '" + std::string(text) + "' (expected YYYYQn)");

    int year = 0;
    auto [yp, yec] = std::from_chars(text.data(), text.data() + qpos, year);
    if (yec != std::errc{} || yp != text.data() + qpos)
        throw DataError("unparseable period '" + std::string(text) + "' (bad year)");

    int q = text[qpos + 1] - '0';
    if (q < 1 || q > 4)
        throw DataError("unparseable period '" + std::string(text) + "' (quarter must be 1..4)");

    return Quarter{year, q};
}

std::string Quarter::str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%dQ%d", year, quarter);
    return buf;
}

Quarter Quarter::from_index(long index) {
    long year = index >= 0 ? index / 4 : (index - 3) / 4; // floor division
    return Quarter{static_cast<int>(year), static_cast<int>(index - year * 4) + 1};
}

Quarter Quarter::next() const {
    return quarter == 4 ? Quarter{year + 1, 1} : Quarter{year, quarter + 1};
}

} // namespace panelcurve
