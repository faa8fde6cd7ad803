#include "polarlens/common.hpp"

#include <array>
#include <charconv>
#include <fmt/format.h>

namespace polarlens {

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (text[i] < '0' || text[i] > '9') return false;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{};
}

} // namespace

std::optional<Date> parse_date(std::string_view text) {
    using namespace std::chrono;
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d))
        return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.size() < 20 || text[10] != 'T' || text.back() != 'Z') return std::nullopt;
    auto day = parse_date(text.substr(0, 10));
    if (!day) return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (text[13] != ':' || text[16] != ':') return std::nullopt;
    if (!read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mm) || !read_int(text, 17, 2, ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    auto rest = text.substr(19, text.size() - 20);
    if (!rest.empty()) {
        if (rest.front() != '.' || rest.size() < 2) return std::nullopt;
        for (char c : rest.substr(1))
            if (c < '0' || c > '9') return std::nullopt;
    }
    return Timestamp{*day} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_date(Date day) {
    std::chrono::year_month_day ymd{day};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const Date day = day_of(ts);
    hh_mm_ss tod{ts - Timestamp{day}};
    return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_date(day), tod.hours().count(),
                       tod.minutes().count(), tod.seconds().count());
}

std::string_view to_string(Stance s) {
    switch (s) {
    case Stance::pro: return "pro";
    case Stance::anti: return "anti";
    case Stance::undecided: return "undecided";
    }
    return "undecided";
}

std::optional<Stance> parse_stance(std::string_view text) {
    if (text == "pro") return Stance::pro;
    if (text == "anti") return Stance::anti;
    if (text == "undecided") return Stance::undecided;
    return std::nullopt;
}

std::string to_string(Direction d) {
    return fmt::format("{}->{}", to_string(d.source), to_string(d.target));
}

std::optional<Direction> parse_direction(std::string_view text) {
    auto arrow = text.find("->");
    if (arrow == std::string_view::npos) return std::nullopt;
    auto src = parse_stance(text.substr(0, arrow));
    auto dst = parse_stance(text.substr(arrow + 2));
    if (!src || !dst) return std::nullopt;
    return Direction{*src, *dst};
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

} // namespace polarlens
