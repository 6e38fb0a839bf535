#include "assemblynet/rational.hpp"

#include <charconv>
#include <cstdlib>

#include "assemblynet/errors.hpp"

namespace assemblynet {

namespace {

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(Errc::parse_error, "invalid integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace

Ratio parse_ratio(std::string_view text) {
    if (text.empty())
        throw Error(Errc::parse_error, "empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = parse_int(text.substr(0, slash));
        std::int64_t den = parse_int(text.substr(slash + 1));
        if (den == 0)
            throw Error(Errc::parse_error, "zero denominator");
        return Ratio(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 15)
            throw Error(Errc::parse_error, "invalid decimal: '" + std::string(text) + "'");
        bool negative = !whole.empty() && whole.front() == '-';
        std::int64_t whole_v = whole.empty() || whole == "-" ? 0 : parse_int(whole);
        std::int64_t frac_v = parse_int(frac);
        if (frac_v < 0)
            throw Error(Errc::parse_error, "invalid decimal: '" + std::string(text) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        std::int64_t num = std::llabs(whole_v) * scale + frac_v;
        if (negative || whole_v < 0) num = -num;
        return Ratio(num, scale);
    }
    return Ratio(parse_int(text));
}

std::string format_ratio(const Ratio& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t ceil_ratio(const Ratio& r) {
    return (r.numerator() + r.denominator() - 1) / r.denominator();
}

}  // namespace assemblynet
