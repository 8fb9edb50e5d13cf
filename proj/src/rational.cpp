#include "llmrisk/rational.hpp"

#include "llmrisk/error.hpp"

#include <charconv>
#include <numeric>

namespace llmrisk {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw Error(ErrorCode::Domain, "rational overflow");
    }
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw Error(ErrorCode::Domain, "rational overflow");
    }
    return out;
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw Error(ErrorCode::Parse, "not a number: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw Error(ErrorCode::Domain, "rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::operator+(const Rational& rhs) const {
    const std::int64_t g = std::gcd(den_, rhs.den_);
    const std::int64_t lhs_scale = rhs.den_ / g;
    const std::int64_t rhs_scale = den_ / g;
    return {checked_add(checked_mul(num_, lhs_scale), checked_mul(rhs.num_, rhs_scale)),
            checked_mul(den_, lhs_scale)};
}

Rational Rational::operator-(const Rational& rhs) const { return *this + (-rhs); }

Rational Rational::operator-() const {
    Rational out;
    out.num_ = checked_mul(num_, -1);
    out.den_ = den_;
    return out;
}

Rational Rational::operator*(const Rational& rhs) const {
    // Cross-reduce first to keep intermediates small.
    const std::int64_t g1 = std::gcd(num_, rhs.den_);
    const std::int64_t g2 = std::gcd(rhs.num_, den_);
    const std::int64_t a = g1 == 0 ? num_ : num_ / g1;
    const std::int64_t d = g1 == 0 ? rhs.den_ : rhs.den_ / g1;
    const std::int64_t c = g2 == 0 ? rhs.num_ : rhs.num_ / g2;
    const std::int64_t b = g2 == 0 ? den_ : den_ / g2;
    return {checked_mul(a, c), checked_mul(b, d)};
}

Rational Rational::operator/(const Rational& rhs) const {
    if (rhs.num_ == 0) {
        throw Error(ErrorCode::Domain, "division by zero");
    }
    return *this * Rational(rhs.den_, rhs.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // Denominators are positive, so cross-multiplication preserves order.
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool Rational::has_terminating_decimal() const noexcept {
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

std::string Rational::to_string() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    if (!has_terminating_decimal()) {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    // Long division; terminates because den only has factors 2 and 5.
    const bool negative = num_ < 0;
    unsigned __int128 n = negative ? static_cast<unsigned __int128>(-static_cast<__int128>(num_))
                                   : static_cast<unsigned __int128>(num_);
    const auto d = static_cast<unsigned __int128>(den_);
    std::string out = negative ? "-" : "";
    out += std::to_string(static_cast<std::uint64_t>(n / d));
    out += '.';
    n %= d;
    while (n != 0) {
        n *= 10;
        out += static_cast<char>('0' + static_cast<int>(n / d));
        n %= d;
    }
    return out;
}

std::string Rational::to_display(int places) const {
    if (has_terminating_decimal()) {
        const std::string exact = to_string();
        const auto dot = exact.find('.');
        if (dot == std::string::npos || static_cast<int>(exact.size() - dot - 1) <= places) {
            return exact;
        }
    }
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const bool negative = num_ < 0;
    __int128 n = negative ? -static_cast<__int128>(num_) : num_;
    __int128 scaled = (n * scale * 2 + den_) / (2 * static_cast<__int128>(den_));
    auto whole = static_cast<std::uint64_t>(scaled / scale);
    auto frac = static_cast<std::uint64_t>(scaled % scale);
    std::string out = (negative && scaled != 0) ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, static_cast<std::size_t>(places) - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += '.' + digits;
    }
    return out;
}

Rational Rational::parse(std::string_view text) {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return {parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text)};
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return {parse_int(text, text)};
    }
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18 || frac.find_first_not_of("0123456789") != std::string_view::npos) {
        throw Error(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
    }
    const bool negative = !whole.empty() && whole.front() == '-';
    if (negative || (!whole.empty() && whole.front() == '+')) {
        whole.remove_prefix(1);
    }
    const std::int64_t int_part = whole.empty() ? 0 : parse_int(whole, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale = checked_mul(scale, 10);
    const std::int64_t frac_part = parse_int(frac, text);
    const std::int64_t magnitude = checked_add(checked_mul(int_part, scale), frac_part);
    return {negative ? -magnitude : magnitude, scale};
}

}  // namespace llmrisk
