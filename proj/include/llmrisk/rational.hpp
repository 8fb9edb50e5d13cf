#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace llmrisk {

/// Exact rational number with a normalized 64-bit numerator/denominator.
///
/// All score arithmetic goes through this type so that, for example, the
/// mean of {6,4,7,6,9,5,9,8} is exactly 27/4 and renders as "6.75".
/// Overflow in any operation throws llmrisk::Error(Domain) instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by intent
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_integer() const noexcept { return den_ == 1; }
    bool is_zero() const noexcept { return num_ == 0; }

    Rational operator+(const Rational& rhs) const;
    Rational operator-(const Rational& rhs) const;
    Rational operator*(const Rational& rhs) const;
    Rational operator/(const Rational& rhs) const;
    Rational operator-() const;

    Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }
    Rational& operator-=(const Rational& rhs) { return *this = *this - rhs; }
    Rational& operator*=(const Rational& rhs) { return *this = *this * rhs; }
    Rational& operator/=(const Rational& rhs) { return *this = *this / rhs; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    // True when the value has a finite decimal expansion (den = 2^a * 5^b).
    bool has_terminating_decimal() const noexcept;

    // Shortest exact decimal ("6.75", "3", "-0.5"). For non-terminating values
    // falls back to the "p/q" fraction so the text always parses back exactly.
    std::string to_string() const;

    // Decimal rounded half-away-from-zero to `places`, trailing zeros trimmed.
    // Used only for human-facing output.
    std::string to_display(int places = 4) const;

    // Accepts "7", "-3", "6.75", "27/4".
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace llmrisk
