#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace psp {

/// Fixed-point monetary amount: whole cents plus an ISO-4217-style currency
/// code. All arithmetic is exact; mixing currencies throws ValidationError.
class Money {
public:
    Money() = default;
    Money(std::int64_t cents, std::string currency);

    /// Parses "1234", "1234.5" or "1234.56" (at most two fraction digits,
    /// optional leading '-'). Throws ParseError on anything else.
    static Money parse(std::string_view amount, std::string_view currency);

    std::int64_t cents() const { return cents_; }
    const std::string& currency() const { return currency_; }

    Money operator+(const Money& rhs) const;
    Money operator-(const Money& rhs) const;

    /// Exact multiplication by a unit count.
    Money scaled_by(std::int64_t count) const;

    /// Drops the fractional part: 145286.67 -> 145286.00.
    Money floor_to_whole() const;

    bool same_currency(const Money& rhs) const { return currency_ == rhs.currency_; }

    /// "506160.00 EUR"
    std::string str() const;
    /// "506160.00" (no currency code)
    std::string amount_str() const;

    bool operator==(const Money& rhs) const;
    std::strong_ordering operator<=>(const Money& rhs) const;  // throws on currency mismatch

private:
    void require_same(const Money& rhs) const;

    std::int64_t cents_ = 0;
    std::string currency_;
};

}  // namespace psp
