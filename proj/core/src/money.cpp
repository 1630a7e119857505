#include "psp/money.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "psp/errors.hpp"

namespace psp {

namespace {

bool valid_currency(std::string_view code) {
    if (code.size() != 3) return false;
    for (char c : code)
        if (c < 'A' || c > 'Z') return false;
    return true;
}

}  // namespace

Money::Money(std::int64_t cents, std::string currency)
    : cents_(cents), currency_(std::move(currency)) {
    if (!valid_currency(currency_))
        throw ValidationError("invalid currency code '" + currency_ + "'");
}

Money Money::parse(std::string_view amount, std::string_view currency) {
    std::string_view s = amount;
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    if (s.empty()) throw ParseError("empty monetary amount");

    std::int64_t whole = 0, frac = 0;
    std::size_t i = 0;
    bool saw_digit = false;
    for (; i < s.size() && s[i] != '.'; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("invalid monetary amount '" + std::string(amount) + "'");
        whole = whole * 10 + (s[i] - '0');
        saw_digit = true;
    }
    if (!saw_digit) throw ParseError("invalid monetary amount '" + std::string(amount) + "'");
    if (i < s.size()) {  // fraction
        ++i;
        const std::size_t frac_digits = s.size() - i;
        if (frac_digits < 1 || frac_digits > 2)
            throw ParseError("monetary amount '" + std::string(amount) +
                             "' must have one or two fraction digits");
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw ParseError("invalid monetary amount '" + std::string(amount) + "'");
            frac = frac * 10 + (s[i] - '0');
        }
        if (frac_digits == 1) frac *= 10;
    }
    std::int64_t cents = whole * 100 + frac;
    return Money(negative ? -cents : cents, std::string(currency));
}

void Money::require_same(const Money& rhs) const {
    if (!same_currency(rhs))
        throw ValidationError("currency mismatch: " + currency_ + " vs " + rhs.currency_);
}

Money Money::operator+(const Money& rhs) const {
    require_same(rhs);
    return Money(cents_ + rhs.cents_, currency_);
}

Money Money::operator-(const Money& rhs) const {
    require_same(rhs);
    return Money(cents_ - rhs.cents_, currency_);
}

Money Money::scaled_by(std::int64_t count) const {
    return Money(cents_ * count, currency_);
}

Money Money::floor_to_whole() const {
    std::int64_t whole = cents_ / 100;
    if (cents_ < 0 && cents_ % 100 != 0) --whole;
    return Money(whole * 100, currency_);
}

std::string Money::amount_str() const {
    const std::int64_t abs = cents_ < 0 ? -cents_ : cents_;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", cents_ < 0 ? "-" : "",
                  static_cast<long long>(abs / 100), static_cast<long long>(abs % 100));
    return buf;
}

std::string Money::str() const { return amount_str() + " " + currency_; }

bool Money::operator==(const Money& rhs) const {
    return currency_ == rhs.currency_ && cents_ == rhs.cents_;
}

std::strong_ordering Money::operator<=>(const Money& rhs) const {
    require_same(rhs);
    return cents_ <=> rhs.cents_;
}

}  // namespace psp
