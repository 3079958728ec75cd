#pragma once

#include "fastpath/codec.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fastpath {

// Exact signed rational amount in the smallest currency denomination.
// All budget arithmetic goes through this type; nothing is ever rounded,
// so equality checks against paper-derived values are exact.
class Quantity {
public:
    using rational = boost::multiprecision::cpp_rational;

    Quantity() = default;
    Quantity(std::int64_t v) : value_(v) {} // NOLINT: implicit by design
    Quantity(std::int64_t num, std::int64_t den);
    explicit Quantity(rational v) : value_(std::move(v)) {}

    // Parses "-5", "9", or "2000/3".
    static Quantity parse(const std::string& text);

    Quantity operator+(const Quantity& o) const { return Quantity(value_ + o.value_); }
    Quantity operator-(const Quantity& o) const { return Quantity(value_ - o.value_); }
    Quantity operator*(const Quantity& o) const { return Quantity(value_ * o.value_); }
    Quantity operator/(const Quantity& o) const;
    Quantity operator-() const { return Quantity(-value_); }
    Quantity& operator+=(const Quantity& o) { value_ += o.value_; return *this; }
    Quantity& operator-=(const Quantity& o) { value_ -= o.value_; return *this; }

    bool operator==(const Quantity& o) const { return value_ == o.value_; }
    auto operator<=>(const Quantity& o) const {
        return value_ < o.value_   ? std::strong_ordering::less
               : value_ > o.value_ ? std::strong_ordering::greater
                                   : std::strong_ordering::equal;
    }

    bool is_negative() const { return value_ < 0; }
    bool is_zero() const { return value_ == 0; }

    const rational& raw() const { return value_; }
    std::string to_string() const;

    void encode(Encoder& enc) const;
    static Quantity decode(Decoder& dec);

private:
    rational value_ = 0;
};

} // namespace fastpath
