#include "fastpath/quantity.hpp"

#include <stdexcept>

namespace fastpath {

namespace mp = boost::multiprecision;

Quantity::Quantity(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    value_ = rational(mp::cpp_int(num), mp::cpp_int(den));
}

Quantity Quantity::parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Quantity(rational(mp::cpp_int(text)));
    mp::cpp_int num(text.substr(0, slash));
    mp::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Quantity(rational(num, den));
}

Quantity Quantity::operator/(const Quantity& o) const {
    if (o.is_zero()) throw std::invalid_argument("division by zero");
    return Quantity(value_ / o.value_);
}

std::string Quantity::to_string() const {
    mp::cpp_int num = numerator(value_);
    mp::cpp_int den = denominator(value_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace {
void encode_int(Encoder& enc, const mp::cpp_int& v) {
    enc.u8(v < 0 ? 1 : 0);
    std::vector<std::uint8_t> mag;
    export_bits(mp::cpp_int(abs(v)), std::back_inserter(mag), 8);
    enc.bytes(mag);
}

mp::cpp_int decode_int(Decoder& dec) {
    bool neg = dec.u8() != 0;
    auto mag = dec.bytes();
    mp::cpp_int v = 0;
    if (!mag.empty()) import_bits(v, mag.begin(), mag.end(), 8);
    return neg ? -v : v;
}
} // namespace

void Quantity::encode(Encoder& enc) const {
    encode_int(enc, numerator(value_));
    encode_int(enc, denominator(value_));
}

Quantity Quantity::decode(Decoder& dec) {
    mp::cpp_int num = decode_int(dec);
    mp::cpp_int den = decode_int(dec);
    if (den <= 0) throw DecodeError("bad rational denominator");
    return Quantity(rational(num, den));
}

} // namespace fastpath
