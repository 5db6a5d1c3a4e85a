#include "bethe/scalar.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>

namespace bethe {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("empty rational literal");

    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!is_integer_token(num) || !is_integer_token(den))
        throw ConfigError("malformed rational literal: '" + text + "'");

    using Integer = boost::multiprecision::mpz_int;
    Integer p(num), q(den);
    if (q == 0) throw ConfigError("zero denominator in rational literal: '" + text + "'");
    // Division canonicalizes: lowest terms, positive denominator.
    return Rational(p) / Rational(q);
}

std::string format_rational(const Rational& value) {
    std::string num = numerator(value).str();
    if (denominator(value) == 1) return num;
    return num + "/" + denominator(value).str();
}

Complex to_complex(const Rational& value) {
    return Complex(value.convert_to<double>(), 0.0);
}

std::string FieldTraits<Complex>::to_string(const Complex& v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

} // namespace bethe
