#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace finrad {

/// Arbitrary-precision integers and rationals. Every quantity in this
/// library is exact; nothing is ever rounded to floating point.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders a rational in its reduced form, "p" for integers and "p/q"
/// otherwise. This is the only wire format for rationals.
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p" or "p/q" with optional leading minus. Rejects anything else,
/// including floating-point syntax.
inline Rational parse_rational(const std::string& text) {
    auto fail = [&] {
        throw std::invalid_argument("parse_rational: expected p or p/q, got \"" + text + "\"");
    };
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text)) fail();
        return Rational(Integer(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) fail();
    Integer d(den);
    if (d == 0) throw std::invalid_argument("parse_rational: zero denominator in \"" + text + "\"");
    return Rational(Integer(num), d);
}

}  // namespace finrad
