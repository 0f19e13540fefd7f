#ifndef STK_RATIONAL_HPP
#define STK_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "stk/errors.hpp"

namespace stk {

// Exact rational arithmetic for all model-level checks. Arbitrary precision:
// leaf probabilities are products of p stage parameters with denominators
// near 10^9, so fixed-width types overflow already at p = 3.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "num/den" or a bare integer.
inline Rat rat_from_string(std::string_view s) {
    BigInt num, den = 1;
    try {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) {
            num = BigInt(std::string(s));
        } else {
            num = BigInt(std::string(s.substr(0, slash)));
            den = BigInt(std::string(s.substr(slash + 1)));
        }
    } catch (const std::exception&) {
        throw ParseError("not a rational: '" + std::string(s) + "'");
    }
    if (den == 0) throw ParseError("rational with zero denominator: " + std::string(s));
    return Rat(num, den);
}

inline double rat_to_double(const Rat& r) {
    return r.convert_to<double>();
}

}  // namespace stk

#endif
