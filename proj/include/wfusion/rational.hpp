#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace wfusion {

using Rational = boost::rational<std::int64_t>;

/// "p/q" text, always with an explicit denominator.
inline std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

}  // namespace wfusion
