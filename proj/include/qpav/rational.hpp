#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "qpav/errors.hpp"

namespace qpav {

/// Exact arbitrary-precision rational, used wherever boundary comparisons
/// must be free of floating-point slack (population measures, thresholds,
/// the polyhedron solver).
using Rational = boost::multiprecision::mpq_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Approximation parameter in (0, 1], kept as a small rational so that
/// thresholds like 1/(alpha*k) compare exactly.
struct Alpha {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Alpha() = default;
    Alpha(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d <= 0 || n <= 0 || n > d) throw ValidationError("alpha must be a rational in (0, 1]");
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Rational as_rational() const { return Rational(num, den); }
    bool is_one() const { return num == den; }

    /// Accepts "1", "3/4", or a decimal like "0.75" (decimals parse exactly).
    static Alpha parse(const std::string& text);
};

/// H_j = 1 + 1/2 + ... + 1/j as an exact rational (H_0 = 0).
Rational harmonic_rational(int j);

/// H_j in double precision.
double harmonic(int j);

/// lcm(1, ..., j); the common denominator scale used for exact PAV deltas.
std::int64_t denominator_scale(int j);

}  // namespace qpav
