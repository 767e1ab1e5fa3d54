#include "qpav/rational.hpp"

#include <numeric>

namespace qpav {

Alpha Alpha::parse(const std::string& text) {
    if (text.empty()) throw ValidationError("empty alpha");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::int64_t n = std::stoll(text.substr(0, slash));
            std::int64_t d = std::stoll(text.substr(slash + 1));
            return Alpha(n, d);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            return Alpha(std::stoll(text), 1);
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        std::int64_t num = std::stoll(digits);
        std::int64_t g = std::gcd(num, den);
        return Alpha(num / g, den / g);
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse alpha: " + text);
    }
}

Rational harmonic_rational(int j) {
    Rational h = 0;
    for (int i = 1; i <= j; ++i) h += Rational(1, i);
    return h;
}

double harmonic(int j) {
    double h = 0.0;
    for (int i = 1; i <= j; ++i) h += 1.0 / i;
    return h;
}

std::int64_t denominator_scale(int j) {
    std::int64_t scale = 1;
    for (std::int64_t i = 2; i <= j; ++i) scale = std::lcm(scale, i);
    return scale;
}

}  // namespace qpav
