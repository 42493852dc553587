#include "nearcurve/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace nearcurve {

BigRat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return BigRat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return BigRat(BigInt(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (head.empty() || head == "-" || head == "+") head += "0";
    BigInt ip(head);
    BigInt frac = tail.empty() ? BigInt(0) : BigInt(tail);
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigRat r = BigRat(ip) + (neg ? -BigRat(frac, scale) : BigRat(frac, scale));
    return r;
}

BigRat rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite");
    if (x == 0.0) return BigRat(0);
    int exp;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    BigInt num = BigInt(static_cast<long long>(std::ldexp(m, 53)));
    exp -= 53;
    if (exp >= 0) return BigRat(num << exp);
    BigInt den = BigInt(1) << (-exp);
    return BigRat(num, den);
}

double to_double(const BigRat& r) {
    return r.convert_to<double>();
}

BigInt rat_floor(const BigRat& r) {
    BigInt num = numerator(r), den = denominator(r);  // den > 0 canonical
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

}  // namespace nearcurve
