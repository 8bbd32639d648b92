#include "curvelab/numeric.hpp"

#include <limits>

namespace curvelab {

Integer floor_of(const Rational& r) {
    Integer n = boost::multiprecision::numerator(r);
    Integer d = boost::multiprecision::denominator(r);
    Integer q = n / d;
    if (n % d != 0 && n.sign() < 0) q -= 1;
    return q;
}

Rational frac_part(const Rational& r) { return r - Rational(floor_of(r)); }

Vec2 reduce_mod1(const Vec2& p) { return {frac_part(p.x), frac_part(p.y)}; }

Vec2 floor_vec(const Vec2& p) { return {Rational(floor_of(p.x)), Rational(floor_of(p.y))}; }

std::string format_rational(const Rational& r) {
    const Integer& d = boost::multiprecision::denominator(r);
    if (d == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + d.str();
}

Integer parse_integer(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = text.size();
    while (j > i && (text[j - 1] == ' ' || text[j - 1] == '\t' || text[j - 1] == '\r')) --j;
    std::string_view t = text.substr(i, j - i);
    if (t.empty()) throw Error("parse", "empty integer");
    std::size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (k == t.size()) throw Error("parse", std::string(t));
    for (std::size_t m = k; m < t.size(); ++m)
        if (t[m] < '0' || t[m] > '9') throw Error("parse", "not an integer: " + std::string(t));
    Integer v(std::string(t.substr(k)));
    return t[0] == '-' ? Integer(-v) : v;
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error("parse", "zero denominator in " + std::string(text));
    return Rational(num, den);
}

std::int64_t to_i64(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error("overflow", v.str());
    return v.convert_to<std::int64_t>();
}

Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
    Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

}  // namespace curvelab
