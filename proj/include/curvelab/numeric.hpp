#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvelab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base class for every error raised by the library. `code()` is a short
/// machine-readable tag ("not a curve class", "inessential", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail.empty() ? code : code + ": " + detail), code_(std::move(code)) {}
    explicit Error(std::string code) : Error(std::move(code), "") {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct Vec2 {
    Rational x;
    Rational y;

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(const Rational& s, const Vec2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    }
};

inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Signed doubled area of (a, b, c); positive when counterclockwise.
inline Rational orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

inline int sign(const Rational& r) { return r.sign(); }
inline int sign(const Integer& i) { return i.sign(); }

Integer floor_of(const Rational& r);
Rational frac_part(const Rational& r);
/// Reduces a point of the plane into the fundamental square [0,1)^2.
Vec2 reduce_mod1(const Vec2& p);
/// Integer translation t with p - t in [0,1)^2.
Vec2 floor_vec(const Vec2& p);

/// "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& r);
/// Accepts "p/q" or "p"; throws Error("parse") on malformed input.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

std::int64_t to_i64(const Integer& v);

/// Extended Euclid: returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y);

}  // namespace curvelab
