/// Exact arithmetic primitives: arbitrary-precision integers and rationals,
/// integer/rational vectors, gcd utilities, parsing and printing.
/// No floating point is used anywhere in this project.

#ifndef TORIFACT_RATIONAL_HPP
#define TORIFACT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "torifact/errors.hpp"

namespace torifact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline Int igcd(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Int ilcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
    Int p = rat_num(r), q = rat_den(r); // q > 0 in canonical form
    Int d = p / q;                      // truncates toward zero
    if (p < 0 && d * q != p) d -= 1;
    return d;
}

/// Smallest integer >= r.
inline Int rat_ceil(const Rat& r) {
    Int p = rat_num(r), q = rat_den(r);
    Int d = p / q;
    if (p > 0 && d * q != p) d += 1;
    return d;
}

inline Int gcd_of(const ZVec& v) {
    Int g = 0;
    for (const Int& x : v) g = igcd(g, x);
    return g;
}

inline bool is_zero(const ZVec& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_zero(const QVec& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

/// Divide an integer vector by the gcd of its entries (direction preserved).
inline ZVec make_primitive(ZVec v) {
    Int g = gcd_of(v);
    if (g > 1)
        for (Int& x : v) x /= g;
    return v;
}

/// Clear denominators and reduce: the unique primitive integer vector on the
/// ray through a nonzero rational vector.
inline ZVec primitive_direction(const QVec& v) {
    Int l = 1;
    for (const Rat& x : v) l = ilcm(l == 0 ? 1 : l, rat_den(x));
    ZVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = rat_num(v[i]) * (l / rat_den(v[i]));
    return make_primitive(std::move(out));
}

inline QVec to_qvec(const ZVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

inline Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const ZVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

inline Int dot(const ZVec& a, const ZVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline ZVec add(const ZVec& a, const ZVec& b) {
    ZVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline QVec add(const QVec& a, const QVec& b) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline QVec sub(const QVec& a, const QVec& b) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline QVec scale(const QVec& a, const Rat& k) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * k;
    return out;
}

/// Parse "p", "-p" or "p/q" into an exact rational.
Rat parse_rat(const std::string& s);

/// Render reduced: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

/// Fixed-point decimal rendering with exact integer long division
/// (for SVG coordinates; deterministic, never float).
std::string rat_to_decimal(const Rat& r, int digits);

std::string zvec_to_string(const ZVec& v);
std::string qvec_to_string(const QVec& v);

} // namespace torifact

#endif // TORIFACT_RATIONAL_HPP
