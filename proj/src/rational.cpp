#include "torifact/rational.hpp"

#include <sstream>

namespace torifact {

Rat parse_rat(const std::string& s) {
    if (s.empty()) fail(ErrorKind::ValidationError, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) fail(ErrorKind::ValidationError, "zero denominator in '" + s + "'");
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        fail(ErrorKind::ValidationError, "malformed rational literal '" + s + "'");
    }
}

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << rat_num(r);
    if (rat_den(r) != 1) os << '/' << rat_den(r);
    return os.str();
}

std::string rat_to_decimal(const Rat& r, int digits) {
    Int p = rat_num(r), q = rat_den(r);
    std::ostringstream os;
    if (p < 0) {
        os << '-';
        p = -p;
    }
    os << (p / q);
    Int rem = p % q;
    if (rem != 0 && digits > 0) {
        os << '.';
        for (int i = 0; i < digits && rem != 0; ++i) {
            rem *= 10;
            os << (rem / q);
            rem %= q;
        }
    }
    return os.str();
}

std::string zvec_to_string(const ZVec& v) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    os << ')';
    return os.str();
}

std::string qvec_to_string(const QVec& v) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << rat_to_string(v[i]);
    }
    os << ')';
    return os.str();
}

} // namespace torifact
