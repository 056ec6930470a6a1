#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "fqm/errors.hpp"

namespace fqm {

// Exact rationals. mpq_class keeps gcd(num,den) = 1 and den > 0 canonically.
using Rational = mpq_class;
using Integer = mpz_class;

Rational rational_from_string(const std::string& s);
std::string rational_to_string(const Rational& r);

Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);
long to_long_checked(const Integer& z, const char* what);

// An element of Q/Z, stored as its representative in [0, 1).
class QmodZ {
public:
    QmodZ() : v_(0) {}
    explicit QmodZ(const Rational& r) : v_(r) { reduce(); }
    QmodZ(long num, long den);

    const Rational& representative() const { return v_; }
    Integer denominator() const { return v_.get_den(); }
    bool is_zero() const { return v_ == 0; }

    QmodZ operator+(const QmodZ& o) const { return QmodZ(v_ + o.v_); }
    QmodZ operator-(const QmodZ& o) const { return QmodZ(v_ - o.v_); }
    QmodZ operator-() const { return QmodZ(-v_); }
    // a * x for integer a
    QmodZ scaled(const Integer& a) const { return QmodZ(Rational(a) * v_); }

    bool operator==(const QmodZ& o) const { return v_ == o.v_; }
    bool operator!=(const QmodZ& o) const { return v_ != o.v_; }

private:
    void reduce();
    Rational v_;
};

std::string to_string(const QmodZ& x);

} // namespace fqm
