#include "fqm/rational.hpp"

namespace fqm {

Rational rational_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw ValidationError("invalid rational: '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0)
        throw ValidationError("zero denominator in rational: '" + s + "'");
    return q;
}

std::string rational_to_string(const Rational& r) {
    return r.get_str();
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

long to_long_checked(const Integer& z, const char* what) {
    if (!z.fits_slong_p())
        throw SizeLimitError(std::string(what) + " does not fit in a machine word");
    return z.get_si();
}

QmodZ::QmodZ(long num, long den) {
    if (den == 0) throw ValidationError("QmodZ with zero denominator");
    v_ = Rational(num, den);
    v_.canonicalize();
    reduce();
}

void QmodZ::reduce() {
    v_.canonicalize();  // inputs may arrive as raw num/den pairs
    if (v_.get_den() == 0) throw ValidationError("QmodZ with zero denominator");
    // representative in [0,1): subtract floor(num/den)
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    v_ -= Rational(fl);
}

std::string to_string(const QmodZ& x) {
    return x.representative().get_str();
}

} // namespace fqm
