#include "fqm/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "fqm/numth.hpp"

namespace fqm {

namespace {

using ZPoly = std::vector<Integer>;  // coefficient list, index = degree

// exact division of integer polynomials, remainder must vanish
ZPoly poly_div_exact(const ZPoly& num, const ZPoly& den) {
    ZPoly r = num;
    long dn = (long)r.size() - 1, dd = (long)den.size() - 1;
    ZPoly q(dn - dd + 1, Integer(0));
    for (long k = dn - dd; k >= 0; --k) {
        // den is monic up to sign of its leading coefficient
        Integer c = r[k + dd] / den[dd];
        q[k] = c;
        if (c != 0)
            for (long j = 0; j <= dd; ++j) r[k + j] -= c * den[j];
    }
    for (const auto& c : r)
        if (c != 0) throw ComputationError("cyclotomic polynomial division not exact");
    return q;
}

ZPoly cyclotomic_poly(long n, std::map<long, ZPoly>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    ZPoly num(n + 1, Integer(0));
    num[0] = -1;
    num[n] = 1;
    for (long d = 1; d < n; ++d)
        if (n % d == 0) num = poly_div_exact(num, cyclotomic_poly(d, memo));
    memo.emplace(n, num);
    return num;
}

const CycField& cyc_field_impl(long order) {
    static std::mutex mtx;
    static std::map<long, CycField> cache;
    static std::map<long, ZPoly> poly_memo;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    if (order < 1) throw ValidationError("cyclotomic order must be positive");
    CycField f;
    f.order = order;
    f.degree = euler_phi(order);
    ZPoly phi = cyclotomic_poly(order, poly_memo);
    // rows: x^k mod Phi for k = degree .. order-1, built by repeated shift
    std::vector<Integer> cur(f.degree, Integer(0));  // x^{degree} mod Phi = -lower part
    for (long j = 0; j < f.degree; ++j) cur[j] = -phi[j];
    f.reduce_row.reserve(order - f.degree);
    for (long k = f.degree; k < order; ++k) {
        f.reduce_row.push_back(cur);
        if (k + 1 == order) break;
        // multiply by x: shift, then reduce the overflowing top coefficient
        Integer top = cur[f.degree - 1];
        for (long j = f.degree - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top != 0)
            for (long j = 0; j < f.degree; ++j) cur[j] += top * -phi[j];
    }
    return cache.emplace(order, std::move(f)).first->second;
}

} // namespace

const CycField& cyc_field(long order) { return cyc_field_impl(order); }

CycNum CycNum::zero(long order) {
    const CycField& f = cyc_field(order);
    return CycNum(order, std::vector<Rational>(f.degree, Rational(0)));
}

CycNum CycNum::one(long order) {
    CycNum r = zero(order);
    r.c_[0] = 1;
    return r;
}

CycNum CycNum::reduce_buffer(std::vector<Rational> buf, long order) {
    const CycField& f = cyc_field(order);
    if ((long)buf.size() < f.degree) buf.resize(f.degree, Rational(0));
    // fold exponents >= order via zeta^order = 1, then rewrite rows, top down
    for (long k = (long)buf.size() - 1; k >= f.degree; --k) {
        if (buf[k] == 0) continue;
        Rational c = std::move(buf[k]);
        buf[k] = 0;
        if (k >= order) {
            buf[k - order] += c;
        } else {
            const auto& row = f.reduce_row[k - f.degree];
            for (long j = 0; j < f.degree; ++j)
                if (row[j] != 0) buf[j] += Rational(row[j]) * c;
        }
    }
    buf.resize(f.degree);
    return CycNum(order, std::move(buf));
}

CycNum CycNum::root(long k, long order) {
    k = mod_pos(k, order);
    std::vector<Rational> buf(k + 1, Rational(0));
    buf[k] = 1;
    return reduce_buffer(std::move(buf), order);
}

CycNum CycNum::from_exponent_counts(const std::vector<Integer>& count, long order) {
    std::vector<Rational> buf(count.size(), Rational(0));
    for (size_t i = 0; i < count.size(); ++i)
        if (count[i] != 0) buf[i] = Rational(count[i]);
    return reduce_buffer(std::move(buf), order);
}

bool CycNum::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool CycNum::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

CycNum CycNum::lifted_to(long new_order) const {
    if (new_order == order_) return *this;
    if (new_order % order_ != 0)
        throw ValidationError("cyclotomic lift: target order not a multiple");
    long m = new_order / order_;
    std::vector<Rational> buf((c_.size() - 1) * m + 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) buf[i * m] = c_[i];
    return reduce_buffer(std::move(buf), new_order);
}

CycNum CycNum::conj() const {
    std::vector<Rational> buf(order_, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) buf[(order_ - (long)i) % order_] += c_[i];
    return reduce_buffer(std::move(buf), order_);
}

CycNum CycNum::operator+(const CycNum& o) const {
    long L = lcm_long(order_, o.order_);
    CycNum a = lifted_to(L), b = o.lifted_to(L);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

CycNum& CycNum::operator+=(const CycNum& o) {
    if (o.order_ == order_) {
        for (size_t i = 0; i < c_.size(); ++i)
            if (o.c_[i] != 0) c_[i] += o.c_[i];
        return *this;
    }
    return *this = *this + o;
}

CycNum CycNum::operator-(const CycNum& o) const { return *this + (-o); }

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

CycNum CycNum::operator*(const CycNum& o) const {
    long L = lcm_long(order_, o.order_);
    CycNum ta, tb;
    const CycNum* a = this;
    const CycNum* b = &o;
    if (order_ != L) { ta = lifted_to(L); a = &ta; }
    if (o.order_ != L) { tb = o.lifted_to(L); b = &tb; }
    std::vector<Rational> buf(2 * a->c_.size(), Rational(0));
    for (size_t i = 0; i < a->c_.size(); ++i) {
        if (a->c_[i] == 0) continue;
        for (size_t j = 0; j < b->c_.size(); ++j)
            if (b->c_[j] != 0) buf[i + j] += a->c_[i] * b->c_[j];
    }
    return reduce_buffer(std::move(buf), L);
}

void cyc_fma(CycNum& acc, const CycNum& x, const CycNum& y) {
    if (acc.order_ != x.order_ || acc.order_ != y.order_) {
        acc += x * y;
        return;
    }
    const CycField& f = cyc_field(acc.order_);
    long deg = f.degree;
    static thread_local std::vector<Rational> scratch;
    static thread_local Rational prod;
    if ((long)scratch.size() < 2 * deg) scratch.resize(2 * deg, Rational(0));
    long hi = -1;
    for (long i = 0; i < deg; ++i) {
        if (x.c_[i] == 0) continue;
        for (long j = 0; j < deg; ++j) {
            if (y.c_[j] == 0) continue;
            if (i + j > hi) {
                for (long k = hi + 1; k <= i + j; ++k) scratch[k] = 0;
                hi = i + j;
            }
            prod = x.c_[i] * y.c_[j];
            scratch[i + j] += prod;
        }
    }
    // fold the scratch back below the field degree, top down
    for (long k = hi; k >= deg; --k) {
        if (scratch[k] == 0) continue;
        if (k >= acc.order_) {
            scratch[k - acc.order_] += scratch[k];
        } else {
            const auto& row = f.reduce_row[k - deg];
            for (long j = 0; j < deg; ++j)
                if (row[j] != 0) {
                    prod = Rational(row[j]) * scratch[k];
                    scratch[j] += prod;
                }
        }
        scratch[k] = 0;
    }
    for (long j = 0; j <= std::min(hi, deg - 1); ++j)
        if (scratch[j] != 0) acc.c_[j] += scratch[j];
}

CycNum CycNum::operator*(const Rational& r) const {
    CycNum out = *this;
    for (auto& c : out.c_) c *= r;
    return out;
}

bool CycNum::operator==(const CycNum& o) const {
    long L = lcm_long(order_, o.order_);
    return lifted_to(L).c_ == o.lifted_to(L).c_;
}

std::complex<double> CycNum::to_complex() const {
    // long double accumulation keeps the error well below the 1e-6 sign gates
    long double re = 0, im = 0;
    const long double tau = 6.283185307179586476925286766559L;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        long double v = (long double)c_[i].get_d();
        long double ang = tau * (long double)i / (long double)order_;
        re += v * std::cos(ang);
        im += v * std::sin(ang);
    }
    return {(double)re, (double)im};
}

std::string CycNum::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << c_[i].get_str();
        if (i > 0) os << "*z" << order_ << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

CycNum root_of_unity(const QmodZ& x, long L) {
    Integer den = x.denominator();
    if (L < 1 || Integer(L) % den != 0)
        throw ValidationError("root_of_unity: order " + std::to_string(L) +
                              " is not a multiple of the denominator " + den.get_str());
    Integer k = x.representative().get_num() * (Integer(L) / den);
    return CycNum::root(to_long_checked(k, "root exponent"), L);
}

bool perfect_square(long n, long* root) {
    if (n < 0) return false;
    long r = (long)std::llround(std::sqrt((double)n));
    for (long c = std::max(0L, r - 2); c <= r + 2; ++c)
        if (c * c == n) {
            if (root) *root = c;
            return true;
        }
    return false;
}

ScaledNum::ScaledNum(int k, CycNum value, long base)
    : k_(k), base_(base), value_(std::move(value)) {
    if (base_ < 1) throw ValidationError("ScaledNum base must be positive");
    canonicalize();
}

void ScaledNum::canonicalize() {
    while (k_ >= 2) { value_ = value_ * Rational(1, base_); k_ -= 2; }
    while (k_ < 0)  { value_ = value_ * Rational(base_);    k_ += 2; }
    long s;
    if (k_ == 1 && perfect_square(base_, &s)) {
        value_ = value_ * Rational(1, s);
        k_ = 0;
    }
}

ScaledNum ScaledNum::operator*(const ScaledNum& o) const {
    if (base_ != o.base_) throw ValidationError("ScaledNum bases differ");
    return ScaledNum(k_ + o.k_, value_ * o.value_, base_);
}

bool ScaledNum::operator==(const ScaledNum& o) const {
    if (base_ != o.base_) throw ValidationError("ScaledNum bases differ");
    if (k_ == o.k_) return value_ == o.value_;
    if (value_.is_zero() && o.value_.is_zero()) return true;
    return false;  // differing sqrt parity with nonzero values never compares equal here
}

} // namespace fqm
