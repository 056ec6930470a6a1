#include "fqm/weil.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "fqm/numth.hpp"

namespace fqm {

ScaledMatrix::ScaledMatrix(int k, long base, long rows, long cols,
                           std::vector<CycNum> entries)
    : k_(k), base_(base), rows_(rows), cols_(cols), m_(std::move(entries)) {
    if ((long)m_.size() != rows_ * cols_)
        throw ValidationError("ScaledMatrix: entry count mismatch");
    if (base_ < 1) throw ValidationError("ScaledMatrix: base must be positive");
    canonicalize();
}

ScaledMatrix ScaledMatrix::zero(long rows, long cols, long base) {
    return ScaledMatrix(0, base, rows, cols, std::vector<CycNum>(rows * cols));
}

ScaledMatrix ScaledMatrix::identity(long n, long base) {
    std::vector<CycNum> e(n * n);
    for (long i = 0; i < n; ++i) e[i * n + i] = CycNum(1);
    return ScaledMatrix(0, base, n, n, std::move(e));
}

void ScaledMatrix::canonicalize() {
    auto scale_all = [&](const Rational& f) {
        for (auto& e : m_)
            if (!e.is_zero()) e = e * f;
    };
    while (k_ >= 2) { scale_all(Rational(1, base_)); k_ -= 2; }
    while (k_ < 0) { scale_all(Rational(base_)); k_ += 2; }
    long s;
    if (k_ == 1 && perfect_square(base_, &s)) {
        scale_all(Rational(1, s));
        k_ = 0;
    }
}

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& o) const {
    if (base_ != o.base_ || cols_ != o.rows_)
        throw ValidationError("ScaledMatrix product: shape or base mismatch");
    // lift every entry to one common order so the accumulation stays in-place
    long order = 1;
    for (const auto& x : m_)
        if (!x.is_zero()) order = lcm_long(order, x.order());
    for (const auto& x : o.m_)
        if (!x.is_zero()) order = lcm_long(order, x.order());
    auto lift = [&](const std::vector<CycNum>& src) {
        std::vector<CycNum> out;
        out.reserve(src.size());
        for (const auto& x : src) out.push_back(x.lifted_to(order));
        return out;
    };
    std::vector<CycNum> a = lift(m_), b = lift(o.m_);
    std::vector<bool> az(a.size()), bz(b.size());
    for (size_t i = 0; i < a.size(); ++i) az[i] = a[i].is_zero();
    for (size_t i = 0; i < b.size(); ++i) bz[i] = b[i].is_zero();
    std::vector<CycNum> e(rows_ * o.cols_, CycNum::zero(order));
    for (long i = 0; i < rows_; ++i)
        for (long l = 0; l < cols_; ++l) {
            if (az[i * cols_ + l]) continue;
            const CycNum& v = a[i * cols_ + l];
            for (long j = 0; j < o.cols_; ++j) {
                if (bz[l * o.cols_ + j]) continue;
                cyc_fma(e[i * o.cols_ + j], v, b[l * o.cols_ + j]);
            }
        }
    return ScaledMatrix(k_ + o.k_, base_, rows_, o.cols_, std::move(e));
}

ScaledMatrix ScaledMatrix::conj_transpose() const {
    std::vector<CycNum> e(rows_ * cols_);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) e[j * rows_ + i] = at(i, j).conj();
    return ScaledMatrix(k_, base_, cols_, rows_, std::move(e));
}

ScaledMatrix ScaledMatrix::rebased(long new_base) const {
    if (new_base == base_) return *this;
    std::vector<CycNum> e = m_;
    if (k_ != 0) {
        // old_base^{-1/2} = ratio_root * new_base^{-1/2} when new/old is square
        long ratio_root = 0;
        if (new_base % base_ == 0 && perfect_square(new_base / base_, &ratio_root)) {
            for (auto& x : e)
                if (!x.is_zero()) x = x * Rational(ratio_root);
        } else if (base_ % new_base == 0 && perfect_square(base_ / new_base, &ratio_root)) {
            for (auto& x : e)
                if (!x.is_zero()) x = x * Rational(1, ratio_root);
        } else {
            throw ValidationError("ScaledMatrix rebase: ratio is not a perfect square");
        }
    }
    return ScaledMatrix(k_, new_base, rows_, cols_, std::move(e));
}

bool ScaledMatrix::equals(const ScaledMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    const ScaledMatrix& a = *this;
    ScaledMatrix b = base_ == o.base_ ? o : o.rebased(base_);
    if (a.k_ == b.k_) {
        for (size_t i = 0; i < m_.size(); ++i)
            if (a.m_[i] != b.m_[i]) return false;
        return true;
    }
    // cross parity: the higher k carries one extra base^{-1/2}
    const ScaledMatrix& hi = a.k_ > b.k_ ? a : b;
    const ScaledMatrix& lo = a.k_ > b.k_ ? b : a;
    if (hi.k_ - lo.k_ != 1)
        throw ComputationError("ScaledMatrix equals: non-canonical k");
    Rational base_r(base_);
    double root = std::sqrt((double)base_);
    for (size_t i = 0; i < m_.size(); ++i) {
        const CycNum& x = hi.m_[i];  // represents x / sqrt(base)
        const CycNum& y = lo.m_[i];
        if (x.is_zero() != y.is_zero()) return false;
        if (x.is_zero()) continue;
        if (x * x != (y * y) * base_r) return false;
        // now x = +-sqrt(base) y exactly; break the tie numerically
        std::complex<double> zx = x.to_complex(), zy = y.to_complex();
        double dot = zx.real() * zy.real() + zx.imag() * zy.imag();  // Re(x conj(y))
        double mag = root * std::norm(zy);
        if (std::abs(dot) < 1e-6 * mag)
            throw ComputationError("ScaledMatrix equals: sign disambiguation below tolerance");
        if (dot < 0) return false;
    }
    return true;
}

std::string ScaledMatrix::describe_difference(const ScaledMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return "shape mismatch";
    if (k_ != o.k_) return "scale parity differs";
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j)
            if (at(i, j) != o.at(i, j)) {
                std::ostringstream os;
                os << "entry (" << i << "," << j << "): " << at(i, j).str()
                   << " != " << o.at(i, j).str();
                return os.str();
            }
    return "matrices differ";
}

ScaledMatrix int_times_scaled(const std::vector<std::vector<long>>& rows, long ncols,
                              const ScaledMatrix& a) {
    (void)ncols;
    long nr = (long)rows.size();
    std::vector<CycNum> e(nr * a.cols());
    for (long i = 0; i < nr; ++i)
        for (long j = 0; j < a.cols(); ++j) {
            CycNum acc;
            for (long c : rows[i]) acc += a.at(c, j);
            e[i * a.cols() + j] = std::move(acc);
        }
    return ScaledMatrix(a.k(), a.base(), nr, a.cols(), std::move(e));
}

ScaledMatrix scaled_times_int(const ScaledMatrix& a,
                              const std::vector<std::vector<long>>& rows, long ncols) {
    // B is 0/1 with B[r][c] = 1 iff c in rows[r]; computes a * B
    std::vector<CycNum> e(a.rows() * ncols);
    for (long r = 0; r < (long)rows.size(); ++r)
        for (long c : rows[r])
            for (long i = 0; i < a.rows(); ++i)
                e[i * ncols + c] += a.at(i, r);
    return ScaledMatrix(a.k(), a.base(), a.rows(), ncols, std::move(e));
}

ScaledMatrix scaled_times_int_transposed(const ScaledMatrix& a,
                                         const std::vector<std::vector<long>>& rows,
                                         long ncols) {
    // computes a * B^T where B is the 0/1 matrix above; result is a.rows x #rows
    (void)ncols;
    long nr = (long)rows.size();
    std::vector<CycNum> e(a.rows() * nr);
    for (long r = 0; r < nr; ++r)
        for (long i = 0; i < a.rows(); ++i) {
            CycNum acc;
            for (long c : rows[r]) acc += a.at(i, c);
            e[i * nr + r] = std::move(acc);
        }
    return ScaledMatrix(a.k(), a.base(), a.rows(), nr, std::move(e));
}

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    auto mul = [](long u, long v) {
        __int128 r = (__int128)u * v;
        if (r > (__int128)1 << 62 || r < -((__int128)1 << 62))
            throw SizeLimitError("SL2 entry overflow");
        return (long)r;
    };
    return {mul(x.a, y.a) + mul(x.b, y.c), mul(x.a, y.b) + mul(x.b, y.d),
            mul(x.c, y.a) + mul(x.d, y.c), mul(x.c, y.b) + mul(x.d, y.d)};
}

long mat2_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

std::vector<std::string> SL2Word::letters() const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        if (t.gen == 'S') out.emplace_back("S");
        else
            for (long i = 0; i < std::abs(t.power); ++i)
                out.emplace_back(t.power > 0 ? "T" : "T^-1");
    }
    return out;
}

SL2Word sl2_word(const Mat2& m0) {
    if (mat2_det(m0) != 1)
        throw ValidationError("sl2_word: determinant must be 1");
    SL2Word w;
    w.matrix = m0;
    Mat2 m = m0;
    std::vector<SL2Word::Token> rev;  // letters peeled from the right
    while (m.c != 0) {
        // choose k minimizing |d - k c| (so it is <= |c|/2), then m <- m T^{-k} S^{-1}
        long k = m.d / m.c;
        for (long cand : {k - 1, k + 1})
            if (std::abs(m.d - cand * m.c) < std::abs(m.d - k * m.c)) k = cand;
        long d2 = m.d - k * m.c;
        if (k != 0) rev.push_back({'T', k});
        rev.push_back({'S', 1});
        long b2 = m.b - k * m.a;
        // m T^{-k} = [[a, b2],[c, d2]]; right-multiplying by S^{-1} = [[0,1],[-1,0]]
        m = {-b2, m.a, -d2, m.c};
    }
    // now m = [[u, b], [0, u]] with u = +-1
    if (m.a == 1) {
        if (m.b != 0) rev.push_back({'T', m.b});
    } else {
        // -T^{-b}: peel T^{-b}, then S^2 = -Id
        if (m.b != 0) rev.push_back({'T', -m.b});
        rev.push_back({'S', 1});
        rev.push_back({'S', 1});
    }
    w.tokens.assign(rev.rbegin(), rev.rend());
    Mat2 prod;
    for (const auto& t : w.tokens)
        prod = mat2_mul(prod, t.gen == 'S' ? mat2_s() : mat2_t(t.power));
    if (!(prod == m0))
        throw ComputationError("sl2_word: decomposition check failed");
    return w;
}

ScaledMatrix rho_generator(const FiniteQuadraticModule& d, char gen) {
    if (signature(d) % 2 != 0)
        throw ValidationError("Weil representation requires even signature");
    long n = d.element_count();
    long base = to_long_checked(d.size(), "|D|");
    long order = lcm_long(std::max(d.level(), 1L), 8);
    if (gen == 'T') {
        std::vector<CycNum> e(n * n);
        for (long g = 0; g < n; ++g)
            e[g * n + g] = root_of_unity(d.q(d.element_at(g)), order);
        return ScaledMatrix(0, base, n, n, std::move(e));
    }
    if (gen != 'S') throw ValidationError("rho_generator: gen must be 'S' or 'T'");
    int s = signature(d);
    CycNum c8 = root_of_unity(QmodZ(-s, 8), order);
    std::vector<CycNum> e(n * n);
    for (long b = 0; b < n; ++b) {
        Element eb = d.element_at(b);
        for (long g = 0; g < n; ++g)
            e[b * n + g] = c8 * root_of_unity(-d.b(d.element_at(g), eb), order);
    }
    return ScaledMatrix(1, base, n, n, std::move(e));
}

ScaledMatrix rho(const FiniteQuadraticModule& d, const Mat2& m) {
    SL2Word w = sl2_word(m);
    long n = d.element_count();
    long base = to_long_checked(d.size(), "|D|");
    long order = lcm_long(std::max(d.level(), 1L), 8);
    ScaledMatrix res = ScaledMatrix::identity(n, base);
    ScaledMatrix s = rho_generator(d, 'S');
    for (const auto& tok : w.tokens) {
        if (tok.gen == 'S') {
            res = res * s;
        } else {
            // diagonal right action: scale column gamma by e(power * Q(gamma))
            std::vector<CycNum> e(n * n);
            for (long j = 0; j < n; ++j) {
                CycNum dj = root_of_unity(d.q(d.element_at(j)).scaled(Integer(tok.power)), order);
                for (long i = 0; i < n; ++i)
                    if (!res.at(i, j).is_zero()) e[i * n + j] = res.at(i, j) * dj;
            }
            res = ScaledMatrix(res.k(), base, n, n, std::move(e));
        }
    }
    return res;
}

bool report_all_pass(const Report& r) {
    for (const auto& c : r)
        if (!c.pass) return false;
    return true;
}

namespace {

CheckResult check_equal(const std::string& name, const ScaledMatrix& a, const ScaledMatrix& b) {
    CheckResult out{name, true, ""};
    if (!a.equals(b)) {
        out.pass = false;
        out.counterexample = a.describe_difference(b);
    }
    return out;
}

} // namespace

Report verify_relations(const FiniteQuadraticModule& d) {
    Report rep;
    long n = d.element_count();
    long base = to_long_checked(d.size(), "|D|");
    ScaledMatrix id = ScaledMatrix::identity(n, base);
    ScaledMatrix s = rho_generator(d, 'S');
    ScaledMatrix t = rho_generator(d, 'T');
    ScaledMatrix s2 = s * s;
    rep.push_back(check_equal("rho(S)^4 = Id", s2 * s2, id));
    ScaledMatrix st = s * t;
    rep.push_back(check_equal("(rho(S)rho(T))^3 = rho(S)^2", st * st * st, s2));
    rep.push_back(check_equal("rho(S) unitary", s.conj_transpose() * s, id));
    rep.push_back(check_equal("rho(T) unitary", t.conj_transpose() * t, id));
    // Milgram consistency of c_D: gauss^2 = |D| e(s/4) and |gauss|^2 = |D|
    CheckResult mil{"Milgram consistency", true, ""};
    try {
        CycNum g = gauss_sum(d);
        int sg = signature(d);
        bool ok = (g * g == root_of_unity(QmodZ(sg, 4), 4) * Rational(d.size())) &&
                  (g * g.conj() == CycNum(Rational(d.size())));
        if (!ok) {
            mil.pass = false;
            mil.counterexample = "Gauss sum identities failed";
        }
    } catch (const std::exception& e) {
        mil.pass = false;
        mil.counterexample = e.what();
    }
    rep.push_back(mil);
    return rep;
}

Mat2 random_gamma_n_element(long n, unsigned seed, int index) {
    std::mt19937 rng(seed + 0x9e3779b9u * (unsigned)index);
    std::uniform_int_distribution<long> small(-2, 2);
    // det(Id + N [[0, b], [c, N b c]]) = 1 identically
    long b = small(rng), c = small(rng);
    Mat2 m{1, n * b, n * c, 1 + n * n * b * c};
    // conjugation stays inside the normal subgroup Gamma(N)
    int extra = (int)(rng() % 3);
    for (int i = 0; i < extra; ++i) {
        long j = small(rng);
        Mat2 w = mat2_mul(mat2_t(j), mat2_s());
        Mat2 winv{w.d, -w.b, -w.c, w.a};
        m = mat2_mul(mat2_mul(w, m), winv);
    }
    if (mat2_det(m) != 1) throw ComputationError("Gamma(N) sampling produced det != 1");
    return m;
}

Report verify_gamma_trivial(const FiniteQuadraticModule& d, int samples, unsigned seed) {
    Report rep;
    long n = d.element_count();
    long base = to_long_checked(d.size(), "|D|");
    ScaledMatrix id = ScaledMatrix::identity(n, base);
    long lv = d.level();
    for (int i = 0; i < samples; ++i) {
        Mat2 m = random_gamma_n_element(lv, seed, i);
        std::ostringstream name;
        name << "rho(M) = Id for M = [[" << m.a << "," << m.b << "],[" << m.c << "," << m.d
             << "]] in Gamma(" << lv << ")";
        rep.push_back(check_equal(name.str(), rho(d, m), id));
    }
    return rep;
}

} // namespace fqm
