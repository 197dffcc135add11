#include "linbill/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linbill {

namespace {

void require_same_degree(const BiSeries& a, const BiSeries& b, const char* what)
{
    if (a.max_degree() != b.max_degree()) {
        throw DegreeMismatch(std::string(what) + ": max_degree " + std::to_string(a.max_degree()) + " vs " +
                             std::to_string(b.max_degree()));
    }
}

void require_same_degree(const UniSeries& a, const UniSeries& b, const char* what)
{
    if (a.max_degree() != b.max_degree()) {
        throw DegreeMismatch(std::string(what) + ": max_degree " + std::to_string(a.max_degree()) + " vs " +
                             std::to_string(b.max_degree()));
    }
}

std::vector<char> nonzero_blocks(const BiSeries& s)
{
    std::vector<char> flags(static_cast<std::size_t>(s.max_degree()) + 1);
    for (int d = 0; d <= s.max_degree(); ++d) {
        flags[static_cast<std::size_t>(d)] = s.block_is_zero(d) ? 0 : 1;
    }
    return flags;
}

// Scratch register for the raw MPFR kernels.
class Temp {
public:
    explicit Temp(int prec) { mpfr_init2(t_, prec); }
    ~Temp() { mpfr_clear(t_); }
    Temp(const Temp&) = delete;
    Temp& operator=(const Temp&) = delete;
    mpfr_ptr get() { return t_; }

private:
    mpfr_t t_;
};

// out += x * y
inline void fma_into(Scalar& out, const Scalar& x, const Scalar& y, mpfr_ptr t)
{
    mpfr_fmms(t, x.re().get(), y.re().get(), x.im().get(), y.im().get(), MPFR_RNDN);
    mpfr_add(out.re().get(), out.re().get(), t, MPFR_RNDN);
    mpfr_fmma(t, x.re().get(), y.im().get(), x.im().get(), y.re().get(), MPFR_RNDN);
    mpfr_add(out.im().get(), out.im().get(), t, MPFR_RNDN);
}

// out += block(a, da) (*) block(b, db) where (*) is the 1-D convolution in k.
void convolve_block(Scalar* out, const BiSeries& a, int da, const BiSeries& b, int db, mpfr_ptr t)
{
    const Scalar* pa = a.data().data() + BiSeries::block_begin(da);
    const Scalar* pb = b.data().data() + BiSeries::block_begin(db);
    for (int ka = 0; ka <= da; ++ka) {
        const Scalar& x = pa[ka];
        if (x.is_zero()) {
            continue;
        }
        Scalar* o = out + ka;
        for (int kb = 0; kb <= db; ++kb) {
            fma_into(o[kb], x, pb[kb], t);
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// BiSeries

BiSeries::BiSeries(int max_degree, int precision_bits) : max_degree_(max_degree), precision_(precision_bits)
{
    if (max_degree < 0) {
        throw std::invalid_argument("max_degree must be nonnegative");
    }
    coeffs_.assign(block_begin(max_degree + 1), Scalar(precision_bits));
}

BiSeries BiSeries::monomial(int j, int k, const Scalar& coeff, int max_degree)
{
    BiSeries s(max_degree, coeff.precision());
    if (j + k <= max_degree) {
        s(j, k) = coeff;
    }
    return s;
}

BiSeries BiSeries::constant(const Scalar& value, int max_degree) { return monomial(0, 0, value, max_degree); }

const Scalar& BiSeries::at(int j, int k) const
{
    if (j < 0 || k < 0 || j + k > max_degree_) {
        throw std::out_of_range("coefficient (" + std::to_string(j) + ", " + std::to_string(k) + ") outside degree " +
                                std::to_string(max_degree_));
    }
    return (*this)(j, k);
}

Scalar& BiSeries::at(int j, int k)
{
    return const_cast<Scalar&>(static_cast<const BiSeries&>(*this).at(j, k));
}

Scalar BiSeries::get(int j, int k) const
{
    if (j < 0 || k < 0 || j + k > max_degree_) {
        return Scalar(precision_);
    }
    return (*this)(j, k);
}

bool BiSeries::block_is_zero(int d) const
{
    if (d < 0 || d > max_degree_) {
        return true;
    }
    const std::size_t b = block_begin(d);
    for (int k = 0; k <= d; ++k) {
        if (!coeffs_[b + static_cast<std::size_t>(k)].is_zero()) {
            return false;
        }
    }
    return true;
}

bool BiSeries::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Scalar& c) { return c.is_zero(); });
}

BiSeries& BiSeries::operator+=(const BiSeries& rhs)
{
    require_same_degree(*this, rhs, "add");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& rhs)
{
    require_same_degree(*this, rhs, "subtract");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    return *this;
}

BiSeries& BiSeries::operator*=(const Scalar& c)
{
    for (auto& x : coeffs_) {
        if (!x.is_zero()) {
            x *= c;
        }
    }
    return *this;
}

BiSeries& BiSeries::operator*=(const Real& c)
{
    for (auto& x : coeffs_) {
        if (!x.is_zero()) {
            x *= c;
        }
    }
    return *this;
}

BiSeries BiSeries::operator-() const
{
    BiSeries out(*this);
    for (auto& x : out.coeffs_) {
        mpfr_neg(x.re().get(), x.re().get(), MPFR_RNDN);
        mpfr_neg(x.im().get(), x.im().get(), MPFR_RNDN);
    }
    return out;
}

BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
BiSeries operator*(BiSeries a, const Scalar& c) { return a *= c; }
BiSeries operator*(const Scalar& c, BiSeries a) { return a *= c; }
BiSeries operator*(BiSeries a, const Real& c) { return a *= c; }
BiSeries operator*(const Real& c, BiSeries a) { return a *= c; }

void add_scaled(BiSeries& acc, const BiSeries& x, const Scalar& c)
{
    require_same_degree(acc, x, "add_scaled");
    if (c.is_zero()) {
        return;
    }
    Temp t(acc.precision());
    auto& out = acc.data();
    const auto& in = x.data();
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!in[i].is_zero()) {
            fma_into(out[i], in[i], c, t.get());
        }
    }
}

BiSeries multiply(const BiSeries& a, const BiSeries& b)
{
    require_same_degree(a, b, "multiply");
    const int D = a.max_degree();
    BiSeries c(D, std::max(a.precision(), b.precision()));
    const auto fa = nonzero_blocks(a);
    const auto fb = nonzero_blocks(b);
    Temp t(c.precision());
    for (int d = 0; d <= D; ++d) {
        Scalar* out = c.data().data() + BiSeries::block_begin(d);
        for (int da = 0; da <= d; ++da) {
            const int db = d - da;
            if (fa[static_cast<std::size_t>(da)] && fb[static_cast<std::size_t>(db)]) {
                convolve_block(out, a, da, b, db, t.get());
            }
        }
    }
    return c;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) { return multiply(a, b); }

BiSeries invert_unit(const BiSeries& a)
{
    const int D = a.max_degree();
    const int prec = a.precision();
    const Scalar& a00 = a(0, 0);
    if (a00.abs_double() <= zero_tolerance(prec)) {
        throw NonUnit("invert_unit: constant term is numerically zero");
    }
    // Degree-by-degree solution of a * r = 1; identical to summing the
    // truncated geometric series in (1 - a / a00).
    const Scalar inv00 = Scalar(Real(1L, prec), Real(prec)) / a00;
    const Scalar neg_inv00 = -inv00;
    BiSeries r(D, prec);
    r(0, 0) = inv00;
    const auto fa = nonzero_blocks(a);
    Temp t(prec);
    std::vector<Scalar> acc(static_cast<std::size_t>(D) + 1, Scalar(prec));
    for (int d = 1; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            acc[static_cast<std::size_t>(k)] = Scalar(prec);
        }
        bool any = false;
        for (int da = 1; da <= d; ++da) {
            const int dr = d - da;
            if (!fa[static_cast<std::size_t>(da)] || r.block_is_zero(dr)) {
                continue;
            }
            convolve_block(acc.data(), a, da, r, dr, t.get());
            any = true;
        }
        if (!any) {
            continue;
        }
        Scalar* out = r.data().data() + BiSeries::block_begin(d);
        for (int k = 0; k <= d; ++k) {
            out[k] = acc[static_cast<std::size_t>(k)] * neg_inv00;
        }
    }
    return r;
}

BiSeries resized(const BiSeries& s, int max_degree)
{
    BiSeries out(max_degree, s.precision());
    const int top = std::min(max_degree, s.max_degree());
    std::copy(s.data().begin(), s.data().begin() + static_cast<std::ptrdiff_t>(BiSeries::block_begin(top + 1)),
              out.data().begin());
    return out;
}

BiSeries mul_monomial(const BiSeries& s, int dj, int dk)
{
    const int D = s.max_degree();
    const double tol = zero_tolerance(s.precision());
    BiSeries out(D, s.precision());
    for (int d = 0; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            const Scalar& c = s(j, k);
            if (c.is_zero()) {
                continue;
            }
            const int nj = j + dj;
            const int nk = k + dk;
            if (nj < 0 || nk < 0) {
                if (c.abs_double() > tol) {
                    throw std::domain_error("mul_monomial: division leaves a negative power");
                }
                continue;
            }
            if (nj + nk <= D) {
                out(nj, nk) = c;
            }
        }
    }
    return out;
}

BiSeries shift(const BiSeries& s, ShiftDirection direction, const Rotation& rot)
{
    const int sign = direction == ShiftDirection::plus ? 1 : -1;
    BiSeries out(s);
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            Scalar& c = out(j, k);
            if (j != k && !c.is_zero()) {
                c *= rot.power(sign * (j - k));
            }
        }
    }
    return out;
}

BiSeries shift_plus(const BiSeries& s, const Rotation& rot) { return shift(s, ShiftDirection::plus, rot); }
BiSeries shift_minus(const BiSeries& s, const Rotation& rot) { return shift(s, ShiftDirection::minus, rot); }

BiSeries involution(const BiSeries& s)
{
    BiSeries out(s.max_degree(), s.precision());
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            out(k, d - k) = s(d - k, k);
        }
    }
    return out;
}

BiSeries partial(const BiSeries& s, Variable var)
{
    const int D = s.max_degree();
    const int prec = s.precision();
    BiSeries out(std::max(D - 1, 0), prec);
    if (D == 0) {
        return out;
    }
    for (int d = 1; d <= D; ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            const Scalar& c = s(j, k);
            if (c.is_zero()) {
                continue;
            }
            if (var == Variable::z && j > 0) {
                out(j - 1, k) = c * Real(static_cast<long>(j), prec);
            } else if (var == Variable::zbar && k > 0) {
                out(j, k - 1) = c * Real(static_cast<long>(k), prec);
            }
        }
    }
    return out;
}

BiSeries partial_padded(const BiSeries& s, Variable var) { return resized(partial(s, var), s.max_degree()); }

BiSeries truncate(const BiSeries& s, int M)
{
    if (M < 0 || M > s.max_degree()) {
        throw std::invalid_argument("truncate: M outside [0, max_degree]");
    }
    BiSeries out(s);
    for (std::size_t i = BiSeries::block_begin(M + 1); i < out.size(); ++i) {
        out.data()[i] = Scalar(s.precision());
    }
    return out;
}

int order(const BiSeries& s, double tol)
{
    for (int d = 0; d <= s.max_degree(); ++d) {
        if (degree_sup(s, d) > tol) {
            return d;
        }
    }
    return s.max_degree() + 1;
}

int order(const BiSeries& s) { return order(s, zero_tolerance(s.precision())); }

namespace {

// falling factorial n (n-1) ... (n-a+1)
Real falling(int n, int a, int prec)
{
    Real r(1L, prec);
    for (int i = 0; i < a; ++i) {
        r *= Real(static_cast<long>(n - i), prec);
    }
    return r;
}

Real norm_of_derivative(const BiSeries& s, const Real& rho, int a, int b)
{
    const int prec = std::max(s.precision(), rho.precision());
    Real total(prec);
    std::vector<Real> rho_pow;
    rho_pow.reserve(static_cast<std::size_t>(s.max_degree()) + 1);
    rho_pow.emplace_back(1L, prec);
    for (int d = 1; d <= s.max_degree(); ++d) {
        rho_pow.push_back(rho_pow.back() * rho);
    }
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            if (j < a || k < b) {
                continue;
            }
            const Scalar& c = s(j, k);
            if (c.is_zero()) {
                continue;
            }
            Real m = c.abs();
            if (a > 0 || b > 0) {
                m *= falling(j, a, prec) * falling(k, b, prec);
            }
            total += m * rho_pow[static_cast<std::size_t>(d - a - b)];
        }
    }
    return total;
}

} // namespace

Real weighted_norm(const BiSeries& s, const Real& rho, int derivatives)
{
    if (!(rho.sign() > 0)) {
        throw std::invalid_argument("weighted_norm: rho must be positive");
    }
    if (derivatives < 0) {
        throw std::invalid_argument("weighted_norm: derivatives must be nonnegative");
    }
    Real best = norm_of_derivative(s, rho, 0, 0);
    for (int l = 1; l <= derivatives; ++l) {
        for (int a = 0; a <= l; ++a) {
            Real v = norm_of_derivative(s, rho, a, l - a);
            if (v > best) {
                best = std::move(v);
            }
        }
    }
    return best;
}

Real weighted_norm(const BiSeries& s, double rho, int derivatives)
{
    return weighted_norm(s, Real(rho, s.precision()), derivatives);
}

double degree_sup(const BiSeries& s, int d)
{
    if (d < 0 || d > s.max_degree()) {
        return 0.0;
    }
    double best = 0.0;
    const std::size_t b = BiSeries::block_begin(d);
    for (int k = 0; k <= d; ++k) {
        const Scalar& c = s.data()[b + static_cast<std::size_t>(k)];
        if (!c.is_zero()) {
            best = std::max(best, c.abs_double());
        }
    }
    return best;
}

double max_abs(const BiSeries& s)
{
    double best = 0.0;
    for (int d = 0; d <= s.max_degree(); ++d) {
        best = std::max(best, degree_sup(s, d));
    }
    return best;
}

bool is_symmetric(const BiSeries& s, double tol)
{
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k < d - k; ++k) {
            if ((s(d - k, k) - s(k, d - k)).abs_double() > tol) {
                return false;
            }
        }
    }
    return true;
}

bool is_real(const BiSeries& s, double tol)
{
    for (int d = 0; d <= s.max_degree(); ++d) {
        for (int k = 0; k <= d; ++k) {
            if ((s(d - k, k).conj() - s(k, d - k)).abs_double() > tol) {
                return false;
            }
        }
    }
    return true;
}

bool has_odd_degrees_only(const BiSeries& s, double tol)
{
    for (int d = 0; d <= s.max_degree(); d += 2) {
        if (degree_sup(s, d) > tol) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// UniSeries

UniSeries::UniSeries(int max_degree, int precision_bits) : max_degree_(max_degree), precision_(precision_bits)
{
    if (max_degree < 0) {
        throw std::invalid_argument("max_degree must be nonnegative");
    }
    coeffs_.assign(static_cast<std::size_t>(max_degree) + 1, Scalar(precision_bits));
}

Scalar UniSeries::get(int k) const
{
    if (k < 0 || k > max_degree_) {
        return Scalar(precision_);
    }
    return coeffs_[static_cast<std::size_t>(k)];
}

UniSeries& UniSeries::operator+=(const UniSeries& rhs)
{
    require_same_degree(*this, rhs, "add");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    return *this;
}

UniSeries& UniSeries::operator-=(const UniSeries& rhs)
{
    require_same_degree(*this, rhs, "subtract");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    return *this;
}

UniSeries& UniSeries::operator*=(const Scalar& c)
{
    for (auto& x : coeffs_) {
        x *= c;
    }
    return *this;
}

UniSeries operator+(UniSeries a, const UniSeries& b) { return a += b; }
UniSeries operator-(UniSeries a, const UniSeries& b) { return a -= b; }
UniSeries operator*(UniSeries a, const Scalar& c) { return a *= c; }

UniSeries derivative(const UniSeries& f)
{
    UniSeries out(f.max_degree(), f.precision());
    for (int k = 1; k <= f.max_degree(); ++k) {
        out[k - 1] = f[k] * Real(static_cast<long>(k), f.precision());
    }
    return out;
}

UniSeries truncate(const UniSeries& f, int M)
{
    if (M < 0 || M > f.max_degree()) {
        throw std::invalid_argument("truncate: M outside [0, max_degree]");
    }
    UniSeries out(f);
    for (int k = M + 1; k <= f.max_degree(); ++k) {
        out[k] = Scalar(f.precision());
    }
    return out;
}

UniSeries resized(const UniSeries& f, int max_degree)
{
    UniSeries out(max_degree, f.precision());
    for (int k = 0; k <= std::min(max_degree, f.max_degree()); ++k) {
        out[k] = f[k];
    }
    return out;
}

bool is_even(const UniSeries& f, double tol)
{
    for (int k = 1; k <= f.max_degree(); k += 2) {
        if (f[k].abs_double() > tol) {
            return false;
        }
    }
    return true;
}

int order(const UniSeries& f, double tol)
{
    for (int k = 0; k <= f.max_degree(); ++k) {
        if (f[k].abs_double() > tol) {
            return k;
        }
    }
    return f.max_degree() + 1;
}

Real weighted_norm(const UniSeries& f, const Real& rho, int derivatives)
{
    if (!(rho.sign() > 0)) {
        throw std::invalid_argument("weighted_norm: rho must be positive");
    }
    const int prec = std::max(f.precision(), rho.precision());
    Real best(prec);
    for (int l = 0; l <= derivatives; ++l) {
        Real total(prec);
        Real rp(1L, prec);
        for (int k = l; k <= f.max_degree(); ++k) {
            if (!f[k].is_zero()) {
                total += f[k].abs() * falling(k, l, prec) * rp;
            }
            rp *= rho;
        }
        if (total > best) {
            best = std::move(total);
        }
    }
    return best;
}

Real weighted_norm(const UniSeries& f, double rho, int derivatives)
{
    return weighted_norm(f, Real(rho, f.precision()), derivatives);
}

namespace {

UniSeries trig_series(int max_degree, int precision_bits, int parity)
{
    UniSeries out(max_degree, precision_bits);
    Real term(1L, precision_bits); // 1 / n!
    for (int n = 0; n <= max_degree; ++n) {
        if (n > 0) {
            term /= Real(static_cast<long>(n), precision_bits);
        }
        if (n % 2 == parity) {
            const bool negative = (n / 2) % 2 == 1;
            out[n] = Scalar(negative ? -term : term);
        }
    }
    return out;
}

Scalar checked_constant(const BiSeries& s)
{
    const Scalar& c = s(0, 0);
    if (c.abs_double() > zero_tolerance(s.precision())) {
        throw NonzeroConstantTerm("compose_uni: argument has nonzero constant term");
    }
    return c;
}

int min_order(const BiSeries& s)
{
    for (int d = 1; d <= s.max_degree(); ++d) {
        if (!s.block_is_zero(d)) {
            return d;
        }
    }
    return s.max_degree() + 1;
}

} // namespace

UniSeries cos_series(int max_degree, int precision_bits) { return trig_series(max_degree, precision_bits, 0); }
UniSeries sin_series(int max_degree, int precision_bits) { return trig_series(max_degree, precision_bits, 1); }

BiSeries compose_uni(const UniSeries& f, const BiSeries& s)
{
    checked_constant(s);
    BiSeries arg(s);
    arg(0, 0) = Scalar(s.precision());
    const int D = s.max_degree();
    const int ord = min_order(arg);
    int top = f.max_degree();
    if (ord > D) {
        top = 0;
    } else {
        top = std::min(top, D / ord);
    }
    BiSeries acc = BiSeries::constant(f[top], D);
    for (int n = top - 1; n >= 0; --n) {
        acc = multiply(acc, arg);
        acc(0, 0) += f[n];
    }
    return acc;
}

PowerTable::PowerTable(const BiSeries& s) : s_(s), zero_(s.max_degree(), s.precision())
{
    checked_constant(s);
    s_(0, 0) = Scalar(s.precision());
    const int D = s.max_degree();
    const int ord = min_order(s_);
    const int top = ord > D ? 0 : D / (2 * ord);
    u_.reserve(static_cast<std::size_t>(top) + 1);
    u_.push_back(BiSeries::constant(Scalar(Real(1L, s.precision())), D));
    if (top >= 1) {
        u_.push_back(multiply(s_, s_));
    }
    for (int n = 2; n <= top; ++n) {
        u_.push_back(multiply(u_.back(), u_[1]));
    }
}

const BiSeries& PowerTable::even_power(int n) const
{
    if (n < 0) {
        throw std::out_of_range("negative power");
    }
    if (n >= static_cast<int>(u_.size())) {
        return zero_;
    }
    return u_[static_cast<std::size_t>(n)];
}

BiSeries PowerTable::compose(const UniSeries& f) const
{
    const int D = s_.max_degree();
    BiSeries even(D, s_.precision());
    BiSeries odd(D, s_.precision());
    bool any_odd = false;
    for (int n = 0; n < static_cast<int>(u_.size()); ++n) {
        const auto& un = u_[static_cast<std::size_t>(n)];
        add_scaled(even, un, f.get(2 * n));
        const Scalar c = f.get(2 * n + 1);
        if (!c.is_zero()) {
            add_scaled(odd, un, c);
            any_odd = true;
        }
    }
    if (any_odd) {
        even += multiply(s_, odd);
    }
    return even;
}

} // namespace linbill
