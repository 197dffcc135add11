#include "linbill/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace linbill {

double zero_tolerance(int precision_bits) { return std::ldexp(1.0, -precision_bits / 2); }

Real::Real(int precision_bits)
{
    mpfr_init2(value_, precision_bits);
    mpfr_set_zero(value_, 1);
}

Real::Real(double value, int precision_bits)
{
    mpfr_init2(value_, precision_bits);
    mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(long value, int precision_bits)
{
    mpfr_init2(value_, precision_bits);
    mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other)
{
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept
{
    // Steal the limbs; leave `other` as a valid minimal-precision zero.
    *value_ = *other.value_;
    mpfr_init2(other.value_, MPFR_PREC_MIN);
    mpfr_set_zero(other.value_, 1);
}

Real& Real::operator=(const Real& other)
{
    if (this != &other) {
        if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        }
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept
{
    if (this != &other) {
        mpfr_swap(value_, other.value_);
    }
    return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::parse(std::string_view text, int precision_bits)
{
    Real out(precision_bits);
    std::string s(text);
    // Trim surrounding whitespace; mpfr_set_str rejects it.
    auto first = s.find_first_not_of(" \t\r\n");
    auto last = s.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw FormatError("empty numeric literal");
    }
    s = s.substr(first, last - first + 1);
    if (mpfr_set_str(out.value_, s.c_str(), 0, MPFR_RNDN) != 0) {
        throw FormatError("cannot parse numeric literal '" + s + "'");
    }
    return out;
}

Real Real::pi(int precision_bits)
{
    Real out(precision_bits);
    mpfr_const_pi(out.value_, MPFR_RNDN);
    return out;
}

std::string Real::to_string() const
{
    if (mpfr_nan_p(value_)) {
        return "nan";
    }
    if (mpfr_inf_p(value_)) {
        return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
    }
    if (mpfr_zero_p(value_)) {
        return mpfr_signbit(value_) ? "-0" : "0";
    }
    mpfr_exp_t exponent = 0;
    char* digits = mpfr_get_str(nullptr, &exponent, 10, 0, value_, MPFR_RNDN);
    std::string d(digits);
    mpfr_free_str(digits);
    std::string sign;
    if (!d.empty() && d[0] == '-') {
        sign = "-";
        d.erase(0, 1);
    }
    while (d.size() > 1 && d.back() == '0') {
        d.pop_back();
    }
    // digits represent 0.d1d2... * 10^exponent
    std::ostringstream os;
    os << sign << d[0];
    if (d.size() > 1) {
        os << '.' << d.substr(1);
    }
    os << 'e' << (exponent - 1);
    return os.str();
}

namespace {

int result_precision(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

void widen(Real& target, const Real& other)
{
    if (other.precision() > target.precision()) {
        mpfr_prec_round(target.get(), other.precision(), MPFR_RNDN);
    }
}

} // namespace

Real& Real::operator+=(const Real& rhs)
{
    widen(*this, rhs);
    mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

Real& Real::operator-=(const Real& rhs)
{
    widen(*this, rhs);
    mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

Real& Real::operator*=(const Real& rhs)
{
    widen(*this, rhs);
    mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

Real& Real::operator/=(const Real& rhs)
{
    widen(*this, rhs);
    mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

Real Real::operator-() const
{
    Real out(*this);
    mpfr_neg(out.value_, out.value_, MPFR_RNDN);
    return out;
}

std::partial_ordering operator<=>(const Real& a, const Real& b)
{
    if (mpfr_unordered_p(a.value_, b.value_)) {
        return std::partial_ordering::unordered;
    }
    int c = mpfr_cmp(a.value_, b.value_);
    if (c < 0) {
        return std::partial_ordering::less;
    }
    if (c > 0) {
        return std::partial_ordering::greater;
    }
    return std::partial_ordering::equivalent;
}

#define LINBILL_UNARY(name, fn)                                                                                       \
    Real name(const Real& x)                                                                                           \
    {                                                                                                                  \
        Real out(x.precision());                                                                                       \
        fn(out.get(), x.get(), MPFR_RNDN);                                                                             \
        return out;                                                                                                    \
    }

LINBILL_UNARY(abs, mpfr_abs)
LINBILL_UNARY(sqrt, mpfr_sqrt)
LINBILL_UNARY(sin, mpfr_sin)
LINBILL_UNARY(cos, mpfr_cos)
LINBILL_UNARY(tan, mpfr_tan)
LINBILL_UNARY(exp, mpfr_exp)
LINBILL_UNARY(log, mpfr_log)

#undef LINBILL_UNARY

Real pow(const Real& x, const Real& y)
{
    Real out(result_precision(x, y));
    mpfr_pow(out.get(), x.get(), y.get(), MPFR_RNDN);
    return out;
}

Real ldexp(const Real& x, long exponent)
{
    Real out(x.precision());
    mpfr_mul_2si(out.get(), x.get(), exponent, MPFR_RNDN);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

Scalar Scalar::polar_unit(const Real& angle)
{
    Real s(angle.precision());
    Real c(angle.precision());
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    return Scalar(std::move(c), std::move(s));
}

Real Scalar::abs() const
{
    Real out(precision());
    mpfr_hypot(out.get(), re_.get(), im_.get(), MPFR_RNDN);
    return out;
}

double Scalar::abs_double() const { return abs().to_double(); }

Scalar& Scalar::operator+=(const Scalar& rhs)
{
    re_ += rhs.re_;
    im_ += rhs.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs)
{
    re_ -= rhs.re_;
    im_ -= rhs.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs)
{
    const int prec = std::max(precision(), rhs.precision());
    Real re(prec);
    Real im(prec);
    mpfr_fmms(re.get(), re_.get(), rhs.re_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
    mpfr_fmma(im.get(), re_.get(), rhs.im_.get(), im_.get(), rhs.re_.get(), MPFR_RNDN);
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar& Scalar::operator*=(const Real& rhs)
{
    re_ *= rhs;
    im_ *= rhs;
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs)
{
    const int prec = std::max(precision(), rhs.precision());
    Real denom(prec);
    mpfr_fmma(denom.get(), rhs.re_.get(), rhs.re_.get(), rhs.im_.get(), rhs.im_.get(), MPFR_RNDN);
    Real re(prec);
    Real im(prec);
    mpfr_fmma(re.get(), re_.get(), rhs.re_.get(), im_.get(), rhs.im_.get(), MPFR_RNDN);
    mpfr_fmms(im.get(), im_.get(), rhs.re_.get(), re_.get(), rhs.im_.get(), MPFR_RNDN);
    re /= denom;
    im /= denom;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar pow(const Scalar& base, long exponent)
{
    const int prec = base.precision();
    Scalar result(Real(1L, prec), Real(prec));
    Scalar b = base;
    if (exponent < 0) {
        b = Scalar(Real(1L, prec), Real(prec)) / b;
        exponent = -exponent;
    }
    while (exponent > 0) {
        if (exponent & 1) {
            result *= b;
        }
        b *= b;
        exponent >>= 1;
    }
    return result;
}

std::ostream& operator<<(std::ostream& os, const Scalar& x)
{
    return os << '(' << x.re().to_string() << ", " << x.im().to_string() << ')';
}

int power_cap_for_degree(int max_degree) { return 4 * max_degree + 4; }

Rotation::Rotation(Real theta, double c, double tau, int power_cap)
    : theta_(std::move(theta)), c_(c), tau_(tau), mu_(theta_.precision()), cap_(power_cap)
{
    const int prec = theta_.precision();
    powers_.reserve(2 * static_cast<std::size_t>(cap_) + 1);
    for (int k = -cap_; k <= cap_; ++k) {
        // Direct evaluation of e^{ik theta} keeps every cached power correctly
        // rounded instead of accumulating error along a product chain.
        Real angle = theta_ * Real(static_cast<long>(k), prec);
        powers_.push_back(Scalar::polar_unit(angle));
    }
    Scalar one_plus = power(1);
    one_plus.re() += Real(1L, prec);
    mu_ = one_plus.abs();
}

const Scalar& Rotation::power(int k) const
{
    if (k < -cap_ || k > cap_) {
        throw std::out_of_range("lambda power " + std::to_string(k) + " beyond cache cap " + std::to_string(cap_));
    }
    return powers_[static_cast<std::size_t>(k + cap_)];
}

Rotation make_rotation(const Real& theta, double c, double tau, int power_cap, int resonance_cap)
{
    const int prec = theta.precision();
    const Real two_pi = ldexp(Real::pi(prec), 1);
    if (!(theta.sign() > 0 && theta < two_pi)) {
        throw std::invalid_argument("theta must lie in (0, 2 pi)");
    }
    if (!(c > 0.0 && c < 1.0)) {
        throw std::invalid_argument("Diophantine constant c must lie in (0, 1)");
    }
    if (!(tau > 0.0)) {
        throw std::invalid_argument("Diophantine exponent tau must be positive");
    }
    if (power_cap < 1) {
        throw std::invalid_argument("power cap must be at least 1");
    }
    if (resonance_cap <= 0) {
        resonance_cap = power_cap;
    }
    const double tol = zero_tolerance(prec);
    const Real half_theta = ldexp(theta, -1);
    for (long k = 1; k <= resonance_cap; ++k) {
        Real s = sin(half_theta * Real(k, prec));
        double gap = 2.0 * std::fabs(s.to_double());
        if (gap < tol) {
            throw ResonantRotation("lambda^" + std::to_string(k) + " = 1 within zero tolerance (rational rotation)");
        }
    }
    return Rotation(theta, c, tau, power_cap);
}

Real golden_angle(int precision_bits)
{
    Real five(5L, precision_bits);
    Real one(1L, precision_bits);
    return Real::pi(precision_bits) * (sqrt(five) - one);
}

double diophantine_margin(const Rotation& rot, long k_max)
{
    if (k_max < 1) {
        throw std::invalid_argument("k_max must be at least 1");
    }
    const int prec = rot.precision();
    const Real half_theta = ldexp(rot.theta(), -1);
    double best = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= k_max; ++k) {
        double gap = 2.0 * std::fabs(sin(half_theta * Real(k, prec)).to_double());
        best = std::min(best, gap * std::pow(static_cast<double>(k), rot.tau()));
    }
    return best;
}

} // namespace linbill
