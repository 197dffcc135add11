#pragma once

// Configurable-precision real and complex scalars (MPFR backed) and the
// rotation-number record lambda = e^{i theta}.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "linbill/errors.hpp"

namespace linbill {

inline constexpr int kDefaultPrecisionBits = 256;

/// 2^(-bits/2): the global "numerically zero" threshold.
double zero_tolerance(int precision_bits);

/// Owning wrapper around an mpfr_t.  Every value carries its own precision;
/// binary operations produce the larger of the two operand precisions.
class Real {
public:
    explicit Real(int precision_bits = kDefaultPrecisionBits);
    Real(double value, int precision_bits);
    Real(long value, int precision_bits);

    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    /// Parses a decimal (or "0x" hexadecimal-float) literal.
    static Real parse(std::string_view text, int precision_bits);
    static Real pi(int precision_bits);

    int precision() const { return static_cast<int>(mpfr_get_prec(value_)); }

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    /// Shortest decimal string that reads back to the identical value.
    std::string to_string() const;

    Real& operator+=(const Real& rhs);
    Real& operator-=(const Real& rhs);
    Real& operator*=(const Real& rhs);
    Real& operator/=(const Real& rhs);

    friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
    friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
    friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
    friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
    Real operator-() const;

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);

private:
    mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& x, const Real& y);
Real ldexp(const Real& x, long exponent);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Complex number with Real parts.  This is the coefficient type of every
/// series in the library.
class Scalar {
public:
    explicit Scalar(int precision_bits = kDefaultPrecisionBits) : re_(precision_bits), im_(precision_bits) {}
    Scalar(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Scalar(double re, double im, int precision_bits) : re_(re, precision_bits), im_(im, precision_bits) {}
    explicit Scalar(const Real& re) : re_(re), im_(re.precision()) {}

    static Scalar polar_unit(const Real& angle);

    int precision() const { return re_.precision(); }
    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    Real& re() { return re_; }
    Real& im() { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    Real abs() const;
    double abs_double() const;
    Scalar conj() const { return Scalar(re_, -im_); }

    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator*=(const Real& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator*(Scalar a, const Real& b) { return a *= b; }
    friend Scalar operator*(const Real& b, Scalar a) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    Scalar operator-() const { return Scalar(-re_, -im_); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

private:
    Real re_;
    Real im_;
};

Scalar pow(const Scalar& base, long exponent);
std::ostream& operator<<(std::ostream& os, const Scalar& x);

/// Rotation number record: lambda = e^{i theta} with cached powers.
class Rotation {
public:
    Rotation(Real theta, double c, double tau, int power_cap);

    const Real& theta() const { return theta_; }
    const Scalar& lambda() const { return power(1); }
    double c() const { return c_; }
    double tau() const { return tau_; }
    const Real& mu() const { return mu_; }
    int precision() const { return theta_.precision(); }
    int power_cap() const { return cap_; }

    /// lambda^k for |k| <= power_cap().
    const Scalar& power(int k) const;

private:
    Real theta_;
    double c_;
    double tau_;
    Real mu_;
    int cap_;
    std::vector<Scalar> powers_; // index k + cap_
};

/// Power cache size sufficient for series truncated at max_degree.
int power_cap_for_degree(int max_degree);

/// Builds lambda = e^{i theta}.  Rejects theta if |lambda^k - 1| falls below
/// zero_tolerance for some 1 <= k <= resonance_cap (defaults to the power cap).
Rotation make_rotation(const Real& theta, double c, double tau, int power_cap, int resonance_cap = 0);

/// Golden-ratio angle 2 pi (sqrt 5 - 1) / 2 at the given precision.
Real golden_angle(int precision_bits);

/// min_{1 <= |k| <= k_max} |lambda^k - 1| |k|^tau, evaluated through
/// |lambda^k - 1| = 2 |sin(k theta / 2)|.
double diophantine_margin(const Rotation& rot, long k_max);

} // namespace linbill
