#pragma once

// Degree-truncated formal power series.
//
// BiSeries holds f(z, zbar) = sum f_{jk} z^j zbar^k over j + k <= max_degree in
// degree-major triangular order; UniSeries holds f(t) = sum c_k t^k.

#include <cstddef>
#include <vector>

#include "linbill/numerics.hpp"

namespace linbill {

class BiSeries {
public:
    BiSeries() : BiSeries(0, kDefaultPrecisionBits) {}
    BiSeries(int max_degree, int precision_bits);

    static BiSeries monomial(int j, int k, const Scalar& coeff, int max_degree);
    static BiSeries constant(const Scalar& value, int max_degree);

    int max_degree() const { return max_degree_; }
    int precision() const { return precision_; }
    std::size_t size() const { return coeffs_.size(); }

    static std::size_t index(int j, int k)
    {
        const auto d = static_cast<std::size_t>(j + k);
        return d * (d + 1) / 2 + static_cast<std::size_t>(k);
    }
    static std::size_t block_begin(int d) { return static_cast<std::size_t>(d) * static_cast<std::size_t>(d + 1) / 2; }

    Scalar& operator()(int j, int k) { return coeffs_[index(j, k)]; }
    const Scalar& operator()(int j, int k) const { return coeffs_[index(j, k)]; }

    /// Checked access; throws std::out_of_range outside the retained range.
    const Scalar& at(int j, int k) const;
    Scalar& at(int j, int k);

    /// Coefficient (j, k), or zero when it lies beyond max_degree.
    Scalar get(int j, int k) const;

    std::vector<Scalar>& data() { return coeffs_; }
    const std::vector<Scalar>& data() const { return coeffs_; }

    /// True when every coefficient of total degree d is exactly zero.
    bool block_is_zero(int d) const;
    bool is_zero() const;

    BiSeries& operator+=(const BiSeries& rhs);
    BiSeries& operator-=(const BiSeries& rhs);
    BiSeries& operator*=(const Scalar& c);
    BiSeries& operator*=(const Real& c);

    BiSeries operator-() const;

private:
    int max_degree_;
    int precision_;
    std::vector<Scalar> coeffs_;
};

BiSeries operator+(BiSeries a, const BiSeries& b);
BiSeries operator-(BiSeries a, const BiSeries& b);
BiSeries operator*(BiSeries a, const Scalar& c);
BiSeries operator*(const Scalar& c, BiSeries a);
BiSeries operator*(BiSeries a, const Real& c);
BiSeries operator*(const Real& c, BiSeries a);

/// acc += c * x, coefficientwise.  Throws DegreeMismatch.
void add_scaled(BiSeries& acc, const BiSeries& x, const Scalar& c);

/// Truncated product.  Throws DegreeMismatch for different max_degree.
BiSeries multiply(const BiSeries& a, const BiSeries& b);
BiSeries operator*(const BiSeries& a, const BiSeries& b);

/// Multiplicative inverse of a series with a nonzero constant term.
BiSeries invert_unit(const BiSeries& a);

/// Re-truncates (or zero-pads) to a new max_degree.
BiSeries resized(const BiSeries& s, int max_degree);

/// Multiplies by z^dj zbar^dk.  Negative exponents divide; throws
/// std::domain_error if a dropped coefficient exceeds zero_tolerance.
BiSeries mul_monomial(const BiSeries& s, int dj, int dk);

enum class ShiftDirection { plus, minus };
enum class Variable { z, zbar };

/// f^+(z, zbar) = f(lambda z, lambda^{-1} zbar), f^-(z, zbar) = f(lambda^{-1} z, lambda zbar).
BiSeries shift(const BiSeries& s, ShiftDirection direction, const Rotation& rot);
BiSeries shift_plus(const BiSeries& s, const Rotation& rot);
BiSeries shift_minus(const BiSeries& s, const Rotation& rot);

/// (f o I)(z, zbar) = f(zbar, z).
BiSeries involution(const BiSeries& s);

/// Formal partial derivative.  The result has max_degree reduced by one.
BiSeries partial(const BiSeries& s, Variable var);

/// Partial derivative re-padded to the input truncation (top degree zero).
BiSeries partial_padded(const BiSeries& s, Variable var);

BiSeries truncate(const BiSeries& s, int M);

/// Smallest total degree carrying a coefficient above tol; max_degree + 1 if none.
int order(const BiSeries& s, double tol);
int order(const BiSeries& s);

/// sum |f_{jk}| rho^{j+k}; for derivatives > 0 the max over all partials up to that order.
Real weighted_norm(const BiSeries& s, const Real& rho, int derivatives = 0);
Real weighted_norm(const BiSeries& s, double rho, int derivatives = 0);

/// max |f_{jk}| over j + k = d.
double degree_sup(const BiSeries& s, int d);
/// max |f_{jk}| over the whole series.
double max_abs(const BiSeries& s);

bool is_symmetric(const BiSeries& s, double tol);
bool is_real(const BiSeries& s, double tol);
bool has_odd_degrees_only(const BiSeries& s, double tol);

// ---------------------------------------------------------------------------

class UniSeries {
public:
    UniSeries() : UniSeries(0, kDefaultPrecisionBits) {}
    UniSeries(int max_degree, int precision_bits);

    int max_degree() const { return max_degree_; }
    int precision() const { return precision_; }

    Scalar& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
    const Scalar& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
    Scalar get(int k) const;

    std::vector<Scalar>& data() { return coeffs_; }
    const std::vector<Scalar>& data() const { return coeffs_; }

    UniSeries& operator+=(const UniSeries& rhs);
    UniSeries& operator-=(const UniSeries& rhs);
    UniSeries& operator*=(const Scalar& c);

private:
    int max_degree_;
    int precision_;
    std::vector<Scalar> coeffs_;
};

UniSeries operator+(UniSeries a, const UniSeries& b);
UniSeries operator-(UniSeries a, const UniSeries& b);
UniSeries operator*(UniSeries a, const Scalar& c);

UniSeries derivative(const UniSeries& f);
UniSeries truncate(const UniSeries& f, int M);
UniSeries resized(const UniSeries& f, int max_degree);
bool is_even(const UniSeries& f, double tol);
/// Smallest k with |c_k| above tol; max_degree + 1 if none.
int order(const UniSeries& f, double tol);
Real weighted_norm(const UniSeries& f, const Real& rho, int derivatives = 0);
Real weighted_norm(const UniSeries& f, double rho, int derivatives = 0);

/// Taylor series of cos t and sin t.
UniSeries cos_series(int max_degree, int precision_bits);
UniSeries sin_series(int max_degree, int precision_bits);

/// sum_n f_n s^n truncated at s.max_degree(), by Horner's rule.  s must have
/// zero constant term (NonzeroConstantTerm otherwise).
BiSeries compose_uni(const UniSeries& f, const BiSeries& s);

/// Powers of a fixed argument s, shared by several compositions f o s.
/// Stores u^n for u = s^2; f o s = F_even(u) + s F_odd(u).
class PowerTable {
public:
    explicit PowerTable(const BiSeries& s);

    const BiSeries& base() const { return s_; }
    /// s^{2n}; zero series once 2n exceeds max_degree / order(s).
    const BiSeries& even_power(int n) const;
    int even_power_count() const { return static_cast<int>(u_.size()); }

    BiSeries compose(const UniSeries& f) const;

private:
    BiSeries s_;
    std::vector<BiSeries> u_;
    BiSeries zero_;
};

} // namespace linbill
