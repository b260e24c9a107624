#pragma once

#include <mpfr.h>

#include <string>

namespace distfobs {

// Minimal arbitrary-precision float with value semantics, just rich enough
// for the simulation kernels (ring ops with double coefficients, norms,
// comparisons).  Precision travels with the value; binary ops produce the
// wider of the two operand precisions.  All rounding is to-nearest, so
// results are bit-deterministic.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 53);
    BigFloat(double value, mpfr_prec_t prec);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    BigFloat& operator+=(const BigFloat& rhs);
    BigFloat& operator-=(const BigFloat& rhs);
    BigFloat& operator*=(const BigFloat& rhs);
    BigFloat& operator+=(double rhs);
    BigFloat& operator*=(double rhs);

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(double a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a);

    friend bool operator<(const BigFloat& a, const BigFloat& b);
    friend bool operator==(const BigFloat& a, const BigFloat& b);

    friend BigFloat sqrt(const BigFloat& a);
    friend BigFloat abs(const BigFloat& a);

    std::string str(int digits = 20) const;

private:
    mpfr_t v_;
};

BigFloat zero_like(const BigFloat& proto);

}  // namespace distfobs
