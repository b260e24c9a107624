#include "distfobs/bigfloat.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace distfobs {

BigFloat::BigFloat(mpfr_prec_t prec) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double value, mpfr_prec_t prec) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
    mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    if (this != &other) mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
    if (mpfr_get_prec(rhs.v_) > mpfr_get_prec(v_)) {
        BigFloat widened(rhs);
        mpfr_add(widened.v_, widened.v_, v_, MPFR_RNDN);
        *this = std::move(widened);
    } else {
        mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
    if (mpfr_get_prec(rhs.v_) > mpfr_get_prec(v_)) {
        BigFloat widened(*this);
        mpfr_set_prec(widened.v_, mpfr_get_prec(rhs.v_));
        mpfr_set(widened.v_, v_, MPFR_RNDN);
        mpfr_sub(widened.v_, widened.v_, rhs.v_, MPFR_RNDN);
        *this = std::move(widened);
    } else {
        mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
    if (mpfr_get_prec(rhs.v_) > mpfr_get_prec(v_)) {
        BigFloat widened(rhs);
        mpfr_mul(widened.v_, widened.v_, v_, MPFR_RNDN);
        *this = std::move(widened);
    } else {
        mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator+=(double rhs) {
    mpfr_add_d(v_, v_, rhs, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(double rhs) {
    mpfr_mul_d(v_, v_, rhs, MPFR_RNDN);
    return *this;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat out(std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
    mpfr_add(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat out(std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
    mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat out(std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)));
    mpfr_mul(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
}

BigFloat operator*(double a, const BigFloat& b) {
    BigFloat out(mpfr_get_prec(b.v_));
    mpfr_mul_d(out.v_, b.v_, a, MPFR_RNDN);
    return out;
}

BigFloat operator-(const BigFloat& a) {
    BigFloat out(mpfr_get_prec(a.v_));
    mpfr_neg(out.v_, a.v_, MPFR_RNDN);
    return out;
}

bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
}

bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
}

BigFloat sqrt(const BigFloat& a) {
    BigFloat out(mpfr_get_prec(a.v_));
    mpfr_sqrt(out.v_, a.v_, MPFR_RNDN);
    return out;
}

BigFloat abs(const BigFloat& a) {
    BigFloat out(mpfr_get_prec(a.v_));
    mpfr_abs(out.v_, a.v_, MPFR_RNDN);
    return out;
}

std::string BigFloat::str(int digits) const {
    std::vector<char> buf(static_cast<size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

BigFloat zero_like(const BigFloat& proto) {
    return BigFloat(proto.precision());
}

}  // namespace distfobs
