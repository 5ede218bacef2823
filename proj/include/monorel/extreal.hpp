#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "errors.hpp"
#include "tolerances.hpp"

namespace monorel {

/**
 * A value in R union {+inf}.  Minus infinity is deliberately not
 * representable: any computation that would produce it must raise
 * ErrorCode::MinusInfinity at the operation level instead, so an ExtReal
 * in hand is always meaningful as an extended-real convex value.
 */
class ExtReal {
  public:
    ExtReal() : v_(0.0) {}

    ExtReal(double v) : v_(v) {
        if (std::isnan(v))
            raise(ErrorCode::InvalidArgument, "ExtReal from NaN");
        if (v == -std::numeric_limits<double>::infinity())
            raise(ErrorCode::MinusInfinity, "ExtReal cannot hold -inf");
    }

    static ExtReal infinity() {
        return ExtReal(std::numeric_limits<double>::infinity());
    }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_infinite() const { return !is_finite(); }

    /// Finite value; raises if +inf.
    double value() const {
        if (!is_finite())
            raise(ErrorCode::InvalidArgument, "ExtReal::value on +inf");
        return v_;
    }

    /// Raw double, +inf allowed.
    double raw() const { return v_; }

    friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
        return ExtReal(a.v_ + b.v_);
    }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.v_ == b.v_;
    }
    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        return a.v_ < b.v_;
    }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) {
        return a.v_ <= b.v_;
    }
    friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
        if (x.is_finite()) return os << x.v_;
        return os << "+inf";
    }

  private:
    double v_;
};

/// Equality up to scaled tolerance; +inf compares equal only to +inf.
inline bool ext_close(const ExtReal& a, const ExtReal& b, double tol) {
    if (a.is_infinite() || b.is_infinite())
        return a.is_infinite() && b.is_infinite();
    return close(a.value(), b.value(), tol);
}

/// a <= b + tol with +inf dominating everything.
inline bool ext_le(const ExtReal& a, const ExtReal& b, double tol) {
    if (b.is_infinite()) return true;
    if (a.is_infinite()) return false;
    return a.value() <= b.value() + tol * (1.0 + std::abs(b.value()));
}

}  // namespace monorel
