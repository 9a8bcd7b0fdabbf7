// Exact rational arithmetic for plan quantities (durations, taxes, risks,
// makespans, penalties).  Instance data is given in tenths of a unit, so all
// plan-derived values stay exactly representable; comparisons never involve
// a floating tolerance.
#pragma once

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mozeno {

class Ratio {
public:
    constexpr Ratio() : num_(0), den_(1) {}
    constexpr Ratio(std::int64_t n) : num_(n), den_(1) {}
    Ratio(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    static Ratio from_tenths(std::int64_t t) { return Ratio(t, 10); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }

    /// Exact when the value is a multiple of 1/10 (the instance grid).
    std::int64_t tenths() const {
        if ((num_ * 10) % den_ != 0)
            throw std::logic_error("Ratio::tenths: value not on the 0.1 grid");
        return num_ * 10 / den_;
    }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Ratio operator+(const Ratio& a, const Ratio& b) {
        return Ratio(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Ratio operator-(const Ratio& a, const Ratio& b) {
        return Ratio(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Ratio operator*(const Ratio& a, const Ratio& b) {
        return Ratio(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Ratio operator/(const Ratio& a, const Ratio& b) {
        if (b.num_ == 0) throw std::domain_error("Ratio: division by zero");
        return Ratio(a.num_ * b.den_, a.den_ * b.num_);
    }
    Ratio operator-() const { Ratio r; r.num_ = -num_; r.den_ = den_; return r; }

    friend bool operator==(const Ratio& a, const Ratio& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }
    friend bool operator<(const Ratio& a, const Ratio& b) {
        return static_cast<__int128>(a.num_) * b.den_ <
               static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
    friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
    friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }

    /// Shortest exact decimal when the reduced denominator divides a power of
    /// ten, otherwise the reduced fraction "num/den".
    std::string str() const {
        std::int64_t d = den_;
        int tens = 0;
        while (d % 2 == 0) { d /= 2; }
        while (d % 5 == 0) { d /= 5; }
        if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
        std::int64_t scale = 1;
        while (scale % den_ != 0) { scale *= 10; ++tens; }
        std::int64_t scaled = num_ * (scale / den_);
        if (tens == 0) return std::to_string(scaled);
        std::string digits = std::to_string(scaled < 0 ? -scaled : scaled);
        while (static_cast<int>(digits.size()) <= tens)
            digits.insert(digits.begin(), '0');
        digits.insert(digits.end() - tens, '.');
        while (digits.back() == '0') digits.pop_back();
        if (digits.back() == '.') digits.pop_back();
        return (scaled < 0 ? "-" : "") + digits;
    }

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("Ratio: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Ratio min(const Ratio& a, const Ratio& b) { return a < b ? a : b; }
inline Ratio max(const Ratio& a, const Ratio& b) { return a < b ? b : a; }

/// Snap a floating-point input (config/JSON) to the exact 0.1 grid.
/// Rejects values that are not multiples of a tenth.
inline Ratio snap_to_tenths(double v, const char* what) {
    double scaled = v * 10.0;
    double rounded = scaled < 0 ? -static_cast<double>(static_cast<std::int64_t>(-scaled + 0.5))
                                : static_cast<double>(static_cast<std::int64_t>(scaled + 0.5));
    if (scaled > 9e17 || scaled < -9e17 ||
        (scaled - rounded > 1e-6) || (rounded - scaled > 1e-6)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s: value %g is not a multiple of 0.1", what, v);
        throw std::invalid_argument(buf);
    }
    return Ratio::from_tenths(static_cast<std::int64_t>(rounded));
}

} // namespace mozeno
