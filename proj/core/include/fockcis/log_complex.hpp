#pragma once

#include <complex>
#include <limits>
#include <numbers>

namespace fockcis
{

/// Reduce an angle into (-pi, pi].
double normalize_phase(double phase) noexcept;

/// Nonzero complex number stored as (log|z|, arg z), or the distinguished ZERO.
///
/// Products and quotients are exact in (logmod, phase) arithmetic up to round-off.
/// Sums factor out the operand of larger modulus, so values like e^{±1000} never
/// pass through a native double.
class LogComplex
{
public:
    /// ZERO.
    constexpr LogComplex() noexcept = default;

    static constexpr LogComplex zero() noexcept { return {}; }
    static LogComplex polar_log(double logmod, double phase) noexcept;
    static LogComplex from_complex(std::complex<double> z) noexcept;
    static LogComplex from_real(double x) noexcept { return from_complex({x, 0.0}); }

    bool is_zero() const noexcept { return zero_; }

    /// log|z|; -inf for ZERO.
    double logmod() const noexcept
    {
        return zero_ ? -std::numeric_limits<double>::infinity() : logmod_;
    }

    /// arg z in (-pi, pi]; 0 for ZERO.
    double phase() const noexcept { return zero_ ? 0.0 : phase_; }

    /// |z| as a double; overflows to inf or underflows to 0 outside the double range.
    double abs() const noexcept;
    std::complex<double> to_complex() const noexcept;

    LogComplex conj() const noexcept;
    LogComplex inverse() const;

    /// |z|^s e^{i s arg z} on the principal branch.
    LogComplex pow(double s) const;

    LogComplex operator-() const noexcept;

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) noexcept;
    friend LogComplex operator/(const LogComplex& a, const LogComplex& b);
    friend LogComplex operator+(const LogComplex& a, const LogComplex& b) noexcept;
    friend LogComplex operator-(const LogComplex& a, const LogComplex& b) noexcept;

    LogComplex& operator*=(const LogComplex& b) noexcept { return *this = *this * b; }
    LogComplex& operator/=(const LogComplex& b) { return *this = *this / b; }
    LogComplex& operator+=(const LogComplex& b) noexcept { return *this = *this + b; }
    LogComplex& operator-=(const LogComplex& b) noexcept { return *this = *this - b; }

    friend bool operator==(const LogComplex& a, const LogComplex& b) noexcept
    {
        if (a.zero_ || b.zero_)
            return a.zero_ == b.zero_;
        return a.logmod_ == b.logmod_ && a.phase_ == b.phase_;
    }

private:
    double logmod_ = 0.0;
    double phase_ = 0.0;
    bool zero_ = true;
};

/// 1 + w, computed without cancellation in |1 + w| for any modulus of w.
LogComplex one_plus(const LogComplex& w) noexcept;

/// log|1 + w| only; cheaper than one_plus when the phase is not needed.
double log_abs_one_plus(const LogComplex& w) noexcept;

/// |z - w| in log form (phase 0), exact ZERO iff z == w.
LogComplex abs_difference(const LogComplex& z, const LogComplex& w) noexcept;

/// log(e^a + e^b) for reals.
double log_add_exp(double a, double b) noexcept;

} // namespace fockcis
