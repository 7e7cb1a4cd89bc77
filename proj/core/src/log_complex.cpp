#include "fockcis/log_complex.hpp"

#include "fockcis/errors.hpp"

#include <cmath>

namespace fockcis
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

double normalize_phase(double phase) noexcept
{
    if (phase > -kPi && phase <= kPi)
        return phase;
    double r = std::remainder(phase, kTwoPi);
    if (r <= -kPi)
        r += kTwoPi;
    return r;
}

LogComplex LogComplex::polar_log(double logmod, double phase) noexcept
{
    LogComplex out;
    if (logmod == -std::numeric_limits<double>::infinity())
        return out;
    out.zero_ = false;
    out.logmod_ = logmod;
    out.phase_ = normalize_phase(phase);
    return out;
}

LogComplex LogComplex::from_complex(std::complex<double> z) noexcept
{
    if (z == std::complex<double>{})
        return {};
    return polar_log(std::log(std::abs(z)), std::arg(z));
}

double LogComplex::abs() const noexcept
{
    return zero_ ? 0.0 : std::exp(logmod_);
}

std::complex<double> LogComplex::to_complex() const noexcept
{
    if (zero_)
        return {};
    return std::polar(std::exp(logmod_), phase_);
}

LogComplex LogComplex::conj() const noexcept
{
    if (zero_)
        return {};
    return polar_log(logmod_, -phase_);
}

LogComplex LogComplex::inverse() const
{
    if (zero_)
        throw DomainError("inverse of zero");
    return polar_log(-logmod_, -phase_);
}

LogComplex LogComplex::pow(double s) const
{
    if (zero_)
    {
        if (s > 0.0)
            return {};
        if (s == 0.0)
            return polar_log(0.0, 0.0);
        throw DomainError("negative power of zero");
    }
    return polar_log(s * logmod_, s * phase_);
}

LogComplex LogComplex::operator-() const noexcept
{
    if (zero_)
        return {};
    return polar_log(logmod_, phase_ + kPi);
}

LogComplex operator*(const LogComplex& a, const LogComplex& b) noexcept
{
    if (a.zero_ || b.zero_)
        return {};
    return LogComplex::polar_log(a.logmod_ + b.logmod_, a.phase_ + b.phase_);
}

LogComplex operator/(const LogComplex& a, const LogComplex& b)
{
    if (b.zero_)
        throw DomainError("division by zero");
    if (a.zero_)
        return {};
    return LogComplex::polar_log(a.logmod_ - b.logmod_, a.phase_ - b.phase_);
}

LogComplex operator+(const LogComplex& a, const LogComplex& b) noexcept
{
    if (a.zero_)
        return b;
    if (b.zero_)
        return a;
    const LogComplex& big = a.logmod_ >= b.logmod_ ? a : b;
    const LogComplex& small = a.logmod_ >= b.logmod_ ? b : a;
    const LogComplex ratio = LogComplex::polar_log(small.logmod_ - big.logmod_, small.phase_ - big.phase_);
    return big * one_plus(ratio);
}

LogComplex operator-(const LogComplex& a, const LogComplex& b) noexcept
{
    return a + (-b);
}

namespace
{

// |1 + r e^{i phi}| for r = e^{logr} <= 1, as a log. Returns -inf for an exact zero.
double log_abs_one_plus_small(double logr, double phi) noexcept
{
    const double r = std::exp(logr);
    if (r < 0.5)
        return 0.5 * std::log1p(r * (2.0 * std::cos(phi) + r));
    // |1 + w|^2 = (1 - r)^2 + 4 r cos^2(phi / 2); cos(phi/2) = sin((pi - |phi|) / 2)
    const double one_minus_r = -std::expm1(logr);
    const double c = std::sin(0.5 * (kPi - std::fabs(phi)));
    const double sq = one_minus_r * one_minus_r + 4.0 * r * c * c;
    if (sq == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log(sq);
}

} // namespace

double log_abs_one_plus(const LogComplex& w) noexcept
{
    if (w.is_zero())
        return 0.0;
    const double l = w.logmod();
    if (l <= 0.0)
        return log_abs_one_plus_small(l, w.phase());
    // 1 + w = w (1 + 1/w)
    return l + log_abs_one_plus_small(-l, -w.phase());
}

LogComplex one_plus(const LogComplex& w) noexcept
{
    if (w.is_zero())
        return LogComplex::polar_log(0.0, 0.0);
    const double l = w.logmod();
    const double phi = w.phase();
    if (l <= 0.0)
    {
        const double lm = log_abs_one_plus_small(l, phi);
        if (std::isinf(lm))
            return {};
        const double r = std::exp(l);
        double re = 1.0 + r * std::cos(phi);
        if (r >= 0.5)
        {
            // 1 + r cos(phi) = (1 - r) + 2 r cos^2(phi/2), free of cancellation near w = -1
            const double c = std::sin(0.5 * (kPi - std::fabs(phi)));
            re = -std::expm1(l) + 2.0 * r * c * c;
        }
        return LogComplex::polar_log(lm, std::atan2(r * std::sin(phi), re));
    }
    const LogComplex inv = LogComplex::polar_log(-l, -phi);
    const LogComplex rest = one_plus(inv);
    if (rest.is_zero())
        return {};
    return w * rest;
}

LogComplex abs_difference(const LogComplex& z, const LogComplex& w) noexcept
{
    if (z.is_zero())
        return LogComplex::polar_log(w.logmod(), 0.0);
    if (w.is_zero())
        return LogComplex::polar_log(z.logmod(), 0.0);
    const LogComplex& big = z.logmod() >= w.logmod() ? z : w;
    const LogComplex& small = z.logmod() >= w.logmod() ? w : z;
    // |big - small| = |big| |1 - small/big|
    const LogComplex minus_ratio =
        LogComplex::polar_log(small.logmod() - big.logmod(), small.phase() - big.phase() + kPi);
    const double lm = log_abs_one_plus(minus_ratio);
    if (std::isinf(lm))
        return {};
    return LogComplex::polar_log(big.logmod() + lm, 0.0);
}

double log_add_exp(double a, double b) noexcept
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

} // namespace fockcis
