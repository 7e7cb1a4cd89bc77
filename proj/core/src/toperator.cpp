#include "fockcis/toperator.hpp"

#include "fockcis/errors.hpp"
#include "fockcis/parallel.hpp"
#include "fockcis/spaces.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace fockcis
{

namespace
{

// Index of the node whose modulus is closest to e^{(m + 2/p)/(2 alpha)}: minimizes |j + delta_j - m|.
std::int64_t modulus_nearest(const SequenceSpec& spec, std::int64_t m)
{
    const auto reach = static_cast<std::int64_t>(std::ceil(2.0 * spec.sup_delta())) + 1;
    std::int64_t best = m;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t j = m - reach; j <= m + reach; ++j)
    {
        if (!spec.admissible(j))
            continue;
        const double d = std::fabs(static_cast<double>(j - m) + spec.delta().at(j));
        if (d < best_d)
        {
            best_d = d;
            best = j;
        }
    }
    return best;
}

} // namespace

TailedSpec gamma_phase_choice(const SequenceSpec& spec)
{
    const std::int64_t period = spec.joint_period();
    const std::int64_t margin = detail::reenumeration_margin(spec.sup_delta(), period);
    const Side side = spec.side();
    const std::int64_t core_lo = side == Side::OneSided ? 0 : spec.core_begin() - margin;
    const std::int64_t core_hi = spec.core_end() + margin;
    const std::int64_t lo = side == Side::OneSided ? 0 : core_lo - 2 * period;
    const std::int64_t hi = core_hi + 2 * period;
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t m = lo; m < hi; ++m)
        phases.push_back(normalize_phase(node(spec, modulus_nearest(spec, m)).phase() + std::numbers::pi));
    const TailedSpec::Kind hint = spec.theta().kind();
    return detail::fit_tailed(phases, lo, core_lo, core_hi, period, hint, side);
}

LogComplex gamma_node(const SequenceSpec& spec, const TailedSpec& gamma_phases, std::int64_t m)
{
    if (!spec.admissible(m))
        throw IndexDomainError("negative index " + std::to_string(m) + " on a one-sided sequence");
    const SpaceParams& s = spec.space();
    return LogComplex::polar_log((static_cast<double>(m) + s.two_over_p()) / (2.0 * s.alpha()), gamma_phases.at(m));
}

namespace
{

// P_k(lambda_k): the product without its k-th factor, at lambda_k.
LogComplex reduced_product_at_node(const SequenceSpec& spec, std::int64_t k, const TruncationPolicy& pol)
{
    const LogComplex v = evaluate_product(spec, node(spec, k), pol, k).value;
    if (v.is_zero())
        throw DegenerateSequenceError("node " + std::to_string(k) + " coincides with another node");
    return v;
}

// Using g_k = P_k(z)/P_k(lambda_k) (times lambda_k/z for k < 0).
LogComplex entry_from(const SequenceSpec& spec, const TailedSpec& gamma_phases, std::int64_t m, std::int64_t k,
                      const LogComplex& reduced, const TruncationPolicy& pol)
{
    const LogComplex gm = gamma_node(spec, gamma_phases, m);
    const LogComplex lam = node(spec, k);
    if (gm == lam)
        throw DegenerateSequenceError("gamma_" + std::to_string(m) + " is a node");
    const LogComplex pk = evaluate_product(spec, gm, pol, k).value;
    if (pk.is_zero())
        throw DegenerateSequenceError("gamma_" + std::to_string(m) + " is a node");
    LogComplex g = pk / reduced;
    if (k < 0)
        g = g * lam / gm;
    return eval_weight(spec.space(), gm) / eval_weight(spec.space(), lam) * g;
}

} // namespace

LogComplex t_entry(const SequenceSpec& spec, const TailedSpec& gamma_phases, std::int64_t m, std::int64_t k,
                   const TruncationPolicy& pol)
{
    return entry_from(spec, gamma_phases, m, k, reduced_product_at_node(spec, k, pol), pol);
}

double predicted_log_entry(const SequenceSpec& spec, std::int64_t m, std::int64_t k)
{
    const double c = 1.0 / (4.0 * spec.space().alpha());
    if (m > k)
        return c * (-static_cast<double>(m - k) - 2.0 * spec.delta().partial_sum(k, m));
    if (m < k)
        return c * (-static_cast<double>(k - m) + 2.0 * spec.delta().partial_sum(m, k));
    return 0.0;
}

TMatrixSection assemble_section(const SequenceSpec& spec, const TailedSpec& gamma_phases, IndexRange rows,
                                IndexRange cols, const TruncationPolicy& pol)
{
    if (rows.size() <= 0 || cols.size() <= 0)
        throw DomainError("empty section range");
    const auto nr = static_cast<std::size_t>(rows.size());
    const auto nc = static_cast<std::size_t>(cols.size());

    std::vector<LogComplex> reduced(nc);
    parallel_for(nc, [&](std::size_t j) {
        reduced[j] = reduced_product_at_node(spec, cols.begin + static_cast<std::int64_t>(j), pol);
    });

    std::vector<LogComplex> entries(nr * nc);
    std::vector<std::string> failures(nr * nc);
    parallel_for(nr * nc, [&](std::size_t idx) {
        const std::int64_t m = rows.begin + static_cast<std::int64_t>(idx / nc);
        const std::int64_t k = cols.begin + static_cast<std::int64_t>(idx % nc);
        try
        {
            entries[idx] = entry_from(spec, gamma_phases, m, k, reduced[idx % nc], pol);
        }
        catch (const Error& e)
        {
            failures[idx] = "T(" + std::to_string(m) + ", " + std::to_string(k) + "): " + e.what();
        }
    });
    for (const std::string& f : failures)
        if (!f.empty())
            throw NumericError(f);
    return {rows, cols, std::move(entries), spec, gamma_phases, pol};
}

namespace
{

struct LineFit
{
    double slope;
    double offset;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (!(sxx.value() > 0.0))
        throw NumericError("decay fit is degenerate: fewer than two distinct distances");
    const double slope = sxy.value() / sxx.value();
    return {slope, my - slope * mx};
}

} // namespace

DecayFit decay_fit(const TMatrixSection& s)
{
    if (s.rows.size() < 16 || s.cols.size() < 16)
        throw DomainError("decay_fit needs at least a 16 x 16 section");
    std::vector<double> xu, yu, xl, yl;
    for (std::int64_t m = s.rows.begin; m < s.rows.end; ++m)
    {
        for (std::int64_t k = s.cols.begin; k < s.cols.end; ++k)
        {
            const LogComplex& e = s.at(m, k);
            if (m == k || e.is_zero())
                continue;
            if (m < k)
            {
                xu.push_back(static_cast<double>(k - m));
                yu.push_back(e.logmod());
            }
            else
            {
                xl.push_back(static_cast<double>(m - k));
                yl.push_back(e.logmod());
            }
        }
    }
    if (xu.empty() || xl.empty())
        throw NumericError("decay fit is degenerate: an off-diagonal half has no nonzero entries");
    const LineFit up = least_squares(xu, yu);
    const LineFit lo = least_squares(xl, yl);
    return {up.slope, lo.slope, up.offset, lo.offset};
}

std::optional<double> SectionNorms::interpolated(double q) const
{
    if (!(q >= 1.0))
        return std::nullopt;
    if (std::isinf(q))
        return pinf;
    return std::pow(p1, 1.0 / q) * std::pow(pinf, 1.0 - 1.0 / q);
}

SectionNorms section_norms(const TMatrixSection& s)
{
    const auto nr = static_cast<std::size_t>(s.rows.size());
    const auto nc = static_cast<std::size_t>(s.cols.size());
    double top = -std::numeric_limits<double>::infinity();
    for (const LogComplex& e : s.entries)
        top = std::max(top, e.logmod());
    if (top == -std::numeric_limits<double>::infinity())
        return {};

    // Work with A / e^{top} so nothing overflows; scale back at the end.
    std::vector<std::complex<double>> a(nr * nc);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = s.entries[i].is_zero() ? std::complex<double>{}
                                      : std::polar(std::exp(s.entries[i].logmod() - top), s.entries[i].phase());
    const double scale = std::exp(top);

    double p1 = 0.0;
    for (std::size_t j = 0; j < nc; ++j)
    {
        CompensatedSum c;
        for (std::size_t i = 0; i < nr; ++i)
            c.add(std::abs(a[i * nc + j]));
        p1 = std::max(p1, c.value());
    }
    double pinf = 0.0;
    for (std::size_t i = 0; i < nr; ++i)
    {
        CompensatedSum r;
        for (std::size_t j = 0; j < nc; ++j)
            r.add(std::abs(a[i * nc + j]));
        pinf = std::max(pinf, r.value());
    }

    // Fixed-seed generic start: a uniform vector can be orthogonal to the top singular vector
    // when the entries alternate in sign. Raw engine bits keep the result platform independent.
    std::mt19937_64 gen(0x5eed);
    std::vector<std::complex<double>> v(nc);
    double v0 = 0.0;
    for (auto& x : v)
    {
        const double re = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
        const double im = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
        x = {re, im};
        v0 += std::norm(x);
    }
    for (auto& x : v)
        x /= std::sqrt(v0);
    std::vector<std::complex<double>> av(nr), w(nc);
    double sigma2 = 0.0;
    bool converged = false;
    for (int it = 0; it < 10000; ++it)
    {
        for (std::size_t i = 0; i < nr; ++i)
        {
            std::complex<double> acc{};
            for (std::size_t j = 0; j < nc; ++j)
                acc += a[i * nc + j] * v[j];
            av[i] = acc;
        }
        for (std::size_t j = 0; j < nc; ++j)
        {
            std::complex<double> acc{};
            for (std::size_t i = 0; i < nr; ++i)
                acc += std::conj(a[i * nc + j]) * av[i];
            w[j] = acc;
        }
        double norm = 0.0;
        for (const auto& x : w)
            norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm == 0.0)
            return {p1 * scale, 0.0, pinf * scale};
        // Rayleigh quotient v^H A^H A v with |v| = 1.
        double rq = 0.0;
        for (const auto& x : av)
            rq += std::norm(x);
        for (std::size_t j = 0; j < nc; ++j)
            v[j] = w[j] / norm;
        if (it > 0 && std::fabs(rq - sigma2) <= 1e-14 * rq)
        {
            sigma2 = rq;
            converged = true;
            break;
        }
        sigma2 = rq;
    }
    if (!converged)
        throw NumericError("power iteration for the spectral norm did not converge in 10^4 iterations");
    return {p1 * scale, std::sqrt(sigma2) * scale, pinf * scale};
}

double prediction_residual(const TMatrixSection& s)
{
    double worst = 0.0;
    for (std::int64_t m = s.rows.begin; m < s.rows.end; ++m)
        for (std::int64_t k = s.cols.begin; k < s.cols.end; ++k)
            worst = std::max(worst, std::fabs(s.at(m, k).logmod() - predicted_log_entry(s.spec, m, k)));
    return worst;
}

} // namespace fockcis
