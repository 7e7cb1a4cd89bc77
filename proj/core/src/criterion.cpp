#include "fockcis/criterion.hpp"

#include "fockcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fockcis
{

std::string_view to_string(Decision d) noexcept
{
    switch (d)
    {
    case Decision::Yes:
        return "yes";
    case Decision::No:
        return "no";
    case Decision::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(Failure f) noexcept
{
    switch (f)
    {
    case Failure::Separation:
        return "SEPARATION";
    case Failure::Boundedness:
        return "BOUNDEDNESS";
    case Failure::Window:
        return "WINDOW";
    }
    return "";
}

nlohmann::json to_json(const Verdict& v)
{
    nlohmann::json out;
    out["decision"] = std::string(to_string(v.decision));
    out["sep_const"] = v.sep_const;
    out["sup_delta"] = v.sup_delta;
    if (v.window_N)
        out["N"] = *v.window_N;
    if (v.epsilon)
        out["epsilon"] = *v.epsilon;
    if (v.shift_m)
        out["shift_m"] = *v.shift_m;
    out["failures"] = nlohmann::json::array();
    for (Failure f : v.failures)
        out["failures"].push_back(std::string(to_string(f)));
    return out;
}

std::pair<bool, double> check_bounded(const SequenceSpec& spec)
{
    return {std::isfinite(spec.sup_delta()), spec.sup_delta()};
}

namespace
{

// sup |window average| of delta over starts in [n_lo, n_hi).
double window_sup_over(const TailedSpec& delta, std::int64_t N, std::int64_t n_lo, std::int64_t n_hi)
{
    // Prefix sums of delta over [n_lo, n_hi + N), compensated.
    const std::int64_t len = n_hi - n_lo + N;
    std::vector<double> prefix(static_cast<std::size_t>(len + 1), 0.0);
    CompensatedSum acc;
    for (std::int64_t i = 0; i < len; ++i)
    {
        acc.add(delta.at(n_lo + i));
        prefix[static_cast<std::size_t>(i + 1)] = acc.value();
    }
    double best = 0.0;
    const double inv = 1.0 / static_cast<double>(N);
    for (std::int64_t n = n_lo; n < n_hi; ++n)
    {
        const auto i = static_cast<std::size_t>(n - n_lo);
        double s;
        if (N <= 64)
        {
            CompensatedSum w;
            for (std::int64_t j = n; j < n + N; ++j)
                w.add(delta.at(j));
            s = w.value();
        }
        else
        {
            s = prefix[i + static_cast<std::size_t>(N)] - prefix[i];
        }
        best = std::max(best, std::fabs(s * inv));
    }
    return best;
}

double window_sup_of(const TailedSpec& delta, Side side, std::int64_t N)
{
    if (N < 1)
        throw DomainError("window length must be positive");
    const std::int64_t P = delta.period();
    const std::int64_t a = delta.core_begin();
    const std::int64_t b = delta.core_end();
    // Windows fully inside a tail repeat with the period; every other window meets [a, b).
    const std::int64_t n_lo = side == Side::OneSided ? 0 : a - N - P;
    const std::int64_t n_hi = b + P;
    return window_sup_over(delta, N, n_lo, n_hi);
}

// Largest |partial sum of (v_j - mean)| over runs shorter than a period.
double periodic_deviation(const TailedSpec& delta, double mean)
{
    const std::int64_t P = delta.period();
    double worst = 0.0;
    for (std::int64_t r = 0; r < P; ++r)
    {
        CompensatedSum s;
        for (std::int64_t len = 1; len < P; ++len)
        {
            s.add(delta.values()[static_cast<std::size_t>(floor_mod(r + len - 1, P))] - mean);
            worst = std::max(worst, std::fabs(s.value()));
        }
    }
    return worst;
}

std::int64_t smallest_window(const TailedSpec& delta, Side side, double eps)
{
    const double target = 0.5 - eps;
    // Window averages deviate from the tail means by at most (2 dev + sum |override - rule|) / N.
    double dev = 0.0;
    if (delta.kind() == TailedSpec::Kind::Periodic)
        dev = periodic_deviation(delta, delta.right_tail_mean());
    CompensatedSum excess;
    for (const auto& [k, v] : delta.overrides())
    {
        if (side == Side::OneSided && k < 0)
            continue;
        excess.add(std::fabs(v - delta.rule(k)));
    }
    const double budget = 2.0 * dev + excess.value();
    const double bound = std::ceil(budget / eps) + 1.0;
    const std::int64_t n_max = bound > 1e9 ? 1000000000 : std::max<std::int64_t>(1, static_cast<std::int64_t>(bound));

    constexpr std::int64_t kLinear = 2048;
    for (std::int64_t N = 1; N <= std::min(n_max, kLinear); ++N)
        if (window_sup_of(delta, side, N) <= target)
            return N;
    for (std::int64_t N = std::max(n_max, kLinear + 1);; N *= 2)
    {
        if (window_sup_of(delta, side, N) <= target)
            return N;
        if (N > (std::int64_t{1} << 40))
            throw NumericError("no certified window length found");
    }
}

} // namespace

double window_sup(const SequenceSpec& spec, std::int64_t N)
{
    return window_sup_of(spec.delta(), spec.side(), N);
}

std::vector<std::int64_t> admissible_shifts(const SequenceSpec& spec)
{
    std::vector<std::int64_t> out;
    if (spec.side() != Side::TwoSided)
        return out;
    const double mu_r = spec.delta().right_tail_mean();
    const double mu_l = spec.delta().left_tail_mean();
    const auto reach = static_cast<std::int64_t>(std::ceil(std::max(std::fabs(mu_r), std::fabs(mu_l)))) + 1;
    for (std::int64_t m = -reach; m <= reach; ++m)
    {
        const double dm = static_cast<double>(m);
        if (std::max(std::fabs(mu_l + dm), std::fabs(mu_r + dm)) < 0.5)
            out.push_back(m);
    }
    return out;
}

WindowCondition check_condition_iii(const SequenceSpec& spec)
{
    WindowCondition out;
    if (spec.side() == Side::OneSided)
    {
        const double mu = spec.delta().right_tail_mean();
        if (!(std::fabs(mu) < 0.5))
            return out;
        out.epsilon = (0.5 - std::fabs(mu)) / 2.0;
        out.N = smallest_window(spec.delta(), Side::OneSided, out.epsilon);
        out.holds = true;
        return out;
    }

    const auto shifts = admissible_shifts(spec);
    if (shifts.empty())
        return out;
    const std::int64_t m = shifts.front();
    const SequenceSpec shifted = shift_enumeration(spec, m);
    const double worst =
        std::max(std::fabs(shifted.delta().left_tail_mean()), std::fabs(shifted.delta().right_tail_mean()));
    if (!(worst < 0.5))
        return out;
    out.epsilon = (0.5 - worst) / 2.0;
    out.N = smallest_window(shifted.delta(), Side::TwoSided, out.epsilon);
    out.shift_m = m;
    out.holds = true;
    return out;
}

Verdict decide_cis(const SequenceSpec& spec)
{
    Verdict v;
    v.sep_const = separation_constant(spec);
    const auto [bounded, sup] = check_bounded(spec);
    v.sup_delta = sup;
    if (v.sep_const == 0.0)
        v.failures.push_back(Failure::Separation);
    if (!bounded)
        v.failures.push_back(Failure::Boundedness);
    const WindowCondition w = check_condition_iii(spec);
    if (w.holds)
    {
        v.window_N = w.N;
        v.epsilon = w.epsilon;
        v.shift_m = w.shift_m;
    }
    else
    {
        v.failures.push_back(Failure::Window);
    }
    v.decision = v.failures.empty() ? Decision::Yes : Decision::No;
    return v;
}

SequenceSpec shift_enumeration(const SequenceSpec& spec, std::int64_t m)
{
    if (spec.side() != Side::TwoSided)
        throw UnsupportedSideError("re-enumeration shifts are defined for two-sided sequences only");
    if (m == 0)
        return spec;
    return SequenceSpec::create(spec.delta().shifted(m, static_cast<double>(m)), spec.theta().shifted(m, 0.0),
                                spec.space());
}

SequenceSpec reindex_for_exponent(const SequenceSpec& spec, double p_new)
{
    const SpaceParams space = spec.space().with_p(p_new);
    const double add = spec.space().two_over_p() - space.two_over_p();
    return SequenceSpec::create(spec.delta().shifted(0, add), spec.theta(), space);
}

SequenceSpec working_enumeration(const SequenceSpec& spec)
{
    if (spec.side() != Side::TwoSided)
        return spec;
    const auto shifts = admissible_shifts(spec);
    if (shifts.empty() || shifts.front() == 0)
        return spec;
    return shift_enumeration(spec, shifts.front());
}

} // namespace fockcis
