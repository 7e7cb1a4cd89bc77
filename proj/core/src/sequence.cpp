#include "fockcis/sequence.hpp"

#include "fockcis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace fockcis
{

namespace
{

constexpr std::int64_t kMaxJointPeriod = 1 << 16;

std::int64_t checked_lcm(std::int64_t a, std::int64_t b)
{
    const std::int64_t l = std::lcm(a, b);
    if (l > kMaxJointPeriod)
        throw DomainError("joint period of delta and theta exceeds " + std::to_string(kMaxJointPeriod));
    return l;
}

std::int64_t ceil_int(double x)
{
    return static_cast<std::int64_t>(std::ceil(x));
}

struct TailFit
{
    std::vector<double> right;
    std::vector<double> left;
};

// Reads the P-periodic tail rules of a sequence that is known to be tail-periodic
// outside [core_lo, core_hi), verifying one extra period on each side.
TailFit read_tails(const std::vector<double>& seq, std::int64_t seq_lo, std::int64_t core_lo, std::int64_t core_hi,
                   std::int64_t period, Side side)
{
    auto at = [&](std::int64_t j) { return seq.at(static_cast<std::size_t>(j - seq_lo)); };
    TailFit fit;
    fit.right.assign(static_cast<std::size_t>(period), 0.0);
    for (std::int64_t j = core_hi; j < core_hi + period; ++j)
        fit.right[static_cast<std::size_t>(floor_mod(j, period))] = at(j);
    for (std::int64_t j = core_hi + period; j < core_hi + 2 * period; ++j)
        if (at(j) != fit.right[static_cast<std::size_t>(floor_mod(j, period))])
            throw NumericError("re-enumeration did not settle into a periodic right tail");
    if (side == Side::OneSided)
    {
        fit.left = fit.right;
        return fit;
    }
    fit.left.assign(static_cast<std::size_t>(period), 0.0);
    for (std::int64_t j = core_lo - period; j < core_lo; ++j)
        fit.left[static_cast<std::size_t>(floor_mod(j, period))] = at(j);
    for (std::int64_t j = core_lo - 2 * period; j < core_lo - period; ++j)
        if (at(j) != fit.left[static_cast<std::size_t>(floor_mod(j, period))])
            throw NumericError("re-enumeration did not settle into a periodic left tail");
    return fit;
}

TailedSpec rebuild_impl(const std::vector<double>& seq, std::int64_t seq_lo, std::int64_t core_lo, std::int64_t core_hi,
                   std::int64_t period, TailedSpec::Kind hint, Side side)
{
    const TailFit tails = read_tails(seq, seq_lo, core_lo, core_hi, period, side);
    auto at = [&](std::int64_t j) { return seq.at(static_cast<std::size_t>(j - seq_lo)); };
    const std::int64_t first = side == Side::OneSided ? std::max<std::int64_t>(core_lo, 0) : core_lo;

    if (hint == TailedSpec::Kind::Table)
    {
        const bool const_tails =
            std::all_of(tails.right.begin(), tails.right.end(), [&](double v) { return v == tails.right[0]; }) &&
            std::all_of(tails.left.begin(), tails.left.end(), [&](double v) { return v == tails.left[0]; });
        if (!const_tails)
            throw NumericError("re-enumerated table does not have constant tails");
        TailedSpec::Overrides entries;
        for (std::int64_t j = first; j < core_hi; ++j)
        {
            const double rule = j < 0 ? tails.left[0] : tails.right[0];
            if (at(j) != rule)
                entries.emplace(j, at(j));
        }
        return TailedSpec::table(std::move(entries), tails.right[0], tails.left[0]);
    }

    if (tails.left != tails.right)
        throw NumericError("re-enumeration produced different left and right periodic tails");
    TailedSpec::Overrides overrides;
    for (std::int64_t j = first; j < core_hi; ++j)
    {
        const double rule = tails.right[static_cast<std::size_t>(floor_mod(j, period))];
        if (at(j) != rule)
            overrides.emplace(j, at(j));
    }
    TailedSpec out = TailedSpec::periodic(tails.right, std::move(overrides)).simplified();
    if (hint == TailedSpec::Kind::Constant && out.period() == 1 && out.overrides().empty())
        return TailedSpec::constant(out.constant_value());
    return out;
}

struct SortedNode
{
    double key;
    std::int64_t index;
    double delta;
    double theta;
};

// Sorts the nodes of a wide window by modulus and re-reads delta/theta in the new order.
//
// With |delta| <= D, every node with key k + delta_k strictly inside
// (lo + D, hi - D) has all of its order statistics inside the window, and its
// canonical index is lo + (position in the sorted window). For one-sided
// sequences the left edge is exact.
std::pair<TailedSpec, TailedSpec> reenumerate(const TailedSpec& delta, const TailedSpec& theta, Side side)
{
    const double sup = delta.sup_abs(side);
    const std::int64_t period = checked_lcm(delta.period(), theta.period());
    const std::int64_t a = std::min(delta.core_begin(), theta.core_begin());
    const std::int64_t b = std::max(delta.core_end(), theta.core_end());
    const std::int64_t margin = detail::reenumeration_margin(sup, period);

    const std::int64_t lo = side == Side::OneSided ? 0 : a - 3 * margin;
    const std::int64_t hi = b + 3 * margin;

    std::vector<SortedNode> nodes;
    nodes.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t k = lo; k < hi; ++k)
    {
        const double d = delta.at(k);
        nodes.push_back({static_cast<double>(k) + d, k, d, theta.at(k)});
    }
    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const SortedNode& x, const SortedNode& y) { return x.key < y.key; });

    std::vector<double> new_delta(nodes.size());
    std::vector<double> new_theta(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        const std::int64_t j = lo + static_cast<std::int64_t>(i);
        new_delta[i] = nodes[i].delta + static_cast<double>(nodes[i].index - j);
        new_theta[i] = nodes[i].theta;
    }

    const std::int64_t core_lo = side == Side::OneSided ? 0 : a - margin;
    const std::int64_t core_hi = b + margin;
    return {rebuild_impl(new_delta, lo, core_lo, core_hi, period, delta.kind(), side),
            rebuild_impl(new_theta, lo, core_lo, core_hi, period, theta.kind(), side)};
}

} // namespace

namespace detail
{

TailedSpec fit_tailed(const std::vector<double>& seq, std::int64_t seq_lo, std::int64_t core_lo,
                      std::int64_t core_hi, std::int64_t period, TailedSpec::Kind hint, Side side)
{
    return rebuild_impl(seq, seq_lo, core_lo, core_hi, period, hint, side);
}

std::int64_t reenumeration_margin(double sup, std::int64_t period)
{
    const std::int64_t dc = ceil_int(sup);
    return period * (2 * dc + 3) + 2 * dc + 4;
}

} // namespace detail

bool is_modulus_ordered(const TailedSpec& delta, Side side)
{
    const std::int64_t p = delta.period();
    const std::int64_t lo = side == Side::OneSided ? 0 : delta.core_begin() - p - 1;
    const std::int64_t hi = delta.core_end() + p + 1;
    for (std::int64_t k = lo; k < hi; ++k)
    {
        const double here = static_cast<double>(k) + delta.at(k);
        const double next = static_cast<double>(k + 1) + delta.at(k + 1);
        if (next < here)
            return false;
    }
    return true;
}

SequenceSpec::SequenceSpec(TailedSpec delta, TailedSpec theta, SpaceParams space)
    : delta_(std::move(delta)), theta_(std::move(theta)), space_(space)
{}

SequenceSpec SequenceSpec::create(TailedSpec delta, TailedSpec theta, SpaceParams space)
{
    bool canonicalized = false;
    if (!is_modulus_ordered(delta, space.side()))
    {
        auto [d, t] = reenumerate(delta, theta, space.side());
        delta = std::move(d);
        theta = std::move(t);
        canonicalized = true;
        if (!is_modulus_ordered(delta, space.side()))
            throw NumericError("re-enumeration failed to order the nodes by modulus");
    }
    SequenceSpec spec(std::move(delta), std::move(theta), space);
    spec.canonicalized_ = canonicalized;
    spec.sup_delta_ = spec.delta_.sup_abs(space.side());
    spec.joint_period_ = checked_lcm(spec.delta_.period(), spec.theta_.period());
    return spec;
}

std::int64_t SequenceSpec::first_index() const noexcept
{
    return side() == Side::OneSided ? 0 : std::numeric_limits<std::int64_t>::min();
}

std::int64_t SequenceSpec::core_begin() const noexcept
{
    return std::min(delta_.core_begin(), theta_.core_begin());
}

std::int64_t SequenceSpec::core_end() const noexcept
{
    return std::max(delta_.core_end(), theta_.core_end());
}

double node_log_modulus(const SequenceSpec& spec, std::int64_t k)
{
    if (!spec.admissible(k))
        throw IndexDomainError("negative index " + std::to_string(k) + " on a one-sided sequence");
    const SpaceParams& s = spec.space();
    return (static_cast<double>(k) + s.two_over_p() + spec.delta().at(k)) / (2.0 * s.alpha());
}

LogComplex node(const SequenceSpec& spec, std::int64_t k)
{
    return LogComplex::polar_log(node_log_modulus(spec, k), spec.theta().at(k));
}

namespace
{

double phase_chord(const LogComplex& z, const LogComplex& w)
{
    return 2.0 * std::fabs(std::sin(0.5 * (z.phase() - w.phase())));
}

} // namespace

double dlog(const LogComplex& z, const LogComplex& w)
{
    if (z.is_zero() || w.is_zero())
        throw DomainError("dlog is defined on C \\ {0}");
    return std::fabs(z.logmod() - w.logmod()) + phase_chord(z, w);
}

double dlog_plus(const LogComplex& z, const LogComplex& w)
{
    if (z.is_zero() || w.is_zero())
    {
        return abs_difference(z, w).abs();
    }
    const bool z_out = z.logmod() >= 0.0;
    const bool w_out = w.logmod() >= 0.0;
    if (z_out && w_out)
        return dlog(z, w);
    const double euclid = abs_difference(z, w).abs();
    if (!z_out && !w_out)
        return euclid;
    return std::max(euclid, dlog(z, w));
}

namespace
{

// Index whose unperturbed modulus is closest to |z|, clamped to the admissible set.
std::int64_t central_index(const SequenceSpec& spec, const LogComplex& z)
{
    const SpaceParams& s = spec.space();
    const double kc = std::round(2.0 * s.alpha() * z.logmod() - s.two_over_p());
    const double lim = 9.0e15;
    std::int64_t k = static_cast<std::int64_t>(std::clamp(kc, -lim, lim));
    if (spec.side() == Side::OneSided)
        k = std::max<std::int64_t>(k, 0);
    return k;
}

// log-modulus bounds for lambda_k from |delta_k| <= D.
double log_modulus_lower(const SequenceSpec& spec, std::int64_t k)
{
    const SpaceParams& s = spec.space();
    return (static_cast<double>(k) + s.two_over_p() - spec.sup_delta()) / (2.0 * s.alpha());
}

double log_modulus_upper(const SequenceSpec& spec, std::int64_t k)
{
    const SpaceParams& s = spec.space();
    return (static_cast<double>(k) + s.two_over_p() + spec.sup_delta()) / (2.0 * s.alpha());
}

// log(e^a - e^b) for a > b, else -inf.
double log_sub_exp(double a, double b)
{
    if (!(a > b))
        return -std::numeric_limits<double>::infinity();
    return a + std::log(-std::expm1(b - a));
}

} // namespace

NearestNode dist_to_sequence(const SequenceSpec& spec, const LogComplex& z)
{
    if (z.is_zero())
        throw DomainError("dist_to_sequence needs a nonzero point");
    const double lz = z.logmod();
    const std::int64_t kc = central_index(spec, z);

    NearestNode best{abs_difference(z, node(spec, kc)), kc};
    auto consider = [&](std::int64_t k) {
        const LogComplex d = abs_difference(z, node(spec, k));
        if (d.logmod() < best.distance.logmod() || (d.logmod() == best.distance.logmod() && k < best.index))
            best = {d, k};
    };

    // Upward: |z - lambda_k| >= |lambda_k| - |z|, increasing in k.
    for (std::int64_t k = kc + 1;; ++k)
    {
        if (log_sub_exp(log_modulus_lower(spec, k), lz) > best.distance.logmod())
            break;
        consider(k);
    }
    // Downward: |z - lambda_k| >= |z| - |lambda_k|, increasing as k decreases.
    constexpr double kResolution = 40.0;
    for (std::int64_t k = kc - 1; spec.admissible(k); --k)
    {
        const double upper = log_modulus_upper(spec, k);
        if (log_sub_exp(lz, upper) > best.distance.logmod())
            break;
        if (upper < lz - kResolution)
            break;
        consider(k);
    }
    return best;
}

std::int64_t nearest_dlog_index(const SequenceSpec& spec, const LogComplex& z)
{
    if (z.is_zero())
        throw DomainError("nearest_dlog_index needs a nonzero point");
    const double lz = z.logmod();
    const std::int64_t kc = central_index(spec, z);
    std::int64_t best_k = kc;
    double best = dlog(z, node(spec, kc));
    auto consider = [&](std::int64_t k) {
        const double d = dlog(z, node(spec, k));
        if (d < best || (d == best && k < best_k))
        {
            best = d;
            best_k = k;
        }
    };
    for (std::int64_t k = kc + 1; log_modulus_lower(spec, k) - lz <= best; ++k)
        consider(k);
    for (std::int64_t k = kc - 1; spec.admissible(k) && lz - log_modulus_upper(spec, k) <= best; --k)
        consider(k);
    return best_k;
}

double separation_constant(const SequenceSpec& spec)
{
    const bool one = spec.side() == Side::OneSided;
    auto metric = [&](const LogComplex& x, const LogComplex& y) { return one ? dlog_plus(x, y) : dlog(x, y); };

    const std::int64_t period = spec.joint_period();
    const std::int64_t a = spec.core_begin();
    const std::int64_t b = spec.core_end();
    const double sup = spec.sup_delta();
    const double two_alpha = 2.0 * spec.space().alpha();

    // Adjacent pairs bound the infimum from above and fix the pair-distance cutoff.
    double best = std::numeric_limits<double>::infinity();
    const std::int64_t adj_lo = one ? 0 : a - period - 1;
    for (std::int64_t j = adj_lo; j <= b + period; ++j)
        best = std::min(best, metric(node(spec, j), node(spec, j + 1)));
    if (best == 0.0)
        return 0.0;

    // Pairs further apart than reach differ in log-modulus by at least (d - 2D)/(2 alpha) > best.
    const std::int64_t reach = ceil_int(two_alpha * best + 2.0 * sup) + 1;
    const std::int64_t lo = one ? 0 : a - reach - period - 1;
    const std::int64_t hi = b + period + 1;
    for (std::int64_t j = lo; j < hi; ++j)
    {
        const LogComplex zj = node(spec, j);
        for (std::int64_t d = 1; d <= reach; ++d)
            best = std::min(best, metric(zj, node(spec, j + d)));
    }

    // Inside the unit disc the Euclidean branch has no log-modulus cutoff: all pairs there.
    if (one)
    {
        std::vector<LogComplex> inner;
        for (std::int64_t k = 0; node_log_modulus(spec, k) < 0.0; ++k)
            inner.push_back(node(spec, k));
        for (std::size_t i = 0; i < inner.size(); ++i)
            for (std::size_t j = i + 1; j < inner.size(); ++j)
                best = std::min(best, metric(inner[i], inner[j]));
    }
    return best;
}

bool has_coincident_nodes(const SequenceSpec& spec)
{
    return separation_constant(spec) == 0.0;
}

} // namespace fockcis
