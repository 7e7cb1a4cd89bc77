#include "fockcis/products.hpp"

#include "fockcis/errors.hpp"

#include <cmath>
#include <numbers>

namespace fockcis
{

void TruncationPolicy::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3))
        throw DomainError("rel_tol must lie in (0, 1e-3]");
    if (hard_cap < 1)
        throw DomainError("hard_cap must be positive");
}

double weight_phi(const SpaceParams& space, const LogComplex& z)
{
    if (z.is_zero())
        throw DomainError("weight of zero");
    const double l = space.side() == Side::OneSided ? std::max(z.logmod(), 0.0) : z.logmod();
    return space.alpha() * l * l;
}

namespace
{

constexpr double kPi = std::numbers::pi;

struct Accumulator
{
    CompensatedSum logmod;
    CompensatedSum phase;
    bool zero = false;
    std::int64_t factors = 0;

    void multiply(const LogComplex& f)
    {
        ++factors;
        if (f.is_zero())
        {
            zero = true;
            return;
        }
        logmod.add(f.logmod());
        phase.add(f.phase());
    }

    LogComplex value() const
    {
        if (zero)
            return {};
        return LogComplex::polar_log(logmod.value(), phase.value());
    }
};

// r / ((1 - q)(1 - r)) for r = e^{log_r}; inf when r >= 1.
double geometric_tail(double log_r, double q)
{
    if (!(log_r < 0.0))
        return std::numeric_limits<double>::infinity();
    const double r = std::exp(log_r);
    return r / ((1.0 - q) * -std::expm1(log_r));
}

double log_lower(const SequenceSpec& spec, std::int64_t k)
{
    const SpaceParams& s = spec.space();
    return (static_cast<double>(k) + s.two_over_p() - spec.sup_delta()) / (2.0 * s.alpha());
}

double log_upper(const SequenceSpec& spec, std::int64_t k)
{
    const SpaceParams& s = spec.space();
    return (static_cast<double>(k) + s.two_over_p() + spec.sup_delta()) / (2.0 * s.alpha());
}

} // namespace

ProductEvaluation evaluate_product(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol,
                                   std::optional<std::int64_t> skip)
{
    pol.validate();
    if (z.is_zero())
        throw DomainError("canonical product evaluated at 0");
    const bool two = spec.side() == Side::TwoSided;
    const double q = std::exp(-1.0 / (2.0 * spec.space().alpha()));
    const double tol = two ? 0.5 * pol.rel_tol : pol.rel_tol;
    const double lz = z.logmod();
    const double pz = z.phase();

    Accumulator acc;
    double bound = 0.0;

    // Right tail: 1 - z/lambda_k, k >= 0.
    double right = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0;; ++k)
    {
        right = geometric_tail(lz - log_lower(spec, k), q);
        if (right < tol)
            break;
        if (k >= pol.hard_cap)
            throw TruncationError("canonical product: right tail not certified within hard_cap factors", right);
        if (skip && *skip == k)
            continue;
        const LogComplex lam = node(spec, k);
        acc.multiply(one_plus(LogComplex::polar_log(lz - lam.logmod(), pz - lam.phase() + kPi)));
    }
    bound += right;

    if (two)
    {
        // Left tail: 1 - lambda_{-m}/z, m >= 1.
        double left = std::numeric_limits<double>::infinity();
        for (std::int64_t m = 1;; ++m)
        {
            left = geometric_tail(log_upper(spec, -m) - lz, q);
            if (left < tol)
                break;
            if (m > pol.hard_cap)
                throw TruncationError("canonical product: left tail not certified within hard_cap factors", left);
            if (skip && *skip == -m)
                continue;
            const LogComplex lam = node(spec, -m);
            acc.multiply(one_plus(LogComplex::polar_log(lam.logmod() - lz, lam.phase() - pz + kPi)));
        }
        bound += left;
    }
    return {acc.value(), bound, acc.factors};
}

LogComplex canonical_product(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol)
{
    return evaluate_product(spec, z, pol).value;
}

LogComplex product_derivative_at_node(const SequenceSpec& spec, std::int64_t k, const TruncationPolicy& pol)
{
    const LogComplex lam = node(spec, k);
    const LogComplex rest = evaluate_product(spec, lam, pol, k).value;
    if (rest.is_zero())
        throw DegenerateSequenceError("node " + std::to_string(k) + " coincides with another node");
    // k >= 0: d/dz (1 - z/lambda) = -1/lambda;  k < 0: d/dz (1 - lambda/z) = lambda/z^2 = 1/lambda at z = lambda.
    const LogComplex d = lam.inverse();
    return k >= 0 ? -(d * rest) : d * rest;
}

double coarse_log_comparator(const SequenceSpec& spec, const LogComplex& z)
{
    const std::int64_t n = nearest_dlog_index(spec, z);
    const LogComplex lam_n = node(spec, n);
    const LogComplex d = abs_difference(z, lam_n);
    if (d.is_zero())
        throw DomainError("comparator evaluated at a node");
    CompensatedSum s;
    s.add(d.logmod());
    s.add(-lam_n.logmod());
    const double lz = z.logmod();
    if (n >= 0)
    {
        for (std::int64_t k = 0; k < n; ++k)
            s.add(lz - node_log_modulus(spec, k));
    }
    else
    {
        for (std::int64_t j = n + 1; j < 0; ++j)
            s.add(node_log_modulus(spec, j) - lz);
    }
    return s.value();
}

double fine_log_comparator(const SequenceSpec& spec, const LogComplex& z)
{
    const std::int64_t n = nearest_dlog_index(spec, z);
    const SpaceParams& space = spec.space();
    const NearestNode nn = dist_to_sequence(spec, z);
    if (nn.distance.is_zero())
        throw DomainError("comparator evaluated at a node");

    CompensatedSum mean;
    const std::int64_t first = n >= 0 ? 0 : n;
    const std::int64_t last = n >= 0 ? n + 1 : 0;
    for (std::int64_t k = first; k < last; ++k)
        mean.add(spec.delta().at(k) + space.two_over_p());
    const double a_n = mean.value() / static_cast<double>(last - first);

    const double log_scale = spec.side() == Side::OneSided ? log_add_exp(0.0, z.logmod()) : z.logmod();
    return weight_phi(space, z) + nn.distance.logmod() - (0.5 + a_n) * log_scale;
}

double coarse_estimate_ratio(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol)
{
    const double cmp = coarse_log_comparator(spec, z);
    return std::exp(canonical_product(spec, z, pol).logmod() - cmp);
}

double fine_estimate_ratio(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol)
{
    const double cmp = fine_log_comparator(spec, z);
    return std::exp(canonical_product(spec, z, pol).logmod() - cmp);
}

} // namespace fockcis
