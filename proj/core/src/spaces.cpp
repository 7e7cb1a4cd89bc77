#include "fockcis/spaces.hpp"

#include "fockcis/errors.hpp"
#include "fockcis/parallel.hpp"
#include "fockcis/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fockcis
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of s(|z|): 1 + |z| one-sided, |z| two-sided.
double log_scale(Side side, double logmod)
{
    return side == Side::OneSided ? log_add_exp(0.0, logmod) : logmod;
}

LogComplex one()
{
    return LogComplex::polar_log(0.0, 0.0);
}

} // namespace

double SampleSeq::lp_norm() const
{
    if (space.p_is_infinite())
    {
        double m = 0.0;
        for (const auto& [k, c] : support)
            m = std::max(m, std::abs(c));
        return m;
    }
    CompensatedSum s;
    for (const auto& [k, c] : support)
        s.add(std::pow(std::abs(c), space.p()));
    return std::pow(s.value(), 1.0 / space.p());
}

EvaluableFunction EvaluableFunction::scaled(const LogComplex& s) const
{
    Fn inner = fn_;
    return EvaluableFunction([inner, s](const LogComplex& z) { return s * inner(z); }, domain_);
}

EvaluableFunction constant_function(const LogComplex& c, AnalyticDomain domain)
{
    return EvaluableFunction([c](const LogComplex&) { return c; }, domain);
}

EvaluableFunction monomial(int n)
{
    return EvaluableFunction(
        [n](const LogComplex& z) {
            if (n == 0)
                return one();
            if (z.is_zero())
            {
                if (n < 0)
                    throw DomainError("negative power evaluated at 0");
                return LogComplex::zero();
            }
            return LogComplex::polar_log(n * z.logmod(), n * z.phase());
        },
        n < 0 ? AnalyticDomain::PuncturedPlane : AnalyticDomain::Plane);
}

LogComplex eval_weight(const SpaceParams& space, const LogComplex& lambda)
{
    const double phi = weight_phi(space, lambda);
    return LogComplex::polar_log(space.two_over_p() * log_scale(space.side(), lambda.logmod()) - phi, 0.0);
}

SampleSeq restriction(const SequenceSpec& spec, const EvaluableFunction& f, std::int64_t first, std::int64_t last)
{
    SampleSeq out{{}, spec.space()};
    for (std::int64_t k = first; k < last; ++k)
    {
        const LogComplex lam = node(spec, k);
        LogComplex v;
        try
        {
            v = f(lam);
        }
        catch (const Error& e)
        {
            throw NumericError("evaluation failed at node " + std::to_string(k) + ": " + e.what());
        }
        out.support[k] = (v * eval_weight(spec.space(), lam)).to_complex();
    }
    return out;
}

EvaluableFunction biorthogonal(const SequenceSpec& spec, std::int64_t k, const TruncationPolicy& pol)
{
    const LogComplex lam = node(spec, k);
    const LogComplex denom = evaluate_product(spec, lam, pol, k).value;
    if (denom.is_zero())
        throw DegenerateSequenceError("node " + std::to_string(k) + " coincides with another node");
    const bool two = spec.side() == Side::TwoSided;
    return EvaluableFunction(
        [spec, k, lam, denom, pol](const LogComplex& z) {
            if (z == lam)
                return one();
            if (z.is_zero())
            {
                if (spec.side() == Side::TwoSided)
                    throw DomainError("two-sided biorthogonal function evaluated at 0");
                return denom.inverse();
            }
            LogComplex v = evaluate_product(spec, z, pol, k).value / denom;
            if (k < 0)
                v = v * lam / z;
            return v;
        },
        two ? AnalyticDomain::PuncturedPlane : AnalyticDomain::Plane);
}

Interpolant interpolate(const SequenceSpec& spec, const SampleSeq& data, const TruncationPolicy& pol)
{
    Verdict verdict = decide_cis(spec);
    std::int64_t m = 0;
    if (spec.side() == Side::TwoSided)
    {
        const auto shifts = admissible_shifts(spec);
        if (!shifts.empty())
            m = shifts.front();
    }
    const SequenceSpec working = m == 0 ? spec : shift_enumeration(spec, m);

    struct Term
    {
        std::int64_t index;
        LogComplex lambda;
        LogComplex value; // c_k / w(lambda_k)
        LogComplex coef;  // value / G'(lambda_k)
    };
    std::vector<Term> terms;
    for (const auto& [k, c] : data.support)
    {
        const std::int64_t j = k - m;
        const LogComplex lam = node(working, j);
        const LogComplex value = LogComplex::from_complex(c) / eval_weight(working.space(), lam);
        if (value.is_zero())
            continue;
        terms.push_back({j, lam, value, value / product_derivative_at_node(working, j, pol)});
    }

    const bool two = spec.side() == Side::TwoSided;
    EvaluableFunction f(
        [working, terms, pol, two](const LogComplex& z) {
            if (terms.empty())
                return LogComplex::zero();
            if (z.is_zero())
            {
                if (two)
                    throw DomainError("two-sided interpolant evaluated at 0");
                // G(0) = 1
                LogComplex s;
                for (const Term& t : terms)
                    s += t.coef / (-t.lambda);
                return s;
            }
            const LogComplex g = canonical_product(working, z, pol);
            if (g.is_zero())
            {
                for (const Term& t : terms)
                    if (t.lambda == z)
                        return t.value;
                return LogComplex::zero();
            }
            LogComplex s;
            for (const Term& t : terms)
                s += t.coef / (z - t.lambda);
            return g * s;
        },
        two ? AnalyticDomain::PuncturedPlane : AnalyticDomain::Plane);

    const bool ok = verdict.decision == Decision::Yes;
    return {std::move(f), std::move(verdict), ok, m};
}

namespace
{

struct Grid
{
    GaussLegendreRule theta;
    GaussLegendreRule t;
};

void check_sample(const LogComplex& v, double t, double theta)
{
    if (!v.is_zero() && !std::isfinite(v.logmod()))
        throw NumericError("non-finite sample at log|z| = " + std::to_string(t) + ", arg z = " + std::to_string(theta));
}

double log_sum_exp(const std::vector<double>& v)
{
    double m = kNegInf;
    for (double x : v)
        m = std::max(m, x);
    if (m == kNegInf)
        return kNegInf;
    CompensatedSum s;
    for (double x : v)
        s.add(std::exp(x - m));
    return m + std::log(s.value());
}

// Log of the integral over one t-panel [a, a + width] of e^{2t} int |f|^p e^{-p phi} dtheta.
double panel_log_integral(const SpaceParams& space, const EvaluableFunction& f, const Grid& grid, double a,
                          double width)
{
    const std::size_t nt = grid.t.nodes.size();
    const std::size_t nth = grid.theta.nodes.size();
    std::vector<double> vals(nt * nth, kNegInf);
    const double p = space.p();
    parallel_for(nt * nth, [&](std::size_t idx) {
        const std::size_t i = idx / nth;
        const std::size_t j = idx % nth;
        const double t = a + 0.5 * width * (grid.t.nodes[i] + 1.0);
        const double th = kPi * grid.theta.nodes[j];
        const LogComplex z = LogComplex::polar_log(t, th);
        const LogComplex v = f(z);
        check_sample(v, t, th);
        if (v.is_zero())
            return;
        const double w = std::log(0.5 * width * grid.t.weights[i] * kPi * grid.theta.weights[j]);
        vals[idx] = 2.0 * t + p * (v.logmod() - weight_phi(space, z)) + w;
    });
    return log_sum_exp(vals);
}

// max over one panel of log|f| - phi, with its location.
struct PanelMax
{
    double value = kNegInf;
    double t = 0.0;
    double theta = 0.0;
};

PanelMax panel_max(const SpaceParams& space, const EvaluableFunction& f, const Grid& grid, double a, double width)
{
    const std::size_t nt = grid.t.nodes.size();
    const std::size_t nth = grid.theta.nodes.size();
    std::vector<double> vals(nt * nth, kNegInf);
    parallel_for(nt * nth, [&](std::size_t idx) {
        const std::size_t i = idx / nth;
        const std::size_t j = idx % nth;
        const double t = a + 0.5 * width * (grid.t.nodes[i] + 1.0);
        const double th = kPi * grid.theta.nodes[j];
        const LogComplex z = LogComplex::polar_log(t, th);
        const LogComplex v = f(z);
        check_sample(v, t, th);
        if (!v.is_zero())
            vals[idx] = v.logmod() - weight_phi(space, z);
    });
    PanelMax best;
    for (std::size_t idx = 0; idx < vals.size(); ++idx)
    {
        if (vals[idx] > best.value)
        {
            best.value = vals[idx];
            best.t = a + 0.5 * width * (grid.t.nodes[idx / nth] + 1.0);
            best.theta = kPi * grid.theta.nodes[idx % nth];
        }
    }
    return best;
}

NormResult sup_norm(const SpaceParams& space, const EvaluableFunction& f, const QuadratureParams& quad,
                    const Grid& grid)
{
    PanelMax best;
    for (int dir : {+1, -1})
    {
        int idle = 0;
        for (int i = dir > 0 ? 0 : -1; idle < 8; i += dir)
        {
            const double a = quad.t_center + i * quad.panel_width;
            if (std::fabs(a - quad.t_center) > quad.t_limit)
                throw NumericError("sup search did not settle within t_limit");
            const PanelMax pm = panel_max(space, f, grid, a, quad.panel_width);
            if (pm.value > best.value)
            {
                best = pm;
                idle = 0;
            }
            else
            {
                ++idle;
            }
        }
    }
    if (best.value == kNegInf)
        return {0.0, 0.0, kNegInf};

    // Coordinate refinement: Brent in t, then in theta, a few sweeps.
    auto value_at = [&](double t, double th) {
        const LogComplex z = LogComplex::polar_log(t, th);
        const LogComplex v = f(z);
        return v.is_zero() ? kNegInf : v.logmod() - weight_phi(space, z);
    };
    const double dt = quad.panel_width / quad.panel_nodes * 2.0;
    const double dth = 2.0 * kPi / quad.theta_nodes * 2.0;
    double t = best.t;
    double th = best.theta;
    double val = best.value;
    for (int sweep = 0; sweep < 3; ++sweep)
    {
        const auto rt = boost::math::tools::brent_find_minima(
            [&](double x) { return -value_at(x, th); }, t - dt, t + dt, 50);
        if (-rt.second > val)
        {
            t = rt.first;
            val = -rt.second;
        }
        const auto rth = boost::math::tools::brent_find_minima(
            [&](double x) { return -value_at(t, x); }, th - dth, th + dth, 50);
        if (-rth.second > val)
        {
            th = rth.first;
            val = -rth.second;
        }
    }
    const double sup = std::exp(val);
    return {sup, sup, val};
}

} // namespace

NormResult norm_fp(const SpaceParams& space, const EvaluableFunction& f, const QuadratureParams& quad)
{
    if (quad.theta_nodes < 1 || quad.panel_nodes < 1 || !(quad.panel_width > 0.0) || !(quad.tail_tol > 0.0))
        throw DomainError("invalid quadrature parameters");
    const Grid grid{gauss_legendre(quad.theta_nodes), gauss_legendre(quad.panel_nodes)};
    if (space.p_is_infinite())
        return sup_norm(space, f, quad, grid);

    std::vector<double> panels;
    double total = kNegInf;
    const double log_tol = std::log(quad.tail_tol);
    for (int dir : {+1, -1})
    {
        int quiet = 0;
        for (int i = dir > 0 ? 0 : -1; quiet < 4; i += dir)
        {
            const double a = quad.t_center + i * quad.panel_width;
            if (std::fabs(a - quad.t_center) > quad.t_limit)
                throw NumericError("quadrature window did not close within t_limit");
            const double v = panel_log_integral(space, f, grid, a, quad.panel_width);
            panels.push_back(v);
            total = log_add_exp(total, v);
            if (v == kNegInf || v < log_tol + total)
                ++quiet;
            else
                quiet = 0;
        }
    }
    const double log_integral = log_sum_exp(panels);
    if (log_integral == kNegInf)
        return {0.0, 0.0, kNegInf};
    return {std::exp(log_integral / space.p()), std::exp(log_integral), log_integral};
}

double eval_bound_ratio(const SpaceParams& space, const EvaluableFunction& f, double normf, const LogComplex& z)
{
    if (!(normf > 0.0))
        throw DomainError("eval_bound_ratio needs a positive norm");
    const LogComplex v = f(z);
    if (v.is_zero())
        return 0.0;
    const double s = space.two_over_p() * log_scale(space.side(), z.logmod());
    return std::exp(v.logmod() + s - weight_phi(space, z) - std::log(normf));
}

WeightSum weight_sum(const SequenceSpec& spec, const LogComplex& z)
{
    if (z.is_zero())
        throw DomainError("weight_sum needs a nonzero point");
    const Side side = spec.side();
    const double lz = z.logmod();
    const double ls_z = log_scale(side, lz);
    const NearestNode nn = dist_to_sequence(spec, z);
    const double ldist = nn.distance.logmod();
    if (!(ldist >= std::log(0.05) + ls_z))
        throw DomainError("weight_sum: point closer to the sequence than 0.05 s(z)");

    auto log_term = [&](std::int64_t k) {
        const LogComplex lam = node(spec, k);
        return ldist + 0.5 * log_scale(side, lam.logmod()) - 0.5 * ls_z - abs_difference(z, lam).logmod();
    };

    const SpaceParams& s = spec.space();
    const double two_alpha = 2.0 * s.alpha();
    const double rho = 1.0 - std::exp(-1.0 / (2.0 * two_alpha));
    std::int64_t kc = static_cast<std::int64_t>(std::llround(std::clamp(two_alpha * lz - s.two_over_p(), -9e15, 9e15)));
    if (side == Side::OneSided)
        kc = std::max<std::int64_t>(kc, 0);

    CompensatedSum sum;
    sum.add(std::exp(log_term(kc)));
    for (std::int64_t k = kc + 1;; ++k)
    {
        const double lower = (static_cast<double>(k) + s.two_over_p() - spec.sup_delta()) / two_alpha;
        if (lower >= 0.0 && lower >= lz + std::log(2.0))
        {
            // |z - lambda| >= |lambda|/2 and s(lambda) <= 2|lambda|.
            const double tail = std::exp(std::log(2.0 * std::sqrt(2.0)) + ldist - 0.5 * ls_z - 0.5 * lower) / rho;
            if (tail < 1e-16 * sum.value())
                break;
        }
        sum.add(std::exp(log_term(k)));
    }
    for (std::int64_t k = kc - 1; spec.admissible(k); --k)
    {
        const double upper = (static_cast<double>(k) + s.two_over_p() + spec.sup_delta()) / two_alpha;
        if (side == Side::TwoSided && upper <= lz - std::log(2.0))
        {
            // |z - lambda| >= |z|/2.
            const double tail = std::exp(std::log(2.0) + ldist - 0.5 * ls_z - lz + 0.5 * upper) / rho;
            if (tail < 1e-16 * sum.value())
                break;
        }
        sum.add(std::exp(log_term(k)));
    }

    WeightSum out;
    out.value = sum.value();
    out.nearest_index = nearest_dlog_index(spec, z);
    out.nearest_term = std::exp(log_term(out.nearest_index));
    return out;
}

} // namespace fockcis
