#pragma once

#include "fockcis/criterion.hpp"
#include "fockcis/products.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <utility>

namespace fockcis
{

/// Finitely supported data (c_k).
struct SampleSeq
{
    std::map<std::int64_t, std::complex<double>> support;
    SpaceParams space;

    /// (sum |c_k|^p)^{1/p}, or max |c_k| for p = inf.
    double lp_norm() const;
};

enum class AnalyticDomain
{
    Plane,          ///< entire
    PuncturedPlane, ///< holomorphic on C \ {0}
};

/// Deterministic callable LogComplex -> LogComplex (ZERO allowed as a value).
/// Captured state is immutable, so copies can be evaluated concurrently.
class EvaluableFunction
{
public:
    using Fn = std::function<LogComplex(const LogComplex&)>;

    EvaluableFunction(Fn fn, AnalyticDomain domain) : fn_(std::move(fn)), domain_(domain) {}

    LogComplex operator()(const LogComplex& z) const { return fn_(z); }
    AnalyticDomain domain() const noexcept { return domain_; }

    /// z -> s f(z).
    EvaluableFunction scaled(const LogComplex& s) const;

private:
    Fn fn_;
    AnalyticDomain domain_;
};

/// z -> c.
EvaluableFunction constant_function(const LogComplex& c, AnalyticDomain domain = AnalyticDomain::Plane);
/// z -> z^n (n < 0 only on the punctured plane).
EvaluableFunction monomial(int n);

/// (1+|lambda|)^{2/p} e^{-phi(lambda)} (one-sided) or |lambda|^{2/p} e^{-phi(lambda)} (two-sided).
LogComplex eval_weight(const SpaceParams& space, const LogComplex& lambda);

/// (f(lambda_k) w(lambda_k)) for k in [first, last). Evaluation failures are rethrown
/// as NumericError naming the index.
SampleSeq restriction(const SequenceSpec& spec, const EvaluableFunction& f, std::int64_t first, std::int64_t last);

/// g_k = G / (G'(lambda_k)(z - lambda_k)), evaluated as P_k(z)/P_k(lambda_k)
/// (times lambda_k/z for k < 0) with P_k the product without the k-th factor, so g_k(lambda_k) = 1.
/// Throws DegenerateSequenceError for coincident nodes.
EvaluableFunction biorthogonal(const SequenceSpec& spec, std::int64_t k, const TruncationPolicy& pol);

struct Interpolant
{
    EvaluableFunction f;
    Verdict verdict;
    bool cis_verified = false;  ///< false: the series was built anyway and the result is flagged
    std::int64_t shift_m = 0;   ///< enumeration shift applied before building the series
};

/// f = sum_k c_k w(lambda_k)^{-1} g_k, indices of `data` in the enumeration of `spec`.
/// Two-sided sequences are re-enumerated by the criterion's shift first.
Interpolant interpolate(const SequenceSpec& spec, const SampleSeq& data, const TruncationPolicy& pol);

struct QuadratureParams
{
    int theta_nodes = 64;
    int panel_nodes = 16;
    double panel_width = 0.5;
    double t_center = 0.0;   ///< first panel starts here (t = log|z|)
    double tail_tol = 1e-14; ///< stop a direction after 4 panels each below tail_tol * running total
    double t_limit = 400.0;  ///< max |t - t_center| before giving up
};

struct NormResult
{
    double norm = 0.0;          ///< ||f||
    double integral = 0.0;      ///< ||f||^p (the sup itself for p = inf); may underflow, see log_integral
    double log_integral = 0.0;  ///< log ||f||^p
};

/// ||f||^p = int |f|^p e^{-p phi} dA in log-polar coordinates; p = inf takes the sup
/// of |f| e^{-phi} over the grid, refined by Brent's method around the best sample.
/// Throws NumericError on non-finite samples or when the window does not close.
NormResult norm_fp(const SpaceParams& space, const EvaluableFunction& f, const QuadratureParams& quad = {});

/// |f(z)| s(z)^{2/p} e^{-phi(z)} / normf with s = 1 + |z| (one-sided) or |z|.
double eval_bound_ratio(const SpaceParams& space, const EvaluableFunction& f, double normf, const LogComplex& z);

struct WeightSum
{
    double value = 0.0;
    double nearest_term = 0.0;
    std::int64_t nearest_index = 0;
};

/// sum_k dist(z, L) s(lambda_k)^{1/2} / (s(z)^{1/2} |z - lambda_k|), s as in eval_bound_ratio.
/// Requires dist(z, L) >= 0.05 s(z); DomainError otherwise.
WeightSum weight_sum(const SequenceSpec& spec, const LogComplex& z);

} // namespace fockcis
