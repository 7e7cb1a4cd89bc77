#pragma once

#include "fockcis/sequence.hpp"

#include <cstdint>
#include <optional>

namespace fockcis
{

/// Truncation of the infinite products. The discarded tails are bounded by the
/// geometric majorant sum_j r q^j / (1 - r q^j) <= r / ((1 - q)(1 - r)) with
/// q = e^{-1/(2 alpha)}, r the largest discarded |z/lambda_k| (or |lambda_k/z|)
/// under |delta_k| <= sup|delta|. Factors are added until that bound is below rel_tol.
struct TruncationPolicy
{
    double rel_tol = 1e-12; ///< absolute bound on the error of log G, in (0, 1e-3]
    std::int64_t hard_cap = 100000; ///< max factors per tail

    /// Throws DomainError when out of range.
    void validate() const;
};

struct ProductEvaluation
{
    LogComplex value;
    double tail_bound = 0.0;   ///< certified bound on |log G - log(partial product)|
    std::int64_t factors = 0;  ///< factors multiplied in
};

/// prod (1 - lambda_{-m}/z) prod (1 - z/lambda_k), optionally skipping index `skip`.
/// Throws TruncationError when hard_cap is reached first.
ProductEvaluation evaluate_product(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol,
                                   std::optional<std::int64_t> skip = std::nullopt);

/// G(z); exact ZERO iff z is a node.
LogComplex canonical_product(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol);

/// G'(lambda_k), with the vanishing factor removed analytically.
/// Throws DegenerateSequenceError when another node coincides with lambda_k.
LogComplex product_derivative_at_node(const SequenceSpec& spec, std::int64_t k, const TruncationPolicy& pol);

/// log of (|z - lambda_n| / |lambda_n|) prod_{k<n} |z/lambda_k|  (n >= 0), or
/// (|z - lambda_n| / |lambda_n|) prod_{n<j<0} |lambda_j/z|  (n < 0), lambda_n dlog-nearest.
double coarse_log_comparator(const SequenceSpec& spec, const LogComplex& z);

/// log of e^{phi(z)} dist(z, Lambda) / (1+|z|)^{1/2 + a_n}, |z| for two-sided sequences,
/// a_n the mean of delta_k + 2/p over k = 0..n (k = n..-1 when n < 0).
double fine_log_comparator(const SequenceSpec& spec, const LogComplex& z);

/// |G(z)| / comparator. Throws DomainError when z is a node.
double coarse_estimate_ratio(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol);
double fine_estimate_ratio(const SequenceSpec& spec, const LogComplex& z, const TruncationPolicy& pol);

/// phi(z): alpha log_+^2|z| (one-sided) or alpha log^2|z| (two-sided).
double weight_phi(const SpaceParams& space, const LogComplex& z);

} // namespace fockcis
