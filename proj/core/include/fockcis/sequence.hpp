#pragma once

#include "fockcis/log_complex.hpp"
#include "fockcis/space.hpp"
#include "fockcis/tailed_spec.hpp"

#include <cstdint>
#include <vector>

namespace fockcis
{

/// Perturbed geometric sequence
///     lambda_k = exp((k + 2/p + delta_k) / (2 alpha)) * exp(i theta_k),
/// k >= 0 (one-sided) or k in Z (two-sided).
///
/// Instances are always modulus-ordered: create() sorts the nodes by modulus and
/// recomputes delta/theta whenever k + delta_k fails to be nondecreasing.
class SequenceSpec
{
public:
    static SequenceSpec create(TailedSpec delta, TailedSpec theta, SpaceParams space);

    const TailedSpec& delta() const noexcept { return delta_; }
    const TailedSpec& theta() const noexcept { return theta_; }
    const SpaceParams& space() const noexcept { return space_; }
    Side side() const noexcept { return space_.side(); }

    /// True when create() had to re-enumerate the input.
    bool was_canonicalized() const noexcept { return canonicalized_; }

    /// sup |delta_k| over admissible k.
    double sup_delta() const noexcept { return sup_delta_; }

    bool admissible(std::int64_t k) const noexcept { return side() == Side::TwoSided || k >= 0; }
    /// Smallest admissible index, or INT64_MIN for two-sided.
    std::int64_t first_index() const noexcept;

    /// lcm of the delta and theta periods.
    std::int64_t joint_period() const noexcept { return joint_period_; }
    /// Union of the delta and theta core regions.
    std::int64_t core_begin() const noexcept;
    std::int64_t core_end() const noexcept;

    friend bool operator==(const SequenceSpec& a, const SequenceSpec& b)
    {
        return a.delta_ == b.delta_ && a.theta_ == b.theta_ && a.space_ == b.space_;
    }

private:
    SequenceSpec(TailedSpec delta, TailedSpec theta, SpaceParams space);

    TailedSpec delta_;
    TailedSpec theta_;
    SpaceParams space_;
    bool canonicalized_ = false;
    double sup_delta_ = 0.0;
    std::int64_t joint_period_ = 1;
};

/// True iff k + delta_k is nondecreasing over the admissible indices.
bool is_modulus_ordered(const TailedSpec& delta, Side side);

/// The k-th node. Throws IndexDomainError for k < 0 on a one-sided sequence.
LogComplex node(const SequenceSpec& spec, std::int64_t k);

/// log|lambda_k| without the phase.
double node_log_modulus(const SequenceSpec& spec, std::int64_t k);

/// |log|z| - log|w|| + |z/|z| - w/|w||. Throws DomainError for ZERO.
double dlog(const LogComplex& z, const LogComplex& w);

/// dlog when both moduli are >= 1, Euclidean |z - w| when both are < 1, the max of the two otherwise.
double dlog_plus(const LogComplex& z, const LogComplex& w);

struct NearestNode
{
    LogComplex distance; ///< |z - lambda_index|, ZERO iff z is a node
    std::int64_t index = 0;
};

/// Euclidean nearest node, ties to the smaller index.
///
/// For two-sided sequences and z on which the infimum is approached only as
/// k -> -inf (the nodes accumulate at 0), the search stops once the remaining
/// nodes are below double resolution relative to |z|.
NearestNode dist_to_sequence(const SequenceSpec& spec, const LogComplex& z);

/// Index of the d_log-closest node, ties to the smaller index.
std::int64_t nearest_dlog_index(const SequenceSpec& spec, const LogComplex& z);

/// Exact infimum of the separation metric (dlog two-sided, dlog_plus one-sided) over distinct pairs.
double separation_constant(const SequenceSpec& spec);

/// True iff two distinct indices give the same node.
bool has_coincident_nodes(const SequenceSpec& spec);

namespace detail
{

/// Rebuilds a TailedSpec from samples seq[j - seq_lo], assuming the values are
/// `period`-periodic outside [core_lo, core_hi); two extra periods on each side
/// of the core must be present. Throws NumericError when the tails disagree.
TailedSpec fit_tailed(const std::vector<double>& seq, std::int64_t seq_lo, std::int64_t core_lo,
                      std::int64_t core_hi, std::int64_t period, TailedSpec::Kind hint, Side side);

/// Margin around a core region that absorbs every index displacement caused by |delta| <= sup.
std::int64_t reenumeration_margin(double sup, std::int64_t period);

} // namespace detail

} // namespace fockcis
