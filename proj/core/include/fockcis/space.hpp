#pragma once

#include <limits>
#include <string_view>

namespace fockcis
{

enum class Side
{
    OneSided, ///< F^p_{alpha+}: entire functions, weight alpha log_+^2|z|, indices k >= 0
    TwoSided, ///< F^p_alpha: holomorphic on C\{0}, weight alpha log^2|z|, indices k in Z
};

std::string_view to_string(Side side) noexcept;

/// The pair (alpha, p) plus sidedness. p may be +infinity.
class SpaceParams
{
public:
    /// Throws DomainError unless alpha > 0 and p > 0 (p = inf allowed).
    SpaceParams(double alpha, double p, Side side);

    static constexpr double infinity() noexcept { return std::numeric_limits<double>::infinity(); }

    double alpha() const noexcept { return alpha_; }
    double p() const noexcept { return p_; }
    Side side() const noexcept { return side_; }
    bool p_is_infinite() const noexcept { return p_ == infinity(); }

    /// 2/p, with 2/inf = 0.
    double two_over_p() const noexcept { return p_is_infinite() ? 0.0 : 2.0 / p_; }

    SpaceParams with_p(double p) const { return {alpha_, p, side_}; }

    friend bool operator==(const SpaceParams&, const SpaceParams&) = default;

private:
    double alpha_;
    double p_;
    Side side_;
};

} // namespace fockcis
