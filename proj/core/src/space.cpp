#include "fockcis/space.hpp"

#include "fockcis/errors.hpp"

#include <cmath>

namespace fockcis
{

std::string_view to_string(Side side) noexcept
{
    return side == Side::OneSided ? "one" : "two";
}

SpaceParams::SpaceParams(double alpha, double p, Side side) : alpha_(alpha), p_(p), side_(side)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be a positive finite number");
    if (!(p > 0.0) || std::isnan(p))
        throw DomainError("p must be in (0, inf]");
}

} // namespace fockcis
