// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include "oracles.hpp"

#include <fockcis/criterion.hpp>
#include <fockcis/spaces.hpp>
#include <fockcis/toperator.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace fockcis;
using namespace fockcis::testing;

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kInf = SpaceParams::infinity();
const TruncationPolicy kPol{};

// Frozen after the calibration run (measured value rounded up with headroom).
const std::map<std::string, double> kResidualBound = {
    {"delta0_one_p2", 8.1},     {"delta025_one_p2", 8.2},   {"delta075_one_p2", 8.6},
    {"gamma_one_p2", 8.1},      {"gamma_two_p2", 8.1},      {"const025_one_pinf", 8.2},
    {"periodic_one_a07", 2.3},  {"table_two_a15", 13.5},     {"const08_two_p2", 8.2},
};
const double kEvalBound = 1.1;

struct Outcome
{
    bool pass = true;
    std::string detail;
};

class Check
{
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok)
        {
            pass_ = false;
            if (!failures_.empty())
                failures_ += "; ";
            failures_ += what;
        }
    }
    void note(const std::string& s)
    {
        if (!notes_.empty())
            notes_ += ", ";
        notes_ += s;
    }
    Outcome outcome() const { return {pass_, pass_ ? notes_ : failures_ + " | " + notes_}; }

private:
    bool pass_ = true;
    std::string failures_;
    std::string notes_;
};

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

SequenceSpec with_delta(TailedSpec d, Side side, double p = 2.0)
{
    return make_spec(std::move(d), TailedSpec::constant(0.0), 1.0, p, side);
}

LogComplex bump(const LogComplex& z, double h) { return LogComplex::polar_log(z.logmod() + h, z.phase()); }

EvaluableFunction weighted_biorthogonal(const SequenceSpec& s, std::int64_t k)
{
    return biorthogonal(s, k, kPol).scaled(eval_weight(s.space(), node(s, k)).inverse());
}

TMatrixSection square_section(const SequenceSpec& s, std::int64_t n)
{
    const IndexRange r = s.side() == Side::OneSided ? IndexRange{0, n} : IndexRange::centered(n);
    return assemble_section(s, gamma_phase_choice(s), r, r, kPol);
}

double spread(const SequenceSpec& g, double lo, double hi, int n)
{
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double t = lo + (hi - lo) * (i + 0.5) / n;
        const double r = fine_estimate_ratio(g, LogComplex::polar_log(t, 0.0), kPol);
        mn = std::min(mn, r);
        mx = std::max(mx, r);
    }
    return mx / mn;
}

Outcome ac1(double& seconds_limit)
{
    seconds_limit = 1.0;
    Check c;
    struct Fixture
    {
        std::string name;
        SequenceSpec spec;
        Decision want;
        std::optional<std::int64_t> m;
        std::vector<Failure> failures;
    };
    const TailedSpec coincident = TailedSpec::table({{0, 0.0}, {1, -1.0}}, 0.0, 0.0);
    const std::vector<Fixture> fixtures = {
        {"delta0 one", with_delta(TailedSpec::constant(0.0), Side::OneSided), Decision::Yes, {}, {}},
        {"delta0 two", with_delta(TailedSpec::constant(0.0), Side::TwoSided), Decision::Yes, 0, {}},
        {"delta0.3 one", with_delta(TailedSpec::constant(0.3), Side::OneSided), Decision::Yes, {}, {}},
        {"delta0.5 one", with_delta(TailedSpec::constant(0.5), Side::OneSided), Decision::No, {}, {Failure::Window}},
        {"delta0.5 two", with_delta(TailedSpec::constant(0.5), Side::TwoSided), Decision::No, {}, {Failure::Window}},
        {"delta0.8 one", with_delta(TailedSpec::constant(0.8), Side::OneSided), Decision::No, {}, {Failure::Window}},
        {"delta0.8 two", with_delta(TailedSpec::constant(0.8), Side::TwoSided), Decision::Yes, -1, {}},
        {"periodic one", with_delta(TailedSpec::periodic({0.4, -0.4}), Side::OneSided), Decision::Yes, {}, {}},
        {"periodic two", with_delta(TailedSpec::periodic({0.4, -0.4}), Side::TwoSided), Decision::Yes, 0, {}},
        {"coincident one", with_delta(coincident, Side::OneSided, kInf), Decision::No, {}, {Failure::Separation}},
        {"coincident two", with_delta(coincident, Side::TwoSided, kInf), Decision::No, {}, {Failure::Separation}},
    };
    int ok = 0;
    for (const auto& f : fixtures)
    {
        const Verdict v = decide_cis(f.spec);
        const bool match = v.decision == f.want && (!f.m || v.shift_m == f.m) && v.failures == f.failures;
        c.require(match, f.name);
        ok += match;
    }
    c.note(std::to_string(ok) + "/" + std::to_string(fixtures.size()) + " fixtures");
    return c.outcome();
}

Outcome ac2(double& seconds_limit)
{
    seconds_limit = 0.0;
    Check c;
    SpecGenerator g(2002);
    const double ps[] = {1.0, 2.0, kInf};
    int agree = 0;
    for (int i = 0; i < 50; ++i)
    {
        const auto s = g.spec(Side::TwoSided, 1.5);
        bool all = true;
        for (double p : ps)
        {
            const auto base = reindex_for_exponent(s, p);
            const Decision d = decide_cis(base).decision;
            for (double q : ps)
                all = all && decide_cis(reindex_for_exponent(base, q)).decision == d;
        }
        agree += all;
    }
    c.require(agree == 50, "periodicity");
    c.note(std::to_string(agree) + "/50 agree");

    const auto contrast = with_delta(TailedSpec::periodic({0.3, -0.3}), Side::TwoSided, 2.0);
    const Verdict v2 = decide_cis(contrast);
    const Verdict v4 = decide_cis(reindex_for_exponent(contrast, 4.0));
    const Verdict v1 = decide_cis(reindex_for_exponent(contrast, 1.0));
    c.require(v2.decision == Decision::Yes, "contrast p=2");
    c.require(v4.decision == Decision::No, "contrast p=4");
    c.require(v1.decision == Decision::Yes && v1.shift_m == 1, "contrast p=1");
    c.note("contrast p=2/4/1: " + std::string(to_string(v2.decision)) + "/" + std::string(to_string(v4.decision)) +
           "/" + std::string(to_string(v1.decision)));
    return c.outcome();
}

Outcome ac3(double& seconds_limit)
{
    seconds_limit = 10.0;
    Check c;
    SpecGenerator g(3003);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const Side side = i % 2 == 0 ? Side::OneSided : Side::TwoSided;
        const auto s = g.spec(side, 0.45);
        const auto z = LogComplex::polar_log(g.uniform(-5, 12), g.uniform(-kPi, kPi));
        worst = std::max(worst, relative_log_error(canonical_product(s, z, kPol), brute_product(s, to_cld(z), 600)));
    }
    c.require(worst <= 1e-8, "relative log-error");
    c.note("max relative log-error " + fmt(worst));
    return c.outcome();
}

Outcome ac4(double& seconds_limit)
{
    seconds_limit = 10.0;
    Check c;
    for (double p : {kInf, 2.0})
    {
        const auto g = gamma_spec(1.0, p, Side::OneSided);
        const double s15 = spread(g, 0.5, 15.0, 200);
        const double s25 = spread(g, 0.5, 25.0, 200);
        const std::string tag = p == kInf ? "p=inf" : "p=2";
        c.require(s15 <= 50.0, tag + " spread");
        c.require(s25 <= 2.0 * s15, tag + " growth");
        c.note(tag + " spread " + fmt(s15) + " -> " + fmt(s25));
    }
    return c.outcome();
}

Outcome ac5(double& seconds_limit)
{
    seconds_limit = 30.0;
    Check c;
    const auto g = gamma_spec(1.0, 2.0, Side::OneSided);
    SpecGenerator r(5005);
    SampleSeq data{{}, g.space()};
    for (std::int64_t k = 0; k < 10; ++k)
        data.support[k] = std::polar(1.0, r.uniform(-kPi, kPi));
    const auto in = interpolate(g, data, kPol);
    double node_res = 0.0;
    for (const auto& [j, v] : restriction(g, in.f, 0, 10).support)
        node_res = std::max(node_res, std::abs(v - data.support.at(j)));
    for (std::int64_t j = 0; j < 10; ++j)
    {
        const auto z = bump(node(g, j), 1e-12);
        node_res = std::max(node_res, std::abs((in.f(z) * eval_weight(g.space(), z)).to_complex() - data.support.at(j)));
    }
    const auto z30 = bump(node(g, 30), 1e-12);
    const double off = std::max(std::abs((in.f(z30) * eval_weight(g.space(), z30)).to_complex()),
                                std::abs(restriction(g, in.f, 30, 31).support.at(30)));
    c.require(in.cis_verified, "criterion");
    c.require(node_res <= 1e-8, "node residual");
    c.require(off <= 1e-6, "residual at node 30");
    c.note("node residual " + fmt(node_res) + ", node 30 residual " + fmt(off));
    return c.outcome();
}

Outcome ac6(double& seconds_limit)
{
    seconds_limit = 0.0;
    Check c;
    const double a = 2.0;
    const double oracle = kPi + kPi * std::exp(1 / a) * std::sqrt(kPi / a) * (1 + std::erf(1 / std::sqrt(a)));
    const auto n = norm_fp(SpaceParams(1.0, 2.0, Side::OneSided), constant_function(LogComplex::from_real(1.0)));
    const double err = std::abs(n.integral - oracle) / oracle;
    c.require(err <= 1e-6, "relative error");
    c.note("oracle " + fmt(oracle) + ", relative error " + fmt(err));
    return c.outcome();
}

Outcome ac7(double& seconds_limit)
{
    seconds_limit = 0.0;
    Check c;
    const auto s0 = gamma_spec(1.0, 2.0, Side::OneSided);
    const auto s25 = gamma_spec(1.0, 2.0, Side::OneSided, 0.25);
    const auto s75 = gamma_spec(1.0, 2.0, Side::OneSided, 0.75);

    const auto sec25 = square_section(s25, 64);
    const auto f25 = decay_fit(sec25);
    c.require(std::abs(f25.slope_upper + 0.125) <= 0.05, "delta 0.25 upper slope");
    c.require(std::abs(f25.slope_lower + 0.375) <= 0.05, "delta 0.25 lower slope");
    c.note("delta 0.25 slopes " + fmt(f25.slope_upper) + "/" + fmt(f25.slope_lower));

    const auto sec75 = square_section(s75, 64);
    const auto f75 = decay_fit(sec75);
    c.require(std::abs(f75.slope_upper - 0.125) <= 0.05, "delta 0.75 upper slope");
    c.note("delta 0.75 upper slope " + fmt(f75.slope_upper));

    const auto sec0 = square_section(s0, 64);
    const double n64 = section_norms(sec0).p2;
    const double n128 = section_norms(square_section(s0, 128)).p2;
    c.require(n128 / n64 - 1.0 < 0.05, "p2 growth");
    c.note("p2 growth " + fmt(100 * (n128 / n64 - 1.0)) + "%");

    std::vector<std::pair<std::string, TMatrixSection>> tracked = {
        {"delta0_one_p2", sec0}, {"delta025_one_p2", sec25}, {"delta075_one_p2", sec75}};
    for (const auto& [name, raw] : cis_corpus())
        tracked.emplace_back(name, square_section(working_enumeration(raw), 64));
    std::ostringstream res;
    for (const auto& [name, sec] : tracked)
    {
        const double r = prediction_residual(sec);
        c.require(r <= kResidualBound.at(name), "prediction residual " + name);
        res << " " << name << "=" << fmt(r);
    }
    c.note("residuals" + res.str());
    return c.outcome();
}

Outcome ac8(double& seconds_limit)
{
    seconds_limit = 0.0;
    Check c;
    double bio = 0.0;
    for (const auto& [name, raw] : cis_corpus())
    {
        const auto s = working_enumeration(raw);
        for (std::int64_t k : {0, 5, -7})
        {
            if (!s.admissible(k))
                continue;
            const auto f = weighted_biorthogonal(s, k);
            const std::int64_t lo = s.side() == Side::OneSided ? std::max<std::int64_t>(0, k - 20) : k - 20;
            for (const auto& [j, v] : restriction(s, f, lo, lo + 40).support)
                bio = std::max(bio, std::abs(v - (j == k ? 1.0 : 0.0)));
            for (std::int64_t j = lo; j < lo + 40; ++j)
            {
                const auto z = bump(node(s, j), 1e-12);
                bio = std::max(bio, std::abs((f(z) * eval_weight(s.space(), z)).to_complex() - (j == k ? 1.0 : 0.0)));
            }
        }
    }
    c.require(bio <= 1e-8, "biorthogonality");
    c.note("biorthogonality error " + fmt(bio));

    SpecGenerator r(8008);
    double eval = 0.0;
    for (const auto& [name, raw] : cis_corpus())
    {
        const auto s = working_enumeration(raw);
        const auto f = weighted_biorthogonal(s, 0);
        const double nf = norm_fp(s.space(), f).norm;
        const double lo = s.side() == Side::OneSided ? -5.0 : -20.0;
        for (int i = 0; i < 200; ++i)
            eval = std::max(eval, eval_bound_ratio(s.space(), f, nf,
                                                   LogComplex::polar_log(r.uniform(lo, 20.0), r.uniform(-kPi, kPi))));
    }
    c.require(eval <= kEvalBound, "evaluation bound");
    c.note("eval bound ratio max " + fmt(eval) + " (frozen " + fmt(kEvalBound) + ")");

    double wmin = std::numeric_limits<double>::infinity(), wmax = 0.0, nearest = std::numeric_limits<double>::infinity();
    int used = 0;
    for (Side side : {Side::OneSided, Side::TwoSided})
    {
        const auto g = gamma_spec(1.0, kInf, side);
        for (int i = 0; i < 300; ++i)
        {
            const auto z =
                LogComplex::polar_log(r.uniform(side == Side::OneSided ? -3.0 : -25.0, 25.0), r.uniform(-kPi, kPi));
            if (dist_to_sequence(g, z).distance.logmod() <
                std::log(0.05) + (side == Side::OneSided ? log_add_exp(0.0, z.logmod()) : z.logmod()))
                continue;
            const auto w = weight_sum(g, z);
            wmin = std::min(wmin, w.value);
            wmax = std::max(wmax, w.value);
            nearest = std::min(nearest, w.nearest_term);
            ++used;
        }
    }
    c.require(wmin >= 0.2 && wmax <= 5.0, "weight_sum bracket");
    c.note("weight_sum in [" + fmt(wmin) + ", " + fmt(wmax) + "] over " + std::to_string(used) +
           " guarded points, nearest term >= " + fmt(nearest));
    return c.outcome();
}

} // namespace

int main()
{
    using Clock = std::chrono::steady_clock;
    const std::vector<std::pair<std::string, std::function<Outcome(double&)>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
        {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria)
    {
        double limit = 0.0;
        Outcome o;
        const auto t0 = Clock::now();
        try
        {
            o = fn(limit);
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (limit > 0.0 && secs >= limit)
        {
            o.pass = false;
            o.detail += " | runtime " + fmt(secs) + " s exceeds " + fmt(limit) + " s";
        }
        std::printf("%s %s (%.2f s) %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
