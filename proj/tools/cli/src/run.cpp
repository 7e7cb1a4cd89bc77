#include "fockcis_cli/run.hpp"

#include "fockcis/criterion.hpp"
#include "fockcis/errors.hpp"
#include "fockcis/json_io.hpp"
#include "fockcis/parallel.hpp"
#include "fockcis/spaces.hpp"
#include "fockcis/toperator.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef FOCKCIS_VERSION
#define FOCKCIS_VERSION "0.0.0"
#endif

namespace fockcis::cli
{

using nlohmann::json;
namespace fs = std::filesystem;

std::string version()
{
    return FOCKCIS_VERSION;
}

namespace
{

constexpr double kPi = std::numbers::pi;

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string num(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// splitmix64; portable, so the same seed gives the same samples everywhere.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_text(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw SpecValidationError("", std::string("malformed JSON: ") + e.what());
    }
}

struct Outputs
{
    std::vector<std::pair<std::string, std::string>> files;

    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

void write_outputs(const RunConfig& cfg, const Outputs& outputs)
{
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    for (const auto& [name, content] : outputs.files)
        if (fs::exists(cfg.output_dir / name) && !cfg.force)
            throw IoError("report " + (cfg.output_dir / name).string() + " exists; pass --force to overwrite");
    for (const auto& [name, content] : outputs.files)
    {
        std::ofstream out(cfg.output_dir / name, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + (cfg.output_dir / name).string());
        out << content;
        if (!out)
            throw IoError("write failed for " + (cfg.output_dir / name).string());
    }
}

json header(const RunConfig& cfg, const json& input, std::string_view command)
{
    json h;
    h["tool"] = "fockcis";
    h["version"] = version();
    h["command"] = std::string(command);
    h["spec_hash"] = spec_hash_hex(input);
    h["tolerances"] = {{"rel_tol", cfg.pol.rel_tol}, {"hard_cap", cfg.pol.hard_cap}};
    h["seed"] = cfg.seed;
    return h;
}

void cmd_analyze(const RunConfig& cfg, const json& input, Outputs& outputs, std::ostream& out)
{
    const SpecDocument doc = parse_spec_document(input);
    const SequenceSpec spec = doc.to_sequence();
    const Verdict v = decide_cis(spec);

    json report = header(cfg, input, "analyze");
    report["input"] = to_json(doc);
    report["canonicalized"] = spec.was_canonicalized();
    report["working_spec"] = to_json(spec);
    report["verdict"] = to_json(v);
    json shifts = json::array();
    for (std::int64_t m : admissible_shifts(spec))
        shifts.push_back(m);
    report["admissible_shifts"] = shifts;
    outputs.add("verdict.json", report.dump(2) + "\n");

    out << "decision: " << to_string(v.decision);
    for (Failure f : v.failures)
        out << " " << to_string(f);
    out << "\n";
}

void cmd_product(const RunConfig& cfg, const json& input, Outputs& outputs, std::ostream& out)
{
    const SequenceSpec spec = parse_spec_document(input).to_sequence();
    if (cfg.samples < 1)
        throw IoError("--samples must be positive");
    if (!(cfg.logmod_min < cfg.logmod_max))
        throw IoError("--logmod-min must be below --logmod-max");

    Rng rng(cfg.seed);
    std::vector<LogComplex> zs;
    for (int i = 0; i < cfg.samples; ++i)
    {
        const double l = rng.uniform(cfg.logmod_min, cfg.logmod_max);
        const double ph = rng.uniform(-kPi, kPi);
        zs.push_back(LogComplex::polar_log(l, ph));
    }

    struct Row
    {
        LogComplex g;
        double coarse = std::nan("");
        double fine = std::nan("");
        std::int64_t nearest = 0;
    };
    std::vector<Row> rows(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
        Row r;
        r.g = canonical_product(spec, zs[i], cfg.pol);
        r.nearest = dist_to_sequence(spec, zs[i]).index;
        if (!r.g.is_zero())
        {
            const double lg = r.g.logmod();
            r.coarse = std::exp(lg - coarse_log_comparator(spec, zs[i]));
            r.fine = std::exp(lg - fine_log_comparator(spec, zs[i]));
        }
        rows[i] = r;
    });

    std::ostringstream csv;
    csv << "logmod_z,phase_z,log_abs_G,phase_G,coarse_ratio,fine_ratio,nearest_index\n";
    double cmin = INFINITY, cmax = 0, fmin = INFINITY, fmax = 0;
    for (std::size_t i = 0; i < zs.size(); ++i)
    {
        const Row& r = rows[i];
        csv << num(zs[i].logmod()) << "," << num(zs[i].phase()) << "," << num(r.g.logmod()) << ","
            << num(r.g.phase()) << "," << num(r.coarse) << "," << num(r.fine) << "," << r.nearest << "\n";
        if (!std::isnan(r.coarse))
        {
            cmin = std::min(cmin, r.coarse);
            cmax = std::max(cmax, r.coarse);
            fmin = std::min(fmin, r.fine);
            fmax = std::max(fmax, r.fine);
        }
    }
    json report = header(cfg, input, "product");
    report["samples"] = cfg.samples;
    report["logmod_range"] = {cfg.logmod_min, cfg.logmod_max};
    report["coarse_ratio"] = {{"min", cmin}, {"max", cmax}, {"spread", cmax / cmin}};
    report["fine_ratio"] = {{"min", fmin}, {"max", fmax}, {"spread", fmax / fmin}};
    report["csv"] = "product.csv";
    outputs.add("product.csv", csv.str());
    outputs.add("product.json", report.dump(2) + "\n");
    out << "coarse spread " << num(cmax / cmin) << ", fine spread " << num(fmax / fmin) << "\n";
}

SampleSeq parse_data(const json& input, const SpaceParams& space)
{
    SampleSeq data{{}, space};
    auto it = input.find("data");
    if (it == input.end())
        throw SpecValidationError("/data", "missing required field 'data'");
    if (!it->is_array())
        throw SpecValidationError("/data", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
    {
        const json& e = (*it)[i];
        const std::string ptr = "/data/" + std::to_string(i);
        if (!e.is_object())
            throw SpecValidationError(ptr, "expected an object");
        for (const char* key : {"k", "re", "im"})
            if (!e.contains(key))
                throw SpecValidationError(ptr + "/" + key, std::string("missing required field '") + key + "'");
        if (!e["k"].is_number_integer())
            throw SpecValidationError(ptr + "/k", "expected an integer");
        for (const char* key : {"re", "im"})
            if (!e[key].is_number() || !std::isfinite(e[key].get<double>()))
                throw SpecValidationError(ptr + "/" + key, "expected a finite number");
        const auto k = e["k"].get<std::int64_t>();
        if (space.side() == Side::OneSided && k < 0)
            throw SpecValidationError(ptr + "/k", "negative index on a one-sided sequence");
        if (!data.support.emplace(k, std::complex<double>(e["re"].get<double>(), e["im"].get<double>())).second)
            throw SpecValidationError(ptr + "/k", "duplicate index");
    }
    return data;
}

SpecDocument parse_nested_spec(const json& input)
{
    if (!input.is_object())
        throw SpecValidationError("", "expected an object");
    auto it = input.find("spec");
    if (it == input.end())
        throw SpecValidationError("/spec", "missing required field 'spec'");
    try
    {
        return parse_spec_document(*it);
    }
    catch (const SpecValidationError& e)
    {
        const std::string msg = e.what();
        throw SpecValidationError("/spec" + e.pointer(), msg.substr(0, msg.rfind(" (at ")));
    }
}

void cmd_interpolate(const RunConfig& cfg, const json& input, Outputs& outputs, std::ostream& out)
{
    const SpecDocument doc = parse_nested_spec(input);
    const SequenceSpec spec = doc.to_sequence();
    const SampleSeq data = parse_data(input, spec.space());
    const Interpolant ip = interpolate(spec, data, cfg.pol);

    std::int64_t lo = 0, hi = 1;
    if (!data.support.empty())
    {
        lo = data.support.begin()->first - cfg.residual_margin;
        hi = data.support.rbegin()->first + cfg.residual_margin + 1;
    }
    if (spec.side() == Side::OneSided)
        lo = std::max<std::int64_t>(lo, 0);
    const SampleSeq restricted = restriction(spec, ip.f, lo, hi);

    json residuals = json::array();
    double node_sup = 0.0, off_sup = 0.0;
    for (const auto& [k, v] : restricted.support)
    {
        auto it = data.support.find(k);
        const std::complex<double> c = it == data.support.end() ? std::complex<double>{} : it->second;
        const double r = std::abs(v - c);
        residuals.push_back({{"k", k}, {"abs", r}});
        if (it == data.support.end())
            off_sup = std::max(off_sup, r);
        else
            node_sup = std::max(node_sup, r);
    }

    double centre = 0.0;
    for (const auto& [k, c] : data.support)
        centre += node_log_modulus(spec, k);
    if (!data.support.empty())
        centre /= static_cast<double>(data.support.size());
    QuadratureParams quad;
    quad.t_center = centre;
    const NormResult nf = norm_fp(spec.space(), ip.f, quad);
    const double nc = data.lp_norm();

    // Samples of |f| e^{-phi} on a log-polar grid around the data.
    const double t_lo = centre - 3.0, t_hi = centre + 3.0;
    const int n = std::max(cfg.grid, 2);
    std::vector<std::string> lines(static_cast<std::size_t>(n * n));
    parallel_for(lines.size(), [&](std::size_t idx) {
        const double t = t_lo + (t_hi - t_lo) * static_cast<double>(idx / n) / (n - 1);
        const double th = -kPi + 2.0 * kPi * (static_cast<double>(idx % n) + 0.5) / n;
        const LogComplex z = LogComplex::polar_log(t, th);
        const LogComplex v = ip.f(z);
        const double weighted = v.is_zero() ? 0.0 : std::exp(v.logmod() - weight_phi(spec.space(), z));
        lines[idx] = num(t) + "," + num(z.phase()) + "," + num(v.logmod()) + "," + num(v.phase()) + "," + num(weighted);
    });
    std::ostringstream csv;
    csv << "logmod_z,phase_z,log_abs_f,phase_f,weighted_abs_f\n";
    for (const auto& l : lines)
        csv << l << "\n";

    json report = header(cfg, input, "interpolate");
    report["verdict"] = to_json(ip.verdict);
    report["cis_verified"] = ip.cis_verified;
    if (!ip.cis_verified)
        report["warning"] = "sequence is not complete interpolating; series built anyway";
    report["shift_m"] = ip.shift_m;
    report["residuals"] = residuals;
    report["node_residual_sup"] = node_sup;
    report["off_support_residual_sup"] = off_sup;
    report["norm_fp"] = nf.norm;
    report["log_norm_integral"] = nf.log_integral;
    report["data_lp_norm"] = nc;
    report["norm_ratio"] = nc > 0.0 ? json(nf.norm / nc) : json(nullptr);
    report["samples"] = "interpolate_samples.csv";
    outputs.add("interpolate.json", report.dump(2) + "\n");
    outputs.add("interpolate_samples.csv", csv.str());
    out << "node residual " << num(node_sup) << ", off-support residual " << num(off_sup) << ", norm " << num(nf.norm)
        << (ip.cis_verified ? "" : " (not CIS)") << "\n";
}

void cmd_tmatrix(const RunConfig& cfg, const json& input, Outputs& outputs, std::ostream& out)
{
    const SequenceSpec spec0 = parse_spec_document(input).to_sequence();
    if (cfg.size < 1)
        throw IoError("--size must be positive");
    const Verdict v = decide_cis(spec0);
    const SequenceSpec spec = working_enumeration(spec0);
    const TailedSpec gp = gamma_phase_choice(spec);
    const IndexRange range = spec.side() == Side::OneSided ? IndexRange{0, cfg.size} : IndexRange::centered(cfg.size);
    const TMatrixSection sec = assemble_section(spec, gp, range, range, cfg.pol);

    std::ostringstream csv;
    csv << "m,k,log_abs,phase,predicted_log\n";
    double max_entry = -INFINITY;
    for (std::int64_t m = range.begin; m < range.end; ++m)
        for (std::int64_t k = range.begin; k < range.end; ++k)
        {
            const LogComplex& e = sec.at(m, k);
            max_entry = std::max(max_entry, e.logmod());
            csv << m << "," << k << "," << num(e.logmod()) << "," << num(e.phase()) << ","
                << num(predicted_log_entry(spec, m, k)) << "\n";
        }

    json report = header(cfg, input, "tmatrix");
    report["range"] = {range.begin, range.end};
    report["gamma_phases"] = tailed_spec_to_json(gp, spec.side());
    report["max_entry_log_abs"] = max_entry;
    report["prediction_residual"] = prediction_residual(sec);
    const SectionNorms nrm = section_norms(sec);
    json norms = {{"p1", nrm.p1}, {"p2", nrm.p2}, {"pinf", nrm.pinf}};
    if (auto b = nrm.interpolated(spec.space().p()))
        norms["interpolated_upper_bound"] = {{"p", exponent_to_json(spec.space().p())}, {"value", *b}};
    else
        norms["interpolated_upper_bound"] = {{"p", spec.space().p()}, {"value", "no bound (p < 1), diagnostic only"}};
    report["norms"] = norms;
    json cross = {{"decision", std::string(to_string(v.decision))}};
    if (cfg.size >= 16)
    {
        const DecayFit fit = decay_fit(sec);
        report["slopes"] = {{"upper", fit.slope_upper},
                            {"lower", fit.slope_lower},
                            {"offset_upper", fit.offset_upper},
                            {"offset_lower", fit.offset_lower}};
        if (v.decision == Decision::Yes)
        {
            const double rate = -*v.epsilon / (8.0 * spec.space().alpha());
            cross["decay_threshold"] = rate;
            cross["decay_certified"] = fit.slope_upper <= rate && fit.slope_lower <= rate;
        }
        else
        {
            cross["max_slope"] = std::max(fit.slope_upper, fit.slope_lower);
        }
    }
    report["verdict_cross_check"] = cross;
    report["csv"] = "tmatrix.csv";
    outputs.add("tmatrix.csv", csv.str());
    outputs.add("tmatrix.json", report.dump(2) + "\n");
    out << "p1 " << num(nrm.p1) << ", p2 " << num(nrm.p2) << ", pinf " << num(nrm.pinf) << "\n";
}

// int_0^inf e^{-a t^2 + b t} dt
double half_gaussian(double a, double b)
{
    return 0.5 * std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a)) * (1.0 + std::erf(b / (2.0 * std::sqrt(a))));
}

void cmd_normcheck(const RunConfig& cfg, const json& input, Outputs& outputs, std::ostream& out)
{
    const SpaceParams space = parse_spec_document(input).space;
    const double alpha = space.alpha();
    json checks = json::array();
    for (int power : {0, 1})
    {
        const EvaluableFunction f = monomial(power);
        double oracle = 0.0;
        if (space.p_is_infinite())
        {
            oracle = power == 0 ? 1.0 : std::exp(1.0 / (4.0 * alpha));
        }
        else
        {
            const double p = space.p();
            const double a = p * alpha;
            const double b = p * power + 2.0;
            if (space.side() == Side::OneSided)
                oracle = 2.0 * kPi / b + 2.0 * kPi * half_gaussian(a, b);
            else
                oracle = 2.0 * kPi * std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a));
        }
        const NormResult r = norm_fp(space, f, {});
        const double rel = std::fabs(r.integral - oracle) / oracle;
        const std::string name = power == 0 ? "f(z) = 1" : "f(z) = z";
        checks.push_back({{"function", name}, {"quadrature", r.integral}, {"oracle", oracle}, {"rel_error", rel}});
        out << name << ": quadrature " << num(r.integral) << ", closed form " << num(oracle) << ", relative error "
            << num(rel) << "\n";
    }
    json report = header(cfg, input, "normcheck");
    report["quantity"] = space.p_is_infinite() ? "sup |f| e^{-phi}" : "||f||^p";
    report["checks"] = checks;
    outputs.add("normcheck.json", report.dump(2) + "\n");
}

void diagnose(std::ostream& err, int code, std::string_view kind, const std::string& message,
              const std::string* pointer = nullptr, const double* bound = nullptr)
{
    json e = {{"kind", std::string(kind)}, {"message", message}};
    if (pointer)
        e["pointer"] = pointer->empty() ? "/" : *pointer;
    if (bound)
        e["achieved_bound"] = std::isfinite(*bound) ? json(*bound) : json("inf"); // no tail majorant at all
    err << json{{"error", e}, {"exit_code", code}}.dump() << "\n";
}

} // namespace

std::vector<std::string> report_files(Command command)
{
    switch (command)
    {
    case Command::Analyze:
        return {"verdict.json"};
    case Command::Product:
        return {"product.csv", "product.json"};
    case Command::Interpolate:
        return {"interpolate.json", "interpolate_samples.csv"};
    case Command::TMatrix:
        return {"tmatrix.csv", "tmatrix.json"};
    case Command::NormCheck:
        return {"normcheck.json"};
    }
    return {};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try
    {
        cfg.pol.validate();
        if (cfg.threads != 0)
            set_default_threads(cfg.threads);
        const json input = parse_json_text(read_file(cfg.spec_path));
        Outputs outputs;
        switch (cfg.command)
        {
        case Command::Analyze:
            cmd_analyze(cfg, input, outputs, out);
            break;
        case Command::Product:
            cmd_product(cfg, input, outputs, out);
            break;
        case Command::Interpolate:
            cmd_interpolate(cfg, input, outputs, out);
            break;
        case Command::TMatrix:
            cmd_tmatrix(cfg, input, outputs, out);
            break;
        case Command::NormCheck:
            cmd_normcheck(cfg, input, outputs, out);
            break;
        }
        write_outputs(cfg, outputs);
        return kOk;
    }
    catch (const SpecValidationError& e)
    {
        diagnose(err, kSpecInvalid, "spec_validation", e.what(), &e.pointer());
        return kSpecInvalid;
    }
    catch (const TruncationError& e)
    {
        const double b = e.achieved_bound();
        diagnose(err, kNumeric, "truncation", e.what(), nullptr, &b);
        return kNumeric;
    }
    catch (const NumericError& e)
    {
        diagnose(err, kNumeric, "numeric", e.what());
        return kNumeric;
    }
    catch (const DegenerateSequenceError& e)
    {
        diagnose(err, kNumeric, "degenerate_sequence", e.what());
        return kNumeric;
    }
    catch (const IoError& e)
    {
        diagnose(err, kUsage, "io", e.what());
        return kUsage;
    }
    catch (const DomainError& e)
    {
        diagnose(err, kUsage, "domain", e.what());
        return kUsage;
    }
    catch (const std::exception& e)
    {
        diagnose(err, kUsage, "internal", e.what());
        return kUsage;
    }
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Complete interpolating sequences in small Fock spaces", "fockcis"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    RunConfig cfg;
    std::string spec, outdir = ".";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", spec, "Spec JSON file")->required();
        sub->add_option("--out", outdir, "Output directory");
        sub->add_option("--rel-tol", cfg.pol.rel_tol, "Certified error bound on log G")
            ->check(CLI::Range(std::numeric_limits<double>::denorm_min(), 1e-3))
            ->capture_default_str();
        sub->add_option("--hard-cap", cfg.pol.hard_cap, "Max factors per product tail")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Seed for sampling studies")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
        sub->add_flag("--force", cfg.force, "Overwrite existing reports");
    };

    auto* analyze = app.add_subcommand("analyze", "Decide the criterion and write verdict.json");
    auto* product = app.add_subcommand("product", "Sample the canonical product and its estimate ratios");
    auto* interp = app.add_subcommand("interpolate", "Build the interpolation series for {spec, data}");
    auto* tmatrix = app.add_subcommand("tmatrix", "Assemble a finite section of T");
    auto* normcheck = app.add_subcommand("normcheck", "Compare norm quadrature with closed forms");
    for (auto* sub : {analyze, product, interp, tmatrix, normcheck})
        add_common(sub);
    product->add_option("--samples", cfg.samples, "Number of sample points")->capture_default_str();
    product->add_option("--logmod-min", cfg.logmod_min)->capture_default_str();
    product->add_option("--logmod-max", cfg.logmod_max)->capture_default_str();
    tmatrix->add_option("--size", cfg.size, "Section size")->capture_default_str();
    interp->add_option("--margin", cfg.residual_margin, "Residual window beyond the data")->capture_default_str();
    interp->add_option("--grid", cfg.grid, "Sample grid points per axis")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? kOk : kUsage};
    }

    if (analyze->parsed())
        cfg.command = Command::Analyze;
    else if (product->parsed())
        cfg.command = Command::Product;
    else if (interp->parsed())
        cfg.command = Command::Interpolate;
    else if (tmatrix->parsed())
        cfg.command = Command::TMatrix;
    else
        cfg.command = Command::NormCheck;
    cfg.spec_path = spec;
    cfg.output_dir = outdir;
    return {cfg, kOk};
}

} // namespace fockcis::cli
