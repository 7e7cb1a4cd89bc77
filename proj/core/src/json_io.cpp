#include "fockcis/json_io.hpp"

#include "fockcis/errors.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>

namespace fockcis
{

using nlohmann::json;

namespace
{

std::string child(const std::string& pointer, const std::string& key)
{
    std::string escaped;
    for (char c : key)
    {
        if (c == '~')
            escaped += "~0";
        else if (c == '/')
            escaped += "~1";
        else
            escaped += c;
    }
    return pointer + "/" + escaped;
}

void require_object(const json& j, const std::string& pointer)
{
    if (!j.is_object())
        throw SpecValidationError(pointer, "expected an object");
}

void reject_unknown(const json& j, const std::string& pointer, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : j.items())
    {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw SpecValidationError(child(pointer, key), "unknown field");
    }
}

const json& field(const json& j, const std::string& pointer, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw SpecValidationError(child(pointer, key), std::string("missing required field '") + key + "'");
    return *it;
}

double finite_number(const json& j, const std::string& pointer)
{
    if (!j.is_number())
        throw SpecValidationError(pointer, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw SpecValidationError(pointer, "expected a finite number");
    return v;
}

std::int64_t parse_index_key(const std::string& key, const std::string& pointer)
{
    const std::size_t start = !key.empty() && key[0] == '-' ? 1 : 0;
    bool ok = key.size() > start && key.size() - start <= 18;
    for (std::size_t i = start; ok && i < key.size(); ++i)
        ok = key[i] >= '0' && key[i] <= '9';
    ok = ok && (key.size() - start == 1 || key[start] != '0') && key != "-0";
    if (!ok)
        throw SpecValidationError(pointer, "index keys must be decimal integers");
    return std::stoll(key);
}

TailedSpec::Overrides index_map(const json& j, Side side, const std::string& pointer)
{
    require_object(j, pointer);
    TailedSpec::Overrides out;
    for (const auto& [key, value] : j.items())
    {
        const std::string ptr = child(pointer, key);
        const std::int64_t k = parse_index_key(key, ptr);
        if (side == Side::OneSided && k < 0)
            throw SpecValidationError(ptr, "negative index on a one-sided sequence");
        out.emplace(k, finite_number(value, ptr));
    }
    return out;
}

json index_map_to_json(const TailedSpec::Overrides& m)
{
    json out = json::object();
    for (const auto& [k, v] : m)
        out[std::to_string(k)] = v;
    return out;
}

} // namespace

TailedSpec tailed_spec_from_json(const json& j, Side side, const std::string& pointer)
{
    require_object(j, pointer);
    const json& kind = field(j, pointer, "kind");
    if (!kind.is_string())
        throw SpecValidationError(child(pointer, "kind"), "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "constant")
    {
        reject_unknown(j, pointer, {"kind", "value"});
        return TailedSpec::constant(finite_number(field(j, pointer, "value"), child(pointer, "value")));
    }
    if (k == "periodic")
    {
        reject_unknown(j, pointer, {"kind", "values", "overrides"});
        const json& vals = field(j, pointer, "values");
        const std::string vptr = child(pointer, "values");
        if (!vals.is_array())
            throw SpecValidationError(vptr, "expected an array");
        if (vals.empty())
            throw SpecValidationError(vptr, "periodic values must be nonempty");
        std::vector<double> values;
        for (std::size_t i = 0; i < vals.size(); ++i)
            values.push_back(finite_number(vals[i], vptr + "/" + std::to_string(i)));
        TailedSpec::Overrides overrides;
        if (auto it = j.find("overrides"); it != j.end())
            overrides = index_map(*it, side, child(pointer, "overrides"));
        return TailedSpec::periodic(std::move(values), std::move(overrides));
    }
    if (k == "table")
    {
        if (side == Side::TwoSided)
            reject_unknown(j, pointer, {"kind", "entries", "default_right", "default_left"});
        else
            reject_unknown(j, pointer, {"kind", "entries", "default_right"});
        auto entries = index_map(field(j, pointer, "entries"), side, child(pointer, "entries"));
        const double right = finite_number(field(j, pointer, "default_right"), child(pointer, "default_right"));
        if (side == Side::OneSided)
            return TailedSpec::table(std::move(entries), right);
        const double left = finite_number(field(j, pointer, "default_left"), child(pointer, "default_left"));
        return TailedSpec::table(std::move(entries), right, left);
    }
    throw SpecValidationError(child(pointer, "kind"), "kind must be constant, periodic or table");
}

json tailed_spec_to_json(const TailedSpec& spec, Side side)
{
    json out;
    switch (spec.kind())
    {
    case TailedSpec::Kind::Constant:
        out["kind"] = "constant";
        out["value"] = spec.constant_value();
        break;
    case TailedSpec::Kind::Periodic:
        out["kind"] = "periodic";
        out["values"] = spec.values();
        if (!spec.overrides().empty())
            out["overrides"] = index_map_to_json(spec.overrides());
        break;
    case TailedSpec::Kind::Table:
        out["kind"] = "table";
        out["entries"] = index_map_to_json(spec.overrides());
        out["default_right"] = spec.default_right();
        if (side == Side::TwoSided)
            out["default_left"] = spec.default_left();
        break;
    }
    return out;
}

json exponent_to_json(double p)
{
    if (p == std::numeric_limits<double>::infinity())
        return "inf";
    return p;
}

SpecDocument parse_spec_document(const json& doc)
{
    require_object(doc, "");
    reject_unknown(doc, "", {"alpha", "p", "side", "delta", "theta"});

    const double alpha = finite_number(field(doc, "", "alpha"), "/alpha");
    if (!(alpha > 0.0))
        throw SpecValidationError("/alpha", "alpha must be positive");

    const json& pj = field(doc, "", "p");
    double p = 0.0;
    if (pj.is_string())
    {
        if (pj.get<std::string>() != "inf")
            throw SpecValidationError("/p", "p must be a positive number or \"inf\"");
        p = std::numeric_limits<double>::infinity();
    }
    else
    {
        p = finite_number(pj, "/p");
        if (!(p > 0.0))
            throw SpecValidationError("/p", "p must be positive");
    }

    const json& sj = field(doc, "", "side");
    if (!sj.is_string() || (sj.get<std::string>() != "one" && sj.get<std::string>() != "two"))
        throw SpecValidationError("/side", "side must be \"one\" or \"two\"");
    const Side side = sj.get<std::string>() == "one" ? Side::OneSided : Side::TwoSided;

    TailedSpec delta = tailed_spec_from_json(field(doc, "", "delta"), side, "/delta");
    TailedSpec theta = tailed_spec_from_json(field(doc, "", "theta"), side, "/theta");
    return {std::move(delta), std::move(theta), SpaceParams(alpha, p, side)};
}

SpecDocument parse_spec_document(const std::string& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw SpecValidationError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_spec_document(doc);
}

json to_json(const SpecDocument& doc)
{
    json out;
    out["alpha"] = doc.space.alpha();
    out["p"] = exponent_to_json(doc.space.p());
    out["side"] = std::string(to_string(doc.space.side()));
    out["delta"] = tailed_spec_to_json(doc.delta, doc.space.side());
    out["theta"] = tailed_spec_to_json(doc.theta, doc.space.side());
    return out;
}

json to_json(const SequenceSpec& spec)
{
    return to_json(SpecDocument{spec.delta(), spec.theta(), spec.space()});
}

std::uint64_t spec_hash(const json& doc)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : doc.dump())
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string spec_hash_hex(const json& doc)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(spec_hash(doc)));
    return buf;
}

} // namespace fockcis
