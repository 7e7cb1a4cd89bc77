#pragma once

#include "fockcis/sequence.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace fockcis
{

/// A parsed spec document, before re-enumeration. Serializing it reproduces the input.
struct SpecDocument
{
    TailedSpec delta;
    TailedSpec theta;
    SpaceParams space;

    SequenceSpec to_sequence() const { return SequenceSpec::create(delta, theta, space); }
};

/// Throws SpecValidationError with a JSON pointer to the first offending field.
SpecDocument parse_spec_document(const nlohmann::json& doc);
SpecDocument parse_spec_document(const std::string& text);

nlohmann::json to_json(const SpecDocument& doc);
/// The (possibly re-enumerated) working form of a sequence.
nlohmann::json to_json(const SequenceSpec& spec);

nlohmann::json tailed_spec_to_json(const TailedSpec& spec, Side side);
/// `pointer` prefixes diagnostics.
TailedSpec tailed_spec_from_json(const nlohmann::json& j, Side side, const std::string& pointer);

/// "inf" for infinity, else the number.
nlohmann::json exponent_to_json(double p);

/// 64-bit FNV-1a of the compact serialization.
std::uint64_t spec_hash(const nlohmann::json& doc);
std::string spec_hash_hex(const nlohmann::json& doc);

} // namespace fockcis
