#pragma once

#include "fockcis/sequence.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace fockcis
{

enum class Decision
{
    Yes,
    No,
    Inconclusive, ///< never produced for finitely described sequences
};

enum class Failure
{
    Separation,
    Boundedness,
    Window,
};

std::string_view to_string(Decision d) noexcept;
std::string_view to_string(Failure f) noexcept;

struct Verdict
{
    Decision decision = Decision::Inconclusive;
    double sep_const = 0.0;
    double sup_delta = 0.0;
    std::optional<std::int64_t> window_N;
    std::optional<double> epsilon;
    std::optional<std::int64_t> shift_m;
    std::vector<Failure> failures;
};

nlohmann::json to_json(const Verdict& v);

/// Always true for a TailedSpec; the second member is sup |delta_k|.
std::pair<bool, double> check_bounded(const SequenceSpec& spec);

/// sup over admissible n of |(1/N) sum_{k=n}^{n+N-1} delta_k|. N >= 1.
double window_sup(const SequenceSpec& spec, std::int64_t N);

struct WindowCondition
{
    bool holds = false;
    std::int64_t N = 0;
    double epsilon = 0.0;
    std::optional<std::int64_t> shift_m;
};

/// Decides the window condition exactly from the tail means. Two-sided sequences are
/// shifted by the unique admissible m first; N is the smallest window certified against 1/2 - epsilon.
WindowCondition check_condition_iii(const SequenceSpec& spec);

/// All integers m with max(|mu_- + m|, |mu_+ + m|) < 1/2. At most one element.
std::vector<std::int64_t> admissible_shifts(const SequenceSpec& spec);

Verdict decide_cis(const SequenceSpec& spec);

/// lambda'_k = lambda_{k+m}: delta'_k = delta_{k+m} + m, theta'_k = theta_{k+m}.
/// Throws UnsupportedSideError for one-sided sequences.
SequenceSpec shift_enumeration(const SequenceSpec& spec, std::int64_t m);

/// Same point set, expressed with exponent p_new: delta'_k = delta_k + 2/p - 2/p_new.
SequenceSpec reindex_for_exponent(const SequenceSpec& spec, double p_new);

/// The enumeration used downstream: shifted by the criterion's m when one exists (two-sided), else unchanged.
SequenceSpec working_enumeration(const SequenceSpec& spec);

} // namespace fockcis
