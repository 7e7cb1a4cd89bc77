#pragma once

#include "fockcis/products.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fockcis
{

/// Phases for gamma_m = e^{(m + 2/p)/(2 alpha)}: the phase of the modulus-nearest node
/// plus pi (ties to the smaller index).
TailedSpec gamma_phase_choice(const SequenceSpec& spec);

/// gamma_m with the given phases.
LogComplex gamma_node(const SequenceSpec& spec, const TailedSpec& gamma_phases, std::int64_t m);

/// T_mk = w(gamma_m) / w(lambda_k) * G(gamma_m) / (G'(lambda_k)(gamma_m - lambda_k)), w the evaluation weight.
/// Throws DegenerateSequenceError when gamma_m is a node.
LogComplex t_entry(const SequenceSpec& spec, const TailedSpec& gamma_phases, std::int64_t m, std::int64_t k,
                   const TruncationPolicy& pol);

/// (1/(4 alpha)) (-(m-k) - 2 sum_{j=k}^{m-1} delta_j) for m > k,
/// (1/(4 alpha)) (-(k-m) + 2 sum_{j=m}^{k-1} delta_j) for m < k, 0 for m = k.
double predicted_log_entry(const SequenceSpec& spec, std::int64_t m, std::int64_t k);

struct IndexRange
{
    std::int64_t begin = 0;
    std::int64_t end = 0; ///< exclusive

    std::int64_t size() const noexcept { return end - begin; }
    /// [-(n/2), n - n/2): n indices centered at 0.
    static IndexRange centered(std::int64_t n) noexcept { return {-(n / 2), n - n / 2}; }
};

struct TMatrixSection
{
    IndexRange rows;
    IndexRange cols;
    std::vector<LogComplex> entries; ///< row-major
    SequenceSpec spec;
    TailedSpec gamma_phases;
    TruncationPolicy pol;

    const LogComplex& at(std::int64_t m, std::int64_t k) const
    {
        return entries[static_cast<std::size_t>((m - rows.begin) * cols.size() + (k - cols.begin))];
    }
};

/// Every entry of rows x cols, computed in parallel; identical for any thread count.
/// Entry failures are rethrown with the (m, k) location.
TMatrixSection assemble_section(const SequenceSpec& spec, const TailedSpec& gamma_phases, IndexRange rows,
                                IndexRange cols, const TruncationPolicy& pol);

struct DecayFit
{
    double slope_upper = 0.0;  ///< m < k, against k - m
    double slope_lower = 0.0;  ///< m > k, against m - k
    double offset_upper = 0.0;
    double offset_lower = 0.0;
};

/// Least squares of log|T_mk| on |m - k| over each off-diagonal half.
/// Needs at least 16 x 16; NumericError when a half is all zero.
DecayFit decay_fit(const TMatrixSection& section);

struct SectionNorms
{
    double p1 = 0.0;    ///< max column sum
    double p2 = 0.0;    ///< largest singular value
    double pinf = 0.0;  ///< max row sum

    /// p1^{1/q} pinf^{1-1/q}, an upper bound on the l^q norm for q >= 1; nullopt for q < 1.
    std::optional<double> interpolated(double q) const;
};

/// Power iteration on the Gram matrix for p2; NumericError after 10^4 iterations.
SectionNorms section_norms(const TMatrixSection& section);

/// max_{m,k} |log|T_mk| - predicted_log_entry(m, k)|.
double prediction_residual(const TMatrixSection& section);

} // namespace fockcis
