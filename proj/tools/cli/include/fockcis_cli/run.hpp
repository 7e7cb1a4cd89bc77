#pragma once

#include "fockcis/products.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fockcis::cli
{

enum class Command
{
    Analyze,
    Product,
    Interpolate,
    TMatrix,
    NormCheck,
};

struct RunConfig
{
    Command command = Command::Analyze;
    std::filesystem::path spec_path;
    std::filesystem::path output_dir = ".";
    TruncationPolicy pol;
    std::uint64_t seed = 0;
    bool force = false;
    unsigned threads = 0;

    // product
    int samples = 200;
    double logmod_min = -5.0;
    double logmod_max = 12.0;
    // tmatrix
    std::int64_t size = 64;
    // interpolate: residual window and sample grid
    std::int64_t residual_margin = 20;
    int grid = 32;
};

enum ExitCode : int
{
    kOk = 0,
    kUsage = 1,
    kSpecInvalid = 2,
    kNumeric = 3,
};

/// Parses argv. On failure returns the exit code and writes the message to `err`.
struct ParseOutcome
{
    std::optional<RunConfig> config;
    int exit_code = kOk;
};
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one command and writes its reports into output_dir. Errors are printed to
/// `err` as a JSON diagnostic; the return value is the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report file names a command writes, relative to output_dir.
std::vector<std::string> report_files(Command command);

std::string version();

} // namespace fockcis::cli
