#include "fockcis_cli/run.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    const auto parsed = fockcis::cli::parse_args(argc, argv, std::cout, std::cerr);
    if (!parsed.config)
        return parsed.exit_code;
    return fockcis::cli::run(*parsed.config, std::cout, std::cerr);
}
