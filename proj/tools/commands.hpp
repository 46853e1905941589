#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "harper/lattice.hpp"
#include "config.hpp"
#include "output.hpp"

namespace harpersim {

struct Context {
    std::uint64_t seed = 0;
    int threads = 1;
};

const std::vector<std::string>& command_names();

// Runs one subcommand on a parsed config. Returns the summary written to
// <stem>_summary.json. Throws harper::ValidationError for config problems.
json run_command(const std::string& name, const json& config, json& resolved, const Context& ctx,
                 Run& run);

// lattice block with the figure defaults (g_x = 2 pi 4 MHz, g_y = g_x)
harper::LatticeSpec read_lattice(const ConfigReader& r, int L_default, int W_default);

}  // namespace harpersim
