#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "normhol/holonomy.hpp"

namespace normhol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;
inline constexpr int kExitUsage = 64;

/// Runs one subcommand; args[0] is the program name. Reports go to `out`,
/// diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline const std::vector<std::string> kSubcommands{
    "curvature", "screen", "decompose", "classify-bbi",
    "weak-berger", "curvature-space", "geometry", "pipeline"};

/// Report of one subcommand on already parsed input. `mode` is "exact",
/// "float" or empty for the subcommand default. Throws InvalidInput for bad
/// input or options.
nlohmann::json execute(const std::string& subcommand, const nlohmann::json& input,
                       const std::string& mode = "", double tol = 1e-9,
                       std::uint64_t seed = kDefaultSeed);

}  // namespace normhol::cli
