#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owct/scenario.hpp"

namespace owct {

/// Regimes of the symbol h = E(uw):
///   generic         per-block h is 0 (p = 0.2) or +-U[0.5, 2]
///   nilpotent_h     h = 0, hence T^2 = 0
///   contracting_h   ||h||_inf <= 0.9
///   expanding_h     |h| >= 1.1 wherever u is not identically 0 on the block
///   sparse_support  w vanishes outside a small random atom set H
enum class Profile { generic, nilpotent_h, contracting_h, expanding_h, sparse_support };

std::string to_string(Profile p);
Profile profile_from_string(const std::string& name);
const std::vector<Profile>& all_profiles();

/// Deterministic random instance; requires 1 <= n_blocks <= n_atoms <= 64.
Scenario generate_random_instance(std::uint64_t seed, std::size_t n_atoms, std::size_t n_blocks,
                                  Profile profile, const YoungSpec& young = {});

}  // namespace owct
