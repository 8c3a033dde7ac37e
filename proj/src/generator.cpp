#include "owct/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "owct/detail/random.hpp"

namespace owct {

namespace {

double signed_target(detail::Rng& rng) {
  const double mag = detail::uniform(rng, 0.5, 2.0);
  return detail::uniform(rng, 0.0, 1.0) < 0.5 ? -mag : mag;
}

}  // namespace

std::string to_string(Profile p) {
  switch (p) {
    case Profile::generic: return "generic";
    case Profile::nilpotent_h: return "nilpotent_h";
    case Profile::contracting_h: return "contracting_h";
    case Profile::expanding_h: return "expanding_h";
    case Profile::sparse_support: return "sparse_support";
  }
  return "generic";
}

Profile profile_from_string(const std::string& name) {
  for (Profile p : all_profiles())
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown profile '" + name + "'");
}

const std::vector<Profile>& all_profiles() {
  static const std::vector<Profile> profiles{Profile::generic, Profile::nilpotent_h,
                                             Profile::contracting_h, Profile::expanding_h,
                                             Profile::sparse_support};
  return profiles;
}

Scenario generate_random_instance(std::uint64_t seed, std::size_t n_atoms, std::size_t n_blocks,
                                  Profile profile, const YoungSpec& young) {
  if (n_atoms < 1 || n_atoms > 64) throw std::invalid_argument("n_atoms must be in [1, 64]");
  if (n_blocks < 1 || n_blocks > n_atoms)
    throw std::invalid_argument("n_blocks must be in [1, n_atoms]");

  detail::Rng rng(seed);
  Scenario s;
  s.name = "random-" + to_string(profile) + "-" + std::to_string(seed);
  s.young = young;

  for (std::size_t i = 0; i < n_atoms; ++i) s.atoms.push_back(detail::uniform(rng, 0.5, 2.0));

  // Every block gets one atom first, the rest land uniformly.
  std::vector<std::size_t> order(n_atoms);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  s.blocks.assign(n_blocks, {});
  for (std::size_t k = 0; k < n_atoms; ++k) {
    const std::size_t b =
        k < n_blocks ? k : std::uniform_int_distribution<std::size_t>(0, n_blocks - 1)(rng);
    s.blocks[b].push_back(order[k]);
  }
  for (auto& b : s.blocks) std::sort(b.begin(), b.end());

  s.u.resize(n_atoms);
  s.w.resize(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    const double mag = detail::uniform(rng, 0.5, 3.0);
    const double sign = detail::uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    s.u[i] = detail::uniform(rng, 0.0, 1.0) < 0.1 ? 0.0 : sign * mag;
    const double wv = detail::uniform(rng, -3.0, 3.0);
    s.w[i] = detail::uniform(rng, 0.0, 1.0) < 0.1 ? 0.0 : wv;
  }

  // Atoms whose w may be adjusted; sparse_support confines w to H.
  std::vector<bool> active(n_atoms, true);
  if (profile == Profile::sparse_support) {
    const std::size_t h_size = std::max<std::size_t>(1, n_atoms / 4);
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(active.begin(), active.end(), false);
    for (std::size_t k = 0; k < h_size; ++k) active[order[k]] = true;
    for (std::size_t i = 0; i < n_atoms; ++i)
      if (!active[i]) s.w[i] = 0.0;
  }

  // Hit a per-block target for h = E(uw) by moving w along u on the block:
  // h changes by c * E(u^2 on active atoms).
  std::vector<double> h(n_blocks, 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    double mass = 0.0, q = 0.0, hb = 0.0;
    for (std::size_t i : s.blocks[b]) {
      mass += s.atoms[i];
      hb += s.u[i] * s.w[i] * s.atoms[i];
      if (active[i]) q += s.u[i] * s.u[i] * s.atoms[i];
    }
    hb /= mass;
    q /= mass;
    const bool zero = profile == Profile::nilpotent_h ||
                      (profile != Profile::expanding_h && detail::uniform(rng, 0.0, 1.0) < 0.2);
    const double target = zero ? 0.0 : signed_target(rng);
    if (q == 0.0) {
      h[b] = hb;
      continue;
    }
    const double c = (target - hb) / q;
    for (std::size_t i : s.blocks[b]) {
      if (!active[i]) continue;
      const double before = s.w[i];
      s.w[i] += c * s.u[i];
      // Exact cancellation (e.g. a single active atom with target 0) leaves
      // roundoff; snap it so the atom is genuinely outside S(w).
      if (std::abs(s.w[i]) <= 1e-12 * std::max(std::abs(before), std::abs(c * s.u[i]))) s.w[i] = 0.0;
    }
    h[b] = target;
  }

  double scale = 1.0;
  if (profile == Profile::contracting_h) {
    const double hmax = std::abs(*std::max_element(h.begin(), h.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    }));
    if (hmax > 0.9) scale = 0.9 / hmax * (1.0 - 1e-12);
  } else if (profile == Profile::expanding_h) {
    double hmin = std::numeric_limits<double>::infinity();
    for (double v : h)
      if (v != 0.0) hmin = std::min(hmin, std::abs(v));
    if (std::isfinite(hmin) && hmin < 1.1) scale = 1.1 / hmin * (1.0 + 1e-12);
  }
  if (scale != 1.0)
    for (double& v : s.w) v *= scale;
  return s;
}

}  // namespace owct
