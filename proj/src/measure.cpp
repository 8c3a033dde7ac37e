#include "owct/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace owct {

namespace {

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i + 1));
  return ids;
}

}  // namespace

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<double> weights)
    : FiniteMeasureSpace(default_ids(weights.size()), weights) {}

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<std::string> atom_ids,
                                       std::vector<double> weights)
    : atom_ids_(std::move(atom_ids)) {
  if (weights.empty()) throw std::invalid_argument("measure space needs at least one atom");
  if (atom_ids_.size() != weights.size())
    throw std::invalid_argument("atom_ids and weights differ in length");
  std::unordered_set<std::string> seen;
  for (const auto& id : atom_ids_) {
    if (!seen.insert(id).second) throw std::invalid_argument("duplicate atom id '" + id + "'");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("atom weight must be > 0");
  }
  weights_ = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                               static_cast<Eigen::Index>(weights.size()));
}

Partition::Partition(std::vector<IndexSet> blocks, std::size_t n_atoms)
    : blocks_(std::move(blocks)), block_of_(n_atoms, n_atoms) {
  // Disjointness is reported before range and coverage problems.
  std::unordered_set<std::size_t> seen;
  for (const auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("blocks must be nonempty");
    for (std::size_t i : b) {
      if (!seen.insert(i).second) throw std::invalid_argument("blocks must be disjoint");
    }
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    for (std::size_t i : blocks_[k]) {
      if (i >= n_atoms)
        throw std::invalid_argument("block index " + std::to_string(i) + " out of range");
      block_of_[i] = k;
    }
  }
  for (std::size_t i = 0; i < n_atoms; ++i) {
    if (block_of_[i] == n_atoms)
      throw std::invalid_argument("blocks must cover every atom (atom " + std::to_string(i) +
                                  " missing)");
  }
  for (auto& b : blocks_) std::sort(b.begin(), b.end());
}

Partition Partition::single_block(std::size_t n_atoms) {
  IndexSet all(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) all[i] = i;
  return Partition({all}, n_atoms);
}

Partition Partition::finest(std::size_t n_atoms) {
  std::vector<IndexSet> blocks;
  for (std::size_t i = 0; i < n_atoms; ++i) blocks.push_back({i});
  return Partition(std::move(blocks), n_atoms);
}

IndexSet support(const MeasurableFn& f, double eps) {
  IndexSet s;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::abs(f(i)) > eps) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

double default_support_eps(const MeasurableFn& f) { return 1e-10 * (1.0 + ess_sup(f)); }

IndexSet support(const MeasurableFn& f) { return support(f, default_support_eps(f)); }

double integrate(const MeasurableFn& f, const FiniteMeasureSpace& space) {
  if (static_cast<std::size_t>(f.size()) != space.size())
    throw std::invalid_argument("function length does not match atom count");
  if (!f.allFinite()) throw std::domain_error("non-integrable value");
  return f.dot(space.weights());
}

double ess_sup(const MeasurableFn& f) { return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff(); }

bool is_partition_measurable(const MeasurableFn& f, const Partition& p, double tol) {
  for (const auto& b : p.blocks()) {
    const double ref = f(static_cast<Eigen::Index>(b.front()));
    for (std::size_t i : b) {
      if (std::abs(f(static_cast<Eigen::Index>(i)) - ref) > tol) return false;
    }
  }
  return true;
}

MeasurableFn indicator(const IndexSet& set, std::size_t n_atoms) {
  MeasurableFn chi = MeasurableFn::Zero(static_cast<Eigen::Index>(n_atoms));
  for (std::size_t i : set) chi(static_cast<Eigen::Index>(i)) = 1.0;
  return chi;
}

bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace owct
