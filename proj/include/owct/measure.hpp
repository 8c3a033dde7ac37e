#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace owct {

/// Real function on a finite atomic space, one value per atom.
using MeasurableFn = Eigen::VectorXd;

using IndexSet = std::vector<std::size_t>;

/// Finitely many atoms with strictly positive measure. The non-atomic part
/// of the ambient space is empty by construction.
class FiniteMeasureSpace {
public:
  /// Atoms are labelled a1..an.
  explicit FiniteMeasureSpace(std::vector<double> weights);
  FiniteMeasureSpace(std::vector<std::string> atom_ids, std::vector<double> weights);

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }
  const std::vector<std::string>& atom_ids() const { return atom_ids_; }
  double total_mass() const { return weights_.sum(); }

private:
  std::vector<std::string> atom_ids_;
  Eigen::VectorXd weights_;
};

/// Partition of the atom indices; generates the sub-sigma-algebra used by
/// the conditional expectation.
class Partition {
public:
  /// Throws std::invalid_argument when blocks overlap, leave an atom
  /// uncovered, reference an out-of-range atom, or are empty.
  Partition(std::vector<IndexSet> blocks, std::size_t n_atoms);

  static Partition single_block(std::size_t n_atoms);
  static Partition finest(std::size_t n_atoms);

  const std::vector<IndexSet>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t n_atoms() const { return block_of_.size(); }
  std::size_t block_of(std::size_t atom) const { return block_of_[atom]; }

private:
  std::vector<IndexSet> blocks_;
  std::vector<std::size_t> block_of_;
};

/// { i : |f_i| > eps }.
IndexSet support(const MeasurableFn& f, double eps);

/// Relative cutoff 1e-10 * (1 + ess_sup(f)).
double default_support_eps(const MeasurableFn& f);
IndexSet support(const MeasurableFn& f);

/// Sum of f_i * mu_i. Throws std::domain_error("non-integrable value") on a
/// non-finite entry.
double integrate(const MeasurableFn& f, const FiniteMeasureSpace& space);

/// max_i |f_i|; every atom has positive mass so this is the essential sup.
double ess_sup(const MeasurableFn& f);

bool is_partition_measurable(const MeasurableFn& f, const Partition& p, double tol);

/// Indicator of a set of atoms.
MeasurableFn indicator(const IndexSet& set, std::size_t n_atoms);

bool is_subset(const IndexSet& a, const IndexSet& b);

}  // namespace owct
