#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matprod/matrix.hpp"
#include "matprod/rng.hpp"

namespace matprod {

/// Finite-support probability law over positive matrices.
class MatrixLaw {
 public:
  MatrixLaw(int dim, std::vector<PositiveMatrix> atoms, std::vector<double> weights);

  int dim() const { return dim_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<PositiveMatrix>& atoms() const { return atoms_; }
  const PositiveMatrix& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

  /// Inverse CDF over the weight prefix sums: the smallest i with u < P_i.
  int atom_index_for(double u) const;

  /// FNV-1a over the canonical serialization; used in experiment manifests.
  std::uint64_t hash() const;

 private:
  int dim_;
  std::vector<PositiveMatrix> atoms_;
  std::vector<double> weights_;
  std::vector<double> prefix_;
};

/// Atom list recipe.
MatrixLaw make_law_explicit(int dim, std::vector<PositiveMatrix> atoms,
                            std::vector<double> weights);
/// Rank-one family a*J with J the all-ones matrix and a from a finite scalar
/// law. With d = 2, scalars {1/e, e} and weights {1/2, 1/2} this is the
/// canonical closed-form test law.
MatrixLaw make_law_rank_one(int dim, const std::vector<double>& scalars,
                            std::vector<double> weights);
/// Random strictly positive family whose per-column entry ratios are bounded
/// by column_constant; equal weights.
MatrixLaw make_law_random_column_bounded(int dim, int count, double column_constant,
                                         std::uint64_t seed);

const PositiveMatrix& sample_matrix(const MatrixLaw& law, RandomStream& rng);

struct ArithmeticityResult {
  bool warning;      // true: the collected log spectral radii fit one lattice
  bool conclusive;   // false: no strictly positive product up to the depth
  double spacing;    // fitted lattice spacing when warning is true
};

/// Collects log rho(g) over strictly positive products of atoms up to the
/// given length and looks for a common spacing with a tolerance Euclid (real
/// gcd) routine. A heuristic, not a proof: absence of a warning does not
/// certify non-arithmeticity.
ArithmeticityResult arithmeticity_heuristic(const MatrixLaw& law, int depth = 4,
                                            double tol = 1e-9);

struct LawConditionReport {
  /// Largest eta <= 1 with a finite exponential moment; finite support makes
  /// every moment finite, reported as 1.
  std::optional<double> eta_estimate;
  /// Max over atoms of the per-column entry ratio bound; present iff every
  /// atom is strictly positive.
  std::optional<double> a3_constant;
  bool allowable_all;
  bool positivity;       // some atom (hence some product) strictly positive
  bool harmonic_ok;      // all atom entries > 0 => inverse-entry moments finite
  double harmonic_delta;
  bool arithmetic_warning;
  bool arithmetic_conclusive;
};

LawConditionReport law_condition_report(const MatrixLaw& law, int arithmetic_depth = 4);

}  // namespace matprod
