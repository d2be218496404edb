#include "matprod/law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "matprod/semigroup.hpp"

namespace matprod {

MatrixLaw::MatrixLaw(int dim, std::vector<PositiveMatrix> atoms, std::vector<double> weights)
    : dim_(dim), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw PreconditionError("MatrixLaw: needs at least one atom");
  if (weights_.size() != atoms_.size()) {
    throw PreconditionError("MatrixLaw: weights and atoms differ in length");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw PreconditionError("MatrixLaw: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw PreconditionError("MatrixLaw: weights must sum to 1 within 1e-12");
  }
  for (const auto& g : atoms_) {
    if (g.dim() != dim_) throw DimensionError("MatrixLaw: atom dimension mismatch");
    double top = 0.0;
    for (double e : g.entries()) top = std::max(top, e);
    // Entry squares appear in the closed-form norms; keep atom scales where
    // that arithmetic cannot under- or overflow. The product itself may grow
    // without bound -- the simulator renormalizes every step.
    if (top > 0.0 && (top < 1e-100 || top > 1e100)) {
      throw PreconditionError("MatrixLaw: atom scale outside [1e-100, 1e100]");
    }
  }
  prefix_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    prefix_[i] = acc;
  }
  prefix_.back() = 1.0;
}

int MatrixLaw::atom_index_for(double u) const {
  for (std::size_t i = 0; i + 1 < prefix_.size(); ++i) {
    if (u < prefix_[i]) return static_cast<int>(i);
  }
  return static_cast<int>(prefix_.size()) - 1;
}

std::uint64_t MatrixLaw::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* p, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(&dim_, sizeof(dim_));
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    feed(&weights_[i], sizeof(double));
    const auto& e = atoms_[i].entries();
    feed(e.data(), e.size() * sizeof(double));
  }
  return h;
}

MatrixLaw make_law_explicit(int dim, std::vector<PositiveMatrix> atoms,
                            std::vector<double> weights) {
  return MatrixLaw(dim, std::move(atoms), std::move(weights));
}

MatrixLaw make_law_rank_one(int dim, const std::vector<double>& scalars,
                            std::vector<double> weights) {
  std::vector<PositiveMatrix> atoms;
  atoms.reserve(scalars.size());
  PositiveMatrix ones = PositiveMatrix::all_ones(dim);
  for (double a : scalars) {
    if (!(a > 0.0)) throw PreconditionError("rank-one recipe: scalars must be > 0");
    atoms.push_back(ones.scaled(a));
  }
  return MatrixLaw(dim, std::move(atoms), std::move(weights));
}

MatrixLaw make_law_random_column_bounded(int dim, int count, double column_constant,
                                         std::uint64_t seed) {
  if (count < 1) throw PreconditionError("random law: count must be >= 1");
  if (!(column_constant >= 1.0)) {
    throw PreconditionError("random law: column constant must be >= 1");
  }
  RandomStream rng(seed, 0x1a77);
  double log_c = std::log(column_constant);
  std::vector<PositiveMatrix> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (int a = 0; a < count; ++a) {
    std::vector<double> e(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int j = 0; j < dim; ++j) {
      double base = std::exp(rng.next_in(-std::log(2.0), std::log(2.0)));
      for (int i = 0; i < dim; ++i) {
        e[static_cast<std::size_t>(i * dim + j)] = base * std::exp(rng.next_unit() * log_c);
      }
    }
    atoms.emplace_back(dim, std::move(e));
  }
  std::vector<double> w(static_cast<std::size_t>(count),
                        1.0 / static_cast<double>(count));
  return MatrixLaw(dim, std::move(atoms), std::move(w));
}

const PositiveMatrix& sample_matrix(const MatrixLaw& law, RandomStream& rng) {
  return law.atom(law.atom_index_for(rng.next_unit()));
}

namespace {

double real_gcd_pair(double a, double b, double tol) {
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r > b - tol) r = 0.0;  // residue within tol of a full multiple
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

ArithmeticityResult arithmeticity_heuristic(const MatrixLaw& law, int depth, double tol) {
  if (depth < 1) throw PreconditionError("arithmeticity_heuristic: depth >= 1");

  // All products of atoms up to the given length, breadth first.
  std::vector<PositiveMatrix> frontier = law.atoms();
  std::vector<double> log_rhos;
  for (int level = 1; level <= depth; ++level) {
    for (const auto& p : frontier) {
      if (p.strictly_positive()) {
        log_rhos.push_back(std::log(spectral_radius(p, 1e-13).rho));
      }
    }
    if (level == depth) break;
    std::vector<PositiveMatrix> next;
    next.reserve(frontier.size() * law.atoms().size());
    for (const auto& p : frontier) {
      for (const auto& a : law.atoms()) next.push_back(a * p);
    }
    frontier = std::move(next);
  }

  if (log_rhos.empty()) {
    return ArithmeticityResult{false, false, 0.0};
  }

  std::sort(log_rhos.begin(), log_rhos.end());
  log_rhos.erase(std::unique(log_rhos.begin(), log_rhos.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 log_rhos.end());
  if (log_rhos.size() < 2) {
    // A single value generates a lattice trivially.
    return ArithmeticityResult{true, true, std::abs(log_rhos.front())};
  }

  std::vector<double> diffs;
  for (std::size_t i = 0; i < log_rhos.size(); ++i) {
    for (std::size_t j = i + 1; j < log_rhos.size(); ++j) {
      double d = log_rhos[j] - log_rhos[i];
      if (d > tol) diffs.push_back(d);
    }
  }
  if (diffs.empty()) return ArithmeticityResult{true, true, 0.0};

  double g = diffs.front();
  for (std::size_t i = 1; i < diffs.size(); ++i) g = real_gcd_pair(g, diffs[i], tol);
  if (!(g > 1e-6)) return ArithmeticityResult{false, true, 0.0};

  // Verify and refine: every difference must be an integer multiple within tol.
  double num = 0.0, den = 0.0;
  for (double d : diffs) {
    double k = std::round(d / g);
    if (std::abs(d - k * g) > tol) return ArithmeticityResult{false, true, 0.0};
    num += d * k;
    den += k * k;
  }
  double refined = den > 0.0 ? num / den : g;
  return ArithmeticityResult{true, true, refined};
}

LawConditionReport law_condition_report(const MatrixLaw& law, int arithmetic_depth) {
  LawConditionReport rep{};
  rep.allowable_all = true;
  bool all_strict = true;
  double a3 = 1.0;
  for (const auto& g : law.atoms()) {
    auto cm = check_matrix_conditions(g);
    rep.allowable_all = rep.allowable_all && cm.allowable;
    all_strict = all_strict && cm.strictly_positive;
    if (cm.column_constant) a3 = std::max(a3, *cm.column_constant);
  }
  // Finite support: every moment of N(g) is finite.
  rep.eta_estimate = 1.0;
  if (all_strict) rep.a3_constant = a3;
  rep.harmonic_ok = all_strict;
  rep.harmonic_delta = all_strict ? 1.0 : 0.0;
  // Positivity: strictly positive products exist iff the heuristic's product
  // scan finds one; a strictly positive atom settles it immediately.
  auto arith = arithmeticity_heuristic(law, arithmetic_depth);
  rep.positivity = arith.conclusive;
  rep.arithmetic_warning = arith.warning;
  rep.arithmetic_conclusive = arith.conclusive;
  return rep;
}

}  // namespace matprod
