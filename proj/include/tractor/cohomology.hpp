#pragma once

#include <utility>
#include <vector>

#include "tractor/kernels.hpp"
#include "tractor/representation.hpp"

namespace tractor {

// Basis space of C^k(g_{-1}, V) (cochains) or C_k(g_1, V) (chains, the
// homology side). Basis index = subset_index * module_dim + module_index,
// subsets enumerated in ascending lexicographic order. The E-weight of a
// basis element is degree + module_grade (each wedge slot contributes +1 on
// either side of the duality). A degree of -1 or dim+1 denotes the empty
// space at the end of a complex.
struct CochainSpace {
  const GradedLieAlgebra* alg = nullptr;
  const Representation* rep = nullptr;
  int degree = 0;
  bool chains = false;
  std::vector<std::vector<int>> subsets;

  int dim() const { return int(subsets.size()) * rep->module_dim; }
  int index(int subset_idx, int module_idx) const { return subset_idx * rep->module_dim + module_idx; }
  std::pair<int, int> split_index(int idx) const {
    return {idx / rep->module_dim, idx % rep->module_dim};
  }
  Rational homogeneity_of(int idx) const {
    return Rational(degree) + rep->module_grade[idx % rep->module_dim];
  }
  std::vector<Rational> homogeneities() const;  // distinct, ascending
  std::vector<int> indices_of_homogeneity(const Rational& h) const;  // ascending
};

CochainSpace cochain_space(const GradedLieAlgebra& alg, const Representation& rep, int degree);
CochainSpace chain_space(const GradedLieAlgebra& alg, const Representation& rep, int degree);

struct LinearMap {
  CochainSpace domain;
  CochainSpace codomain;
  SparseMat matrix;  // codomain.dim() x domain.dim()
};

// Chevalley-Eilenberg differential d_k : C^k -> C^{k+1} (g_{-1} abelian, so
// no bracket term). Requires the full g-module action; p-only reps rejected.
LinearMap coboundary(const GradedLieAlgebra& alg, const Representation& rep, int k);

// Homology boundary delta_k : C_k -> C_{k-1} on chains of g_1 with values in
// V; defined for every p-module.
LinearMap boundary(const GradedLieAlgebra& alg, const Representation& rep, int k);

// Kostant codifferential d*_k : C^k -> C^{k-1}: the boundary transported
// through the trace-form duality e_a* <-> zeta_a (dual_g1 of the algebra).
// k >= 1; d*_0 is identically zero by convention and is rejected here.
LinearMap codifferential(const GradedLieAlgebra& alg, const Representation& rep, int k);

// box_k = d_{k-1} d*_k + d*_{k+1} d_k, with the missing end terms zero.
LinearMap laplacian(const GradedLieAlgebra& alg, const Representation& rep, int k);

// Matrix of a g_0 element (coefficient vector over the full algebra basis,
// supported on the g_0 block) acting on C^degree through the module action
// and the coadjoint action on the wedge slots.
SparseMat g0_cochain_action(const GradedLieAlgebra& alg, const Representation& rep, int degree,
                            const RatVec& g0_coeffs);

struct HarmonicVector {
  RatVec coords;  // full C^k coordinates, primitive
  Rational homogeneity;
};

struct HodgeBlock {
  Rational homogeneity;
  int block_dim = 0;
  int dim_im_dstar = 0;
  int dim_ker_box = 0;
  int dim_im_d = 0;
  // Rank facts established by a mod-p certificate (sound lower bounds matched
  // against exact kernel data); prime = 0 means the exact fallback ran.
  bool certified = false;
  PScalar prime = 0;
  bool box_kernel_stable = false;        // ker box^2 == ker box
  bool box_injective_on_im_dstar = false;
  bool sum_is_direct = false;
};

struct HodgeReport {
  int degree = 0;
  int dim_C = 0;
  int dim_im_dstar = 0;
  int dim_ker_box = 0;
  int dim_im_d = 0;
  int dim_H = 0;  // = dim_ker_box
  std::vector<HodgeBlock> blocks;          // ascending homogeneity
  std::vector<HarmonicVector> harmonic;    // grouped by block, same order

  // (homogeneity, dim ker box) for blocks with nonzero harmonic part.
  std::vector<std::pair<Rational, int>> homogeneity_histogram() const;
};

// Per-homogeneity-block Hodge decomposition C^k = im d* + ker box + im d with
// exact dimensions. Kernel bases are exact; the identification ker box =
// ker d n ker d* is certified mod p with an exact-elimination fallback, and
// any genuine violation throws (reported, never patched).
HodgeReport hodge_decomposition(const GradedLieAlgebra& alg, const Representation& rep, int k,
                                ExecMode mode);

std::vector<HarmonicVector> harmonic_basis(const GradedLieAlgebra& alg, const Representation& rep,
                                           int k, ExecMode mode);

// Number of irreducible g_0-summands of the harmonic space: complex dimension
// of the joint kernel of the family raising operators acting on it.
int count_irreducibles(const GradedLieAlgebra& alg, const Representation& rep, int k,
                       const std::vector<HarmonicVector>& harmonic, ExecMode mode);

}  // namespace tractor
