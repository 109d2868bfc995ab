#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "lawson/trimesh.hpp"

namespace lawson {

using SparseMat = Eigen::SparseMatrix<double>;

// Dirichlet vertex set; everything else gets the natural (Neumann) condition.
struct MixedBC {
  std::vector<int> dirichlet;
};

// Discrete second-variation pencil (S - P) v = lambda M v on the free
// degrees of freedom: cotan stiffness S from intrinsic edge lengths, nodal
// potential P = diag(pot * mass), lumped mass M. With the sign convention
// index = #{lambda < 0}.
struct DiscreteOperator {
  SparseMat stiffness;           // free x free, PSD
  Eigen::VectorXd potential;     // per free dof, the nodal value (|A|^2 + 2)
  Eigen::VectorXd mass;          // per free dof, > 0
  SparseMat pencil;              // stiffness - diag(potential .* mass)
  std::vector<int> free_to_full;
  std::vector<int> full_to_free;  // -1 on Dirichlet vertices
  int full_size = 0;
  int negative_cotan_edges = 0;

  int size() const { return static_cast<int>(mass.size()); }
  Eigen::VectorXd restrict_full(const Eigen::VectorXd& full) const;
  Eigen::VectorXd extend_free(const Eigen::VectorXd& free) const;
};

// potential = per-vertex |A|^2 + 2 values (full mesh indexing)
DiscreteOperator assemble_operator(const TriMesh& mesh,
                                   const Eigen::VectorXd& potential,
                                   const MixedBC* bc = nullptr);

struct Spectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd vectors;      // full mesh size x k, zeros on Dirichlet dofs
  Eigen::VectorXd residuals;    // ||(S-P)v - lambda M v|| / ||v||
};

// k smallest eigenpairs; dense solve for small problems, shift-invert
// Lanczos with full reorthogonalization above that. Deterministic.
Spectrum solve_smallest(const DiscreteOperator& op, int k, double tol = 1e-10);

// #{lambda < t} by Sylvester inertia of pencil - t M (exact integer count)
int count_below(const DiscreteOperator& op, double t);

struct CountResult {
  int index = 0;
  int nullity = 0;
  double zero_band = 0.0;
  double cluster_radius = 0.0;  // largest |lambda| inside the zero cluster
  double next_abs = 0.0;        // smallest |lambda| outside
  bool certified = false;
};

// index/nullity with a fixed band
CountResult count_with_band(const Spectrum& spec, double band);

// Adaptive gap rule: the candidate zero cluster is |lambda| <= 10*scale_hint,
// the band sits halfway to the rest of the spectrum, certification demands a
// 5x gap plus agreement with the inertia counts.
CountResult count_certified(const DiscreteOperator& op, const Spectrum& spec,
                            double scale_hint);

// mass-normalized operator residual ||(S-P) f||_{M^-1} / ||f||_M of a
// per-vertex field (full mesh indexing)
double operator_residual(const DiscreteOperator& op, const Eigen::VectorXd& field);

// M-inner product on full-size fields (Dirichlet dofs ignored)
double mass_inner(const DiscreteOperator& op, const Eigen::VectorXd& f,
                  const Eigen::VectorXd& g);

// principal angles (radians, descending) between two spans of full-size
// fields in the mass inner product
std::vector<double> principal_angles(const DiscreteOperator& op,
                                     const Eigen::MatrixXd& span_a,
                                     const Eigen::MatrixXd& span_b);

}  // namespace lawson
