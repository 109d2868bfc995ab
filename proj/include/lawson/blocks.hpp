#pragma once

#include "lawson/jacobi.hpp"
#include "lawson/killing.hpp"
#include "lawson/surface.hpp"

namespace lawson {

// The six summands of the spectral decomposition by the reflections through
// Sigma^0, Sigma^{pi/2} (superscripts) and Sigma_0 (subscript). The first
// two merge both subscript parities.
enum class BlockId { Vmm, Vpp, VmpMinus, VpmMinus, VmpPlus, VpmPlus };
std::array<BlockId, 6> all_blocks();
std::string block_name(BlockId id);
// expected (index, nullity) per block from the main theorem's table
std::pair<int, int> block_expected_counts(BlockId id, int m);

// --- projection mode ---------------------------------------------------------

// Restriction of the closed-surface pencil to a character subspace of the
// order-8 reflection group, realized on orbit representatives. Dofs whose
// stabilizer carries a -1 character are dropped (they vanish identically).
struct ProjectedOperator {
  DiscreteOperator op;        // reduced pencil (all dofs free)
  Eigen::SparseMatrix<double> lift;  // full-size x reduced: embeds block functions
};
ProjectedOperator project_character(const SurfaceMesh& s, const DiscreteOperator& full,
                                    int s_up0, int s_up1, int s_lo0);

// --- fundamental mode ----------------------------------------------------------

// Mixed-condition problem on the fundamental piece equivalent to the block.
struct FundamentalProblem {
  Submesh domain;
  MixedBC bc;               // Dirichlet vertices in submesh indexing
  Eigen::VectorXd potential;  // per submesh vertex
  std::string description;
};
FundamentalProblem block_fundamental_problem(const SurfaceMesh& s, BlockId id);

// --- block spectra and table ---------------------------------------------------

struct BlockReport {
  BlockId id{};
  int index = 0, nullity = 0;
  bool certified = false;
  Eigen::VectorXd eigs_projection;
  Eigen::VectorXd eigs_fundamental;
  double eig_disagreement = 0.0;  // max over the compared leading modes
};

// Counts per block (projection mode counts, certified), with the fundamental
// spectra computed alongside for the cross-check.
std::vector<BlockReport> block_table(const SurfaceMesh& s, const DiscreteOperator& full,
                                     double scale_hint, int modes = 12);

}  // namespace lawson
