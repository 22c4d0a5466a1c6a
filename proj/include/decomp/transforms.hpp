#pragma once

#include "decomp/kkt.hpp"

namespace decomp {

struct NotStationary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TransformDirection { kPdToDd, kDdToPd, kForward, kBackward };

struct TransformCertificate {
  TransformDirection direction = TransformDirection::kForward;
  double source_residual = 0.0;
  double image_residual = 0.0;
  std::string note;
};

// ---------------------------------------------------------------------------
// Coupling-variable problem -> coupling-constraint problem. Blocks are
// z_0 = y and z_i = (x_i, y); consensus rows (y-copy of z_i) - z_0 = 0 come
// first in the coupled equalities, the lifted per-block equalities are
// stacked behind them at offset sum of earlier blocks' equality dims.
// ---------------------------------------------------------------------------

struct PdToDd {
  ProblemDD lifted;           // I+1 blocks, coupling equalities only
  std::vector<int> z_dims;    // n0, n1+n0, ..., nI+n0
  int consensus_rows = 0;     // n0 * I
  int lifted_eq_rows = 0;     // sum of source m_i
  const ProblemPD* source = nullptr;
};

PdToDd pd_to_dd(const ProblemPD& p);

BlockVector lift_point(const PdToDd& t, const BlockVector& x, const VectorXd& y);

// Coupling equality multipliers: consensus duals are fixed by block
// stationarity to minus the per-block master gradients; lifted equality
// duals are the source lambda_i.
struct LiftedDdMultipliers {
  VectorXd lambda_coupled;                // consensus then lifted equalities
  std::vector<MultiplierSet> block_mult;  // for the lifted blocks (z_0 first)
};

LiftedDdMultipliers lift_multipliers(const PdToDd& t, const BlockVector& x, const VectorXd& y,
                                     const std::vector<MultiplierSet>& block_mults,
                                     const VectorXd& mu0);

// ---------------------------------------------------------------------------
// Coupling-constraint problem -> coupling-variable problem with slack blocks
// z_i (inequality slacks) and z_{i+I} (equality slacks). The lifted problem
// is materialized directly as an Nlp over (x, z).
// ---------------------------------------------------------------------------

struct DdToPd {
  Nlp lifted;
  int r = 0, m = 0, blocks = 0;
  std::vector<int> x_dims;
  const ProblemDD* source = nullptr;
};

DdToPd dd_to_pd(const ProblemDD& p);

VectorXd lift_point(const DdToPd& t, const BlockVector& x);
MultiplierSet lift_multipliers(const DdToPd& t, const BlockVector& x, const VectorXd& mu,
                               const VectorXd& lambda,
                               const std::vector<MultiplierSet>& block_mults);

// Backward direction: read the x part and coupling duals off a stationary
// point of the lifted problem.
struct DdPoint {
  BlockVector x;
  VectorXd mu, lambda;
  std::vector<MultiplierSet> block_mult;
};
DdPoint lower_point(const DdToPd& t, const VectorXd& lifted_point, const MultiplierSet& lifted_m);

// ---------------------------------------------------------------------------
// Certificate producers. `tol` bounds the admissible source residual.
// ---------------------------------------------------------------------------

TransformCertificate map_stationary_pd_to_dd(const ProblemPD& p, const BlockVector& x,
                                             const VectorXd& y,
                                             const std::vector<MultiplierSet>& block_mults,
                                             const VectorXd& mu0, double tol = 1e-8);

TransformCertificate map_stationary_dd_to_pd(const ProblemDD& p, const BlockVector& x,
                                             const VectorXd& mu, const VectorXd& lambda,
                                             const std::vector<MultiplierSet>& block_mults,
                                             double tol = 1e-8);

// Backward check for the dd->pd lift: residual of the recovered source point.
TransformCertificate map_stationary_pd_from_lifted(const DdToPd& t, const VectorXd& lifted_point,
                                                   const MultiplierSet& lifted_m,
                                                   double tol = 1e-8);

}  // namespace decomp
