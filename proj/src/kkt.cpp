#include "decomp/kkt.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace decomp {

namespace {

// Lawson-Hanson nonnegative least squares, min ||A z - b|| with z_j >= 0
// except for indices flagged free. Free columns live permanently in the
// passive set. Sizes here are tiny (a handful of constraints), so the dense
// active-set loop is plenty.
VectorXd nnls(const MatrixXd& a, const VectorXd& b, const std::vector<bool>& free_col) {
  const int n = static_cast<int>(a.cols());
  VectorXd z = VectorXd::Zero(n);
  if (n == 0) return z;

  std::vector<bool> passive(static_cast<size_t>(n), false);
  for (int j = 0; j < n; ++j) passive[static_cast<size_t>(j)] = free_col[static_cast<size_t>(j)];

  auto solve_passive = [&](VectorXd& out) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[static_cast<size_t>(j)]) idx.push_back(j);
    out = VectorXd::Zero(n);
    if (idx.empty()) return;
    MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    VectorXd sol = ap.completeOrthogonalDecomposition().solve(b);
    for (size_t k = 0; k < idx.size(); ++k) out[idx[k]] = sol[static_cast<Eigen::Index>(k)];
  };

  solve_passive(z);
  // Clip any negative constrained entries from the free-column warm solve.
  for (int j = 0; j < n; ++j)
    if (!free_col[static_cast<size_t>(j)] && z[j] < 0) z[j] = 0;

  const double tol = 1e-12 * (1.0 + b.norm());
  for (int outer = 0; outer < 8 * n + 16; ++outer) {
    VectorXd w = a.transpose() * (b - a * z);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[static_cast<size_t>(j)] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<size_t>(best)] = true;

    for (int inner = 0; inner < 8 * n + 16; ++inner) {
      VectorXd trial;
      solve_passive(trial);
      double alpha = 1.0;
      int blocker = -1;
      for (int j = 0; j < n; ++j) {
        if (!passive[static_cast<size_t>(j)] || free_col[static_cast<size_t>(j)]) continue;
        if (trial[j] < 0) {
          double step = z[j] / (z[j] - trial[j]);
          if (step < alpha) {
            alpha = step;
            blocker = j;
          }
        }
      }
      if (blocker < 0) {
        z = trial;
        break;
      }
      z += alpha * (trial - z);
      z[blocker] = 0;
      passive[static_cast<size_t>(blocker)] = false;
    }
  }
  return z;
}

double pos_part_inf_norm(const VectorXd& v) {
  double m = 0.0;
  for (int j = 0; j < v.size(); ++j) m = std::max(m, v[j]);
  return std::max(0.0, m);
}

}  // namespace

MultiplierSet MultiplierSet::zeros(const Nlp& nlp) {
  MultiplierSet m;
  m.ineq = VectorXd::Zero(nlp.ineq.dim_out);
  m.eq = VectorXd::Zero(nlp.eq.dim_out);
  m.bound_lower = VectorXd::Zero(nlp.dim);
  m.bound_upper = VectorXd::Zero(nlp.dim);
  return m;
}

double KKTResidual::total() const {
  return std::max(std::max(stationarity, complementarity), std::max(primal, dual));
}

ActiveSet active_set(const VectorXd& g_values, double tol) {
  ActiveSet a;
  a.tolerance = tol;
  for (int j = 0; j < g_values.size(); ++j)
    if (std::fabs(g_values[j]) <= tol) a.indices.push_back(j);
  return a;
}

KKTResidual kkt_residual(const Nlp& nlp, const VectorXd& x, const MultiplierSet& m) {
  if (x.size() != nlp.dim) throw DimensionMismatch("kkt_residual: point dimension");
  if (m.ineq.size() != nlp.ineq.dim_out || m.eq.size() != nlp.eq.dim_out)
    throw DimensionMismatch("kkt_residual: multiplier dimensions");

  VectorXd r = nlp.objective_grad(x);
  VectorXd g(0), h(0);
  if (nlp.ineq.dim_out > 0) {
    g = nlp.ineq.value(x);
    r += nlp.ineq.grad(x) * m.ineq;
  }
  if (nlp.eq.dim_out > 0) {
    h = nlp.eq.value(x);
    r += nlp.eq.grad(x) * m.eq;
  }
  if (m.bound_lower.size() == nlp.dim) r -= m.bound_lower;
  if (m.bound_upper.size() == nlp.dim) r += m.bound_upper;

  KKTResidual out;
  out.stationarity = (x - nlp.box.project(x - r)).cwiseAbs().maxCoeff();

  for (int j = 0; j < g.size(); ++j)
    out.complementarity = std::max(out.complementarity, std::fabs(m.ineq[j] * g[j]));
  for (int j = 0; j < nlp.dim && m.bound_lower.size() == nlp.dim; ++j) {
    if (std::isfinite(nlp.box.lower[j]))
      out.complementarity =
          std::max(out.complementarity, std::fabs(m.bound_lower[j] * (x[j] - nlp.box.lower[j])));
    if (std::isfinite(nlp.box.upper[j]))
      out.complementarity =
          std::max(out.complementarity, std::fabs(m.bound_upper[j] * (nlp.box.upper[j] - x[j])));
  }

  out.primal = pos_part_inf_norm(g);
  if (h.size()) out.primal = std::max(out.primal, h.cwiseAbs().maxCoeff());
  out.primal = std::max(out.primal, (x - nlp.box.project(x)).cwiseAbs().maxCoeff());

  if (m.ineq.size()) out.dual = std::max(out.dual, pos_part_inf_norm(-m.ineq));
  if (m.bound_lower.size()) out.dual = std::max(out.dual, pos_part_inf_norm(-m.bound_lower));
  if (m.bound_upper.size()) out.dual = std::max(out.dual, pos_part_inf_norm(-m.bound_upper));
  return out;
}

KktSystemSolution solve_kkt_system(const Nlp& nlp, const VectorXd& x, const ActiveSet& active) {
  const int na = static_cast<int>(active.indices.size());
  const int m = nlp.eq.dim_out;
  VectorXd minus_grad = -nlp.objective_grad(x);

  KktSystemSolution sol;
  sol.multipliers = MultiplierSet::zeros(nlp);
  if (na + m == 0) {
    sol.linear_residual = minus_grad.cwiseAbs().size() ? minus_grad.cwiseAbs().maxCoeff() : 0.0;
    return sol;
  }

  MatrixXd a(nlp.dim, na + m);
  if (na > 0) {
    MatrixXd gg = nlp.ineq.grad(x);
    for (int k = 0; k < na; ++k) a.col(k) = gg.col(active.indices[static_cast<size_t>(k)]);
  }
  if (m > 0) a.rightCols(m) = nlp.eq.grad(x);

  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    rank += svd.singularValues()(k) > kRankTol * smax ? 1 : 0;
  sol.rank_deficient = rank < a.cols();

  VectorXd z = a.completeOrthogonalDecomposition().solve(minus_grad);
  sol.linear_residual = (a * z - minus_grad).cwiseAbs().maxCoeff();

  for (int k = 0; k < na; ++k) {
    double mu = z[k];
    if (mu < -1e-8)
      throw NegativeMultiplier("solve_kkt_system: inequality multiplier " +
                               std::to_string(active.indices[static_cast<size_t>(k)]) +
                               " is negative");
    sol.multipliers.ineq[active.indices[static_cast<size_t>(k)]] = std::max(mu, 0.0);
  }
  if (m > 0) sol.multipliers.eq = z.tail(m);
  return sol;
}

namespace {
MultiplierSet nnls_multipliers(const Nlp& nlp, const VectorXd& x, double active_tol);
}  // namespace

MultiplierSet solve_kkt_conditions(const Nlp& nlp, const VectorXd& x, double active_tol) {
  MultiplierSet out = nnls_multipliers(nlp, x, active_tol);
  if (kkt_residual(nlp, x, out).stationarity > 1e-8)
    throw NoMultipliers("solve_kkt_conditions: point is not stationary");
  return out;
}

MultiplierSet fit_multipliers(const Nlp& nlp, const VectorXd& x, double active_tol) {
  return nnls_multipliers(nlp, x, active_tol);
}

namespace {
MultiplierSet nnls_multipliers(const Nlp& nlp, const VectorXd& x, double active_tol) {
  VectorXd g = nlp.ineq.dim_out ? nlp.ineq.value(x) : VectorXd(0);
  ActiveSet act = active_set(g, active_tol);

  std::vector<int> low_act, up_act;
  for (int j = 0; j < nlp.dim; ++j) {
    if (std::isfinite(nlp.box.lower[j]) && std::fabs(x[j] - nlp.box.lower[j]) <= active_tol)
      low_act.push_back(j);
    if (std::isfinite(nlp.box.upper[j]) && std::fabs(x[j] - nlp.box.upper[j]) <= active_tol)
      up_act.push_back(j);
  }

  const int na = static_cast<int>(act.indices.size());
  const int m = nlp.eq.dim_out;
  const int nl = static_cast<int>(low_act.size());
  const int nu = static_cast<int>(up_act.size());
  const int cols = na + m + nl + nu;

  MatrixXd a = MatrixXd::Zero(nlp.dim, cols);
  std::vector<bool> free_col(static_cast<size_t>(cols), false);
  if (na > 0) {
    MatrixXd gg = nlp.ineq.grad(x);
    for (int k = 0; k < na; ++k) a.col(k) = gg.col(act.indices[static_cast<size_t>(k)]);
  }
  if (m > 0) {
    a.middleCols(na, m) = nlp.eq.grad(x);
    for (int k = 0; k < m; ++k) free_col[static_cast<size_t>(na + k)] = true;
  }
  for (int k = 0; k < nl; ++k) a(low_act[static_cast<size_t>(k)], na + m + k) = -1.0;
  for (int k = 0; k < nu; ++k) a(up_act[static_cast<size_t>(k)], na + m + nl + k) = 1.0;

  VectorXd rhs = -nlp.objective_grad(x);
  VectorXd z = nnls(a, rhs, free_col);

  MultiplierSet out = MultiplierSet::zeros(nlp);
  for (int k = 0; k < na; ++k) out.ineq[act.indices[static_cast<size_t>(k)]] = z[k];
  if (m > 0) out.eq = z.segment(na, m);
  for (int k = 0; k < nl; ++k) out.bound_lower[low_act[static_cast<size_t>(k)]] = z[na + m + k];
  for (int k = 0; k < nu; ++k) out.bound_upper[up_act[static_cast<size_t>(k)]] = z[na + m + nl + k];
  return out;
}
}  // namespace

MultiplierSet recover_multipliers(const Nlp& nlp, const VectorXd& x, double active_tol) {
  if (nlp.box.is_interior(x)) {
    VectorXd g = nlp.ineq.dim_out ? nlp.ineq.value(x) : VectorXd(0);
    return solve_kkt_system(nlp, x, active_set(g, active_tol)).multipliers;
  }
  return solve_kkt_conditions(nlp, x, active_tol);
}

InvertibilityProbe kkt_jacobian_invertible(const Nlp& nlp, const VectorXd& x,
                                           const MultiplierSet& m, double cond_threshold) {
  const int r = nlp.ineq.dim_out;
  const int me = nlp.eq.dim_out;
  const int n = nlp.dim;

  // Active set frozen at the probe point.
  std::vector<bool> is_active(static_cast<size_t>(r), false);
  if (r > 0) {
    VectorXd g = nlp.ineq.value(x);
    for (int j : active_set(g, kActiveTolDefault).indices) is_active[static_cast<size_t>(j)] = true;
  }

  auto kkt_fn = [&](const VectorXd& z) -> VectorXd {
    VectorXd xx = z.head(n);
    VectorXd mu = z.segment(n, r);
    VectorXd lam = z.tail(me);
    VectorXd out(n + r + me);
    VectorXd stat = nlp.objective_grad(xx);
    if (r > 0) stat += nlp.ineq.grad(xx) * mu;
    if (me > 0) stat += nlp.eq.grad(xx) * lam;
    out.head(n) = stat;
    if (r > 0) {
      VectorXd g = nlp.ineq.value(xx);
      for (int j = 0; j < r; ++j) out[n + j] = is_active[static_cast<size_t>(j)] ? g[j] : mu[j];
    }
    if (me > 0) out.tail(me) = nlp.eq.value(xx);
    return out;
  };

  VectorXd z(n + r + me);
  z.head(n) = x;
  if (r > 0) z.segment(n, r) = m.ineq;
  if (me > 0) z.tail(me) = m.eq;

  MatrixXd jac_t = fd_gradient_map(kkt_fn, z, n + r + me);

  // Ruiz-style equilibration so the estimate measures structural
  // singularity rather than the constraint/objective unit mismatch.
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int i = 0; i < jac_t.rows(); ++i) {
      double s = std::sqrt(jac_t.row(i).cwiseAbs().maxCoeff());
      if (s > 0) jac_t.row(i) /= s;
    }
    for (int j = 0; j < jac_t.cols(); ++j) {
      double s = std::sqrt(jac_t.col(j).cwiseAbs().maxCoeff());
      if (s > 0) jac_t.col(j) /= s;
    }
  }

  Eigen::JacobiSVD<MatrixXd> svd(jac_t);
  const auto& sv = svd.singularValues();
  InvertibilityProbe probe;
  double smax = sv.size() ? sv(0) : 0.0;
  double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  probe.condition_estimate =
      (smin <= 0.0) ? std::numeric_limits<double>::infinity() : smax / smin;
  probe.invertible = probe.condition_estimate < cond_threshold;
  return probe;
}

Nlp full_nlp(const ProblemPD& p) {
  Nlp nlp;
  std::vector<int> dims = p.block_dims;
  dims.push_back(p.y_dim);
  nlp.dim = 0;
  for (int d : dims) nlp.dim += d;

  auto split = [p, dims](const VectorXd& v) {
    BlockVector bv = BlockVector::unflatten(v, dims);
    VectorXd y = bv.blocks.back();
    bv.blocks.pop_back();
    return std::make_pair(bv, y);
  };

  nlp.objective = [p, split](const VectorXd& v) {
    auto [x, y] = split(v);
    return objective(p, x, y);
  };
  nlp.objective_grad = [p, split](const VectorXd& v) {
    auto [x, y] = split(v);
    VectorXd g = VectorXd::Zero(v.size());
    int at = 0;
    VectorXd gy = p.f0.grad ? p.f0.grad(y) : VectorXd(VectorXd::Zero(p.y_dim));
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      g.segment(at, xi.size()) = p.f[static_cast<size_t>(i)].grad_x(xi, y);
      gy += p.f[static_cast<size_t>(i)].grad_y(xi, y);
      at += static_cast<int>(xi.size());
    }
    g.tail(p.y_dim) = gy;
    return g;
  };

  int total_ineq = 0, total_eq = 0, coupled_ineq = 0;
  for (int i = 0; i < p.block_count; ++i) {
    coupled_ineq += p.g_coupled[static_cast<size_t>(i)].dim_out;
    total_ineq += p.g_block[static_cast<size_t>(i)].dim_out;
    total_eq += p.h_coupled[static_cast<size_t>(i)].dim_out;
  }
  total_ineq += coupled_ineq + p.g0.dim_out;
  nlp.coupled_ineq = coupled_ineq;
  nlp.coupled_eq = total_eq;

  nlp.ineq.dim_in = nlp.dim;
  nlp.ineq.dim_out = total_ineq;
  nlp.ineq.value = [p, split, total_ineq](const VectorXd& v) {
    auto [x, y] = split(v);
    VectorXd g(total_ineq);
    int at = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& gc = p.g_coupled[static_cast<size_t>(i)];
      if (!gc.empty()) {
        g.segment(at, gc.dim_out) = gc.value(x.blocks[static_cast<size_t>(i)], y);
        at += gc.dim_out;
      }
    }
    for (int i = 0; i < p.block_count; ++i) {
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.segment(at, gb.dim_out) = gb.value(x.blocks[static_cast<size_t>(i)]);
        at += gb.dim_out;
      }
    }
    if (!p.g0.empty()) g.segment(at, p.g0.dim_out) = p.g0.value(y);
    return g;
  };
  nlp.ineq.grad = [p, split, total_ineq](const VectorXd& v) {
    auto [x, y] = split(v);
    MatrixXd g = MatrixXd::Zero(v.size(), total_ineq);
    const int y_at = static_cast<int>(v.size()) - p.y_dim;
    int col = 0;
    int row = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      const auto& gc = p.g_coupled[static_cast<size_t>(i)];
      if (!gc.empty()) {
        g.block(row, col, xi.size(), gc.dim_out) = gc.grad_x(xi, y);
        g.block(y_at, col, p.y_dim, gc.dim_out) = gc.grad_y(xi, y);
        col += gc.dim_out;
      }
      row += static_cast<int>(xi.size());
    }
    row = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.block(row, col, xi.size(), gb.dim_out) = gb.grad(xi);
        col += gb.dim_out;
      }
      row += static_cast<int>(xi.size());
    }
    if (!p.g0.empty()) g.block(y_at, col, p.y_dim, p.g0.dim_out) = p.g0.grad(y);
    return g;
  };

  nlp.eq.dim_in = nlp.dim;
  nlp.eq.dim_out = total_eq;
  nlp.eq.value = [p, split, total_eq](const VectorXd& v) {
    auto [x, y] = split(v);
    VectorXd h(total_eq);
    int at = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& hc = p.h_coupled[static_cast<size_t>(i)];
      if (!hc.empty()) {
        h.segment(at, hc.dim_out) = hc.value(x.blocks[static_cast<size_t>(i)], y);
        at += hc.dim_out;
      }
    }
    return h;
  };
  nlp.eq.grad = [p, split, total_eq](const VectorXd& v) {
    auto [x, y] = split(v);
    MatrixXd g = MatrixXd::Zero(v.size(), total_eq);
    const int y_at = static_cast<int>(v.size()) - p.y_dim;
    int col = 0, row = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      const auto& hc = p.h_coupled[static_cast<size_t>(i)];
      if (!hc.empty()) {
        g.block(row, col, xi.size(), hc.dim_out) = hc.grad_x(xi, y);
        g.block(y_at, col, p.y_dim, hc.dim_out) = hc.grad_y(xi, y);
        col += hc.dim_out;
      }
      row += static_cast<int>(xi.size());
    }
    return g;
  };

  nlp.box = p.x_sets.empty() ? BoxSet::unbounded(0) : p.x_sets[0];
  for (int i = 1; i < p.block_count; ++i) nlp.box = nlp.box.product(p.x_sets[static_cast<size_t>(i)]);
  nlp.box = p.block_count ? nlp.box.product(p.y_set) : p.y_set;
  return nlp;
}

Nlp full_nlp(const ProblemDD& p) {
  Nlp nlp;
  nlp.dim = 0;
  for (int d : p.block_dims) nlp.dim += d;
  const std::vector<int> dims = p.block_dims;

  nlp.objective = [p, dims](const VectorXd& v) {
    return objective(p, BlockVector::unflatten(v, dims));
  };
  nlp.objective_grad = [p, dims](const VectorXd& v) {
    BlockVector x = BlockVector::unflatten(v, dims);
    VectorXd g(v.size());
    int at = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      g.segment(at, xi.size()) = p.f[static_cast<size_t>(i)].grad(xi);
      at += static_cast<int>(xi.size());
    }
    return g;
  };

  int block_ineq = 0;
  for (int i = 0; i < p.block_count; ++i) block_ineq += p.g_block[static_cast<size_t>(i)].dim_out;
  const int total_ineq = p.coupled_ineq_dim + block_ineq;
  nlp.coupled_ineq = p.coupled_ineq_dim;
  nlp.coupled_eq = p.coupled_eq_dim;

  nlp.ineq.dim_in = nlp.dim;
  nlp.ineq.dim_out = total_ineq;
  nlp.ineq.value = [p, dims, total_ineq](const VectorXd& v) {
    BlockVector x = BlockVector::unflatten(v, dims);
    VectorXd g = VectorXd::Zero(total_ineq);
    for (int i = 0; i < p.block_count; ++i)
      if (!p.g_coupled[static_cast<size_t>(i)].empty())
        g.head(p.coupled_ineq_dim) +=
            p.g_coupled[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)]);
    int at = p.coupled_ineq_dim;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.segment(at, gb.dim_out) = gb.value(x.blocks[static_cast<size_t>(i)]);
        at += gb.dim_out;
      }
    }
    return g;
  };
  nlp.ineq.grad = [p, dims, total_ineq](const VectorXd& v) {
    BlockVector x = BlockVector::unflatten(v, dims);
    MatrixXd g = MatrixXd::Zero(v.size(), total_ineq);
    int row = 0, col = p.coupled_ineq_dim;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      if (!p.g_coupled[static_cast<size_t>(i)].empty())
        g.block(row, 0, xi.size(), p.coupled_ineq_dim) =
            p.g_coupled[static_cast<size_t>(i)].grad(xi);
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.block(row, col, xi.size(), gb.dim_out) = gb.grad(xi);
        col += gb.dim_out;
      }
      row += static_cast<int>(xi.size());
    }
    return g;
  };

  nlp.eq.dim_in = nlp.dim;
  nlp.eq.dim_out = p.coupled_eq_dim;
  nlp.eq.value = [p, dims](const VectorXd& v) {
    BlockVector x = BlockVector::unflatten(v, dims);
    VectorXd h = VectorXd::Zero(p.coupled_eq_dim);
    for (int i = 0; i < p.block_count; ++i)
      if (!p.h_coupled[static_cast<size_t>(i)].empty())
        h += p.h_coupled[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)]);
    return h;
  };
  nlp.eq.grad = [p, dims](const VectorXd& v) {
    BlockVector x = BlockVector::unflatten(v, dims);
    MatrixXd g = MatrixXd::Zero(v.size(), p.coupled_eq_dim);
    int row = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      if (!p.h_coupled[static_cast<size_t>(i)].empty())
        g.block(row, 0, xi.size(), p.coupled_eq_dim) =
            p.h_coupled[static_cast<size_t>(i)].grad(xi);
      row += static_cast<int>(xi.size());
    }
    return g;
  };

  nlp.box = p.x_sets.empty() ? BoxSet::unbounded(0) : p.x_sets[0];
  for (int i = 1; i < p.block_count; ++i)
    nlp.box = nlp.box.product(p.x_sets[static_cast<size_t>(i)]);
  return nlp;
}

MultiplierSet assemble_pd_multipliers(const ProblemPD& p,
                                      const std::vector<MultiplierSet>& block_mults,
                                      const VectorXd& mu0) {
  Nlp nlp = full_nlp(p);
  MultiplierSet m = MultiplierSet::zeros(nlp);
  int col = 0;
  for (int i = 0; i < p.block_count; ++i) {
    const int r = p.g_coupled[static_cast<size_t>(i)].dim_out;
    if (r > 0) m.ineq.segment(col, r) = block_mults[static_cast<size_t>(i)].ineq.head(r);
    col += r;
  }
  for (int i = 0; i < p.block_count; ++i) {
    const int rc = p.g_coupled[static_cast<size_t>(i)].dim_out;
    const int rb = p.g_block[static_cast<size_t>(i)].dim_out;
    if (rb > 0) m.ineq.segment(col, rb) = block_mults[static_cast<size_t>(i)].ineq.segment(rc, rb);
    col += rb;
  }
  if (p.g0.dim_out > 0) m.ineq.segment(col, p.g0.dim_out) = mu0;
  int ecol = 0;
  for (int i = 0; i < p.block_count; ++i) {
    const int me = p.h_coupled[static_cast<size_t>(i)].dim_out;
    if (me > 0) m.eq.segment(ecol, me) = block_mults[static_cast<size_t>(i)].eq;
    ecol += me;
  }
  int at = 0;
  for (int i = 0; i < p.block_count; ++i) {
    const int ni = p.block_dims[static_cast<size_t>(i)];
    m.bound_lower.segment(at, ni) = block_mults[static_cast<size_t>(i)].bound_lower;
    m.bound_upper.segment(at, ni) = block_mults[static_cast<size_t>(i)].bound_upper;
    at += ni;
  }
  return m;
}

MultiplierSet assemble_dd_multipliers(const ProblemDD& p, const VectorXd& mu_coupled,
                                      const VectorXd& lambda_coupled,
                                      const std::vector<MultiplierSet>& block_mults) {
  Nlp nlp = full_nlp(p);
  MultiplierSet m = MultiplierSet::zeros(nlp);
  if (p.coupled_ineq_dim > 0) m.ineq.head(p.coupled_ineq_dim) = mu_coupled;
  if (p.coupled_eq_dim > 0) m.eq = lambda_coupled;
  int col = p.coupled_ineq_dim;
  int at = 0;
  for (int i = 0; i < p.block_count; ++i) {
    const int rb = p.g_block[static_cast<size_t>(i)].dim_out;
    // Block subproblem views put coupled terms in the objective, so their
    // inequality multipliers are exactly the block-local ones.
    if (rb > 0) m.ineq.segment(col, rb) = block_mults[static_cast<size_t>(i)].ineq;
    col += rb;
    const int ni = p.block_dims[static_cast<size_t>(i)];
    m.bound_lower.segment(at, ni) = block_mults[static_cast<size_t>(i)].bound_lower;
    m.bound_upper.segment(at, ni) = block_mults[static_cast<size_t>(i)].bound_upper;
    at += ni;
  }
  return m;
}

}  // namespace decomp
