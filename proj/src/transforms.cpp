#include "decomp/transforms.hpp"

#include <cmath>

#include "decomp/pd.hpp"

namespace decomp {

PdToDd pd_to_dd(const ProblemPD& p) {
  PdToDd t;
  t.source = &p;
  const int n0 = p.y_dim;
  const int nblocks = p.block_count;
  t.consensus_rows = n0 * nblocks;
  t.lifted_eq_rows = 0;
  std::vector<int> eq_offsets(static_cast<size_t>(nblocks));
  for (int i = 0; i < nblocks; ++i) {
    eq_offsets[static_cast<size_t>(i)] = t.consensus_rows + t.lifted_eq_rows;
    t.lifted_eq_rows += p.h_coupled[static_cast<size_t>(i)].dim_out;
  }
  const int total_eq = t.consensus_rows + t.lifted_eq_rows;

  ProblemDD& d = t.lifted;
  d.block_count = nblocks + 1;
  d.coupled_ineq_dim = 0;
  d.coupled_eq_dim = total_eq;
  t.z_dims.push_back(n0);
  for (int i = 0; i < nblocks; ++i) t.z_dims.push_back(p.block_dims[static_cast<size_t>(i)] + n0);
  d.block_dims = t.z_dims;

  // Block 0 carries y: objective f0, local inequality g0, set Y, and the
  // consensus rows receive -z_0 in every slot.
  {
    FunctionOracle f0;
    f0.dim = n0;
    f0.value = p.f0.value ? p.f0.value : [](const VectorXd&) { return 0.0; };
    f0.grad = p.f0.grad ? p.f0.grad : [n0](const VectorXd&) { return VectorXd(VectorXd::Zero(n0)); };
    d.f.push_back(f0);

    VectorOracle h0;
    h0.dim_in = n0;
    h0.dim_out = total_eq;
    h0.value = [n0, nblocks, total_eq](const VectorXd& z) {
      VectorXd h = VectorXd::Zero(total_eq);
      for (int i = 0; i < nblocks; ++i) h.segment(i * n0, n0) = -z;
      return h;
    };
    h0.grad = [n0, nblocks, total_eq](const VectorXd&) {
      MatrixXd g = MatrixXd::Zero(n0, total_eq);
      for (int i = 0; i < nblocks; ++i)
        g.block(0, i * n0, n0, n0) = -MatrixXd::Identity(n0, n0);
      return g;
    };
    d.h_coupled.push_back(h0);
    d.g_coupled.push_back(empty_vector_oracle(n0));
    d.g_block.push_back(p.g0);
    d.x_sets.push_back(p.y_set);
  }

  for (int i = 0; i < nblocks; ++i) {
    const int ni = p.block_dims[static_cast<size_t>(i)];
    const int zdim = ni + n0;
    const BivariateFunction f = p.f[static_cast<size_t>(i)];
    const BivariateMap gc = p.g_coupled[static_cast<size_t>(i)];
    const BivariateMap hc = p.h_coupled[static_cast<size_t>(i)];
    const VectorOracle gb = p.g_block[static_cast<size_t>(i)];
    const int eq_off = eq_offsets[static_cast<size_t>(i)];
    const int slot = i * n0;

    auto split = [ni](const VectorXd& z) {
      return std::make_pair(VectorXd(z.head(ni)), VectorXd(z.tail(z.size() - ni)));
    };

    FunctionOracle fi;
    fi.dim = zdim;
    fi.value = [f, split](const VectorXd& z) {
      auto [x, y] = split(z);
      return f.value(x, y);
    };
    fi.grad = [f, split, ni, zdim](const VectorXd& z) {
      auto [x, y] = split(z);
      VectorXd g(zdim);
      g.head(ni) = f.grad_x(x, y);
      g.tail(zdim - ni) = f.grad_y(x, y);
      return g;
    };
    d.f.push_back(fi);

    VectorOracle hi;
    hi.dim_in = zdim;
    hi.dim_out = total_eq;
    hi.value = [hc, split, slot, eq_off, total_eq, n0](const VectorXd& z) {
      auto [x, y] = split(z);
      VectorXd h = VectorXd::Zero(total_eq);
      h.segment(slot, n0) = y;
      if (hc.dim_out) h.segment(eq_off, hc.dim_out) = hc.value(x, y);
      return h;
    };
    hi.grad = [hc, split, slot, eq_off, total_eq, n0, ni, zdim](const VectorXd& z) {
      auto [x, y] = split(z);
      MatrixXd g = MatrixXd::Zero(zdim, total_eq);
      g.block(ni, slot, n0, n0) = MatrixXd::Identity(n0, n0);
      if (hc.dim_out) {
        g.block(0, eq_off, ni, hc.dim_out) = hc.grad_x(x, y);
        g.block(ni, eq_off, n0, hc.dim_out) = hc.grad_y(x, y);
      }
      return g;
    };
    d.h_coupled.push_back(hi);
    d.g_coupled.push_back(empty_vector_oracle(zdim));

    VectorOracle gi;
    gi.dim_in = zdim;
    gi.dim_out = gc.dim_out + gb.dim_out;
    gi.value = [gc, gb, split](const VectorXd& z) {
      auto [x, y] = split(z);
      VectorXd g(gc.dim_out + gb.dim_out);
      if (gc.dim_out) g.head(gc.dim_out) = gc.value(x, y);
      if (gb.dim_out) g.tail(gb.dim_out) = gb.value(x);
      return g;
    };
    gi.grad = [gc, gb, split, ni, zdim](const VectorXd& z) {
      auto [x, y] = split(z);
      MatrixXd g = MatrixXd::Zero(zdim, gc.dim_out + gb.dim_out);
      if (gc.dim_out) {
        g.block(0, 0, ni, gc.dim_out) = gc.grad_x(x, y);
        g.block(ni, 0, zdim - ni, gc.dim_out) = gc.grad_y(x, y);
      }
      if (gb.dim_out) g.block(0, gc.dim_out, ni, gb.dim_out) = gb.grad(x);
      return g;
    };
    d.g_block.push_back(gi);
    d.x_sets.push_back(p.x_sets[static_cast<size_t>(i)].product(p.y_set));
  }
  return t;
}

BlockVector lift_point(const PdToDd& t, const BlockVector& x, const VectorXd& y) {
  BlockVector z;
  z.blocks.push_back(y);
  for (int i = 0; i < t.source->block_count; ++i) {
    VectorXd zi(t.z_dims[static_cast<size_t>(i + 1)]);
    zi << x.blocks[static_cast<size_t>(i)], y;
    z.blocks.push_back(zi);
  }
  return z;
}

LiftedDdMultipliers lift_multipliers(const PdToDd& t, const BlockVector& x, const VectorXd& y,
                                     const std::vector<MultiplierSet>& block_mults,
                                     const VectorXd& mu0) {
  const ProblemPD& p = *t.source;
  const int n0 = p.y_dim;
  LiftedDdMultipliers out;
  out.lambda_coupled = VectorXd::Zero(t.consensus_rows + t.lifted_eq_rows);

  int eq_off = t.consensus_rows;
  for (int i = 0; i < p.block_count; ++i) {
    // Consensus dual pinned by block stationarity in the y-copy.
    VectorXd nu = -master_gradient_block(p, i, y, x.blocks[static_cast<size_t>(i)],
                                         block_mults[static_cast<size_t>(i)]);
    out.lambda_coupled.segment(i * n0, n0) = nu;
    const int mi = p.h_coupled[static_cast<size_t>(i)].dim_out;
    if (mi) out.lambda_coupled.segment(eq_off, mi) = block_mults[static_cast<size_t>(i)].eq;
    eq_off += mi;
  }

  MultiplierSet m0;
  m0.ineq = mu0;
  m0.eq = VectorXd::Zero(0);
  m0.bound_lower = VectorXd::Zero(n0);
  m0.bound_upper = VectorXd::Zero(n0);
  out.block_mult.push_back(m0);
  for (int i = 0; i < p.block_count; ++i) {
    const auto& src = block_mults[static_cast<size_t>(i)];
    const int ni = p.block_dims[static_cast<size_t>(i)];
    MultiplierSet mi;
    mi.ineq = src.ineq;  // [coupled g, block-local g], both local after lifting
    mi.eq = VectorXd::Zero(0);
    mi.bound_lower = VectorXd::Zero(ni + n0);
    mi.bound_upper = VectorXd::Zero(ni + n0);
    mi.bound_lower.head(ni) = src.bound_lower;
    mi.bound_upper.head(ni) = src.bound_upper;
    out.block_mult.push_back(mi);
  }
  return out;
}

DdToPd dd_to_pd(const ProblemDD& p) {
  DdToPd t;
  t.source = &p;
  t.r = p.coupled_ineq_dim;
  t.m = p.coupled_eq_dim;
  t.blocks = p.block_count;
  t.x_dims = p.block_dims;
  const int r = t.r, m = t.m, nb = t.blocks;
  int nx = 0;
  for (int d : p.block_dims) nx += d;
  const int nz = (r + m) * nb;
  const int dim = nx + nz;
  const std::vector<int> dims = p.block_dims;

  Nlp& nlp = t.lifted;
  nlp.dim = dim;
  nlp.coupled_ineq = 0;
  nlp.coupled_eq = 0;

  auto split_x = [dims, nx](const VectorXd& v) {
    return BlockVector::unflatten(v.head(nx), dims);
  };

  nlp.objective = [p, split_x](const VectorXd& v) { return objective(p, split_x(v)); };
  nlp.objective_grad = [p, split_x, dim](const VectorXd& v) {
    BlockVector x = split_x(v);
    VectorXd g = VectorXd::Zero(dim);
    int at = 0;
    for (int i = 0; i < p.block_count; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      g.segment(at, xi.size()) = p.f[static_cast<size_t>(i)].grad(xi);
      at += static_cast<int>(xi.size());
    }
    return g;
  };

  // Inequalities: per-block slack rows g_i(x_i) - z_i, block-local g_i,
  // then the aggregate sum z_i <= 0.
  int block_ineq = 0;
  for (int i = 0; i < nb; ++i) block_ineq += p.g_block[static_cast<size_t>(i)].dim_out;
  const int total_ineq = r * nb + block_ineq + r;
  nlp.ineq.dim_in = dim;
  nlp.ineq.dim_out = total_ineq;
  nlp.ineq.value = [p, split_x, nx, r, nb, total_ineq](const VectorXd& v) {
    BlockVector x = split_x(v);
    VectorXd g = VectorXd::Zero(total_ineq);
    for (int i = 0; i < nb; ++i) {
      if (r)
        g.segment(i * r, r) = p.g_coupled[static_cast<size_t>(i)].value(
                                  x.blocks[static_cast<size_t>(i)]) -
                              v.segment(nx + i * r, r);
    }
    int at = r * nb;
    for (int i = 0; i < nb; ++i) {
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.segment(at, gb.dim_out) = gb.value(x.blocks[static_cast<size_t>(i)]);
        at += gb.dim_out;
      }
    }
    for (int i = 0; i < nb; ++i)
      if (r) g.segment(at, r) += v.segment(nx + i * r, r);
    return g;
  };
  nlp.ineq.grad = [p, split_x, nx, r, nb, total_ineq, dim](const VectorXd& v) {
    BlockVector x = split_x(v);
    MatrixXd g = MatrixXd::Zero(dim, total_ineq);
    int row = 0;
    for (int i = 0; i < nb; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      if (r) {
        g.block(row, i * r, xi.size(), r) = p.g_coupled[static_cast<size_t>(i)].grad(xi);
        g.block(nx + i * r, i * r, r, r) = -MatrixXd::Identity(r, r);
      }
      row += static_cast<int>(xi.size());
    }
    int at = r * nb;
    row = 0;
    for (int i = 0; i < nb; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      const auto& gb = p.g_block[static_cast<size_t>(i)];
      if (!gb.empty()) {
        g.block(row, at, xi.size(), gb.dim_out) = gb.grad(xi);
        at += gb.dim_out;
      }
      row += static_cast<int>(xi.size());
    }
    for (int i = 0; i < nb; ++i)
      if (r) g.block(nx + i * r, at, r, r) = MatrixXd::Identity(r, r);
    return g;
  };

  // Equalities: per-block h_i(x_i) - z_{i+I}, then sum z_{i+I} = 0.
  const int total_eq = m * nb + m;
  nlp.eq.dim_in = dim;
  nlp.eq.dim_out = total_eq;
  nlp.eq.value = [p, split_x, nx, r, m, nb, total_eq](const VectorXd& v) {
    BlockVector x = split_x(v);
    VectorXd h = VectorXd::Zero(total_eq);
    const int z_eq = nx + r * nb;
    for (int i = 0; i < nb; ++i)
      if (m)
        h.segment(i * m, m) = p.h_coupled[static_cast<size_t>(i)].value(
                                  x.blocks[static_cast<size_t>(i)]) -
                              v.segment(z_eq + i * m, m);
    for (int i = 0; i < nb; ++i)
      if (m) h.segment(m * nb, m) += v.segment(z_eq + i * m, m);
    return h;
  };
  nlp.eq.grad = [p, split_x, nx, r, m, nb, total_eq, dim](const VectorXd& v) {
    BlockVector x = split_x(v);
    MatrixXd g = MatrixXd::Zero(dim, total_eq);
    const int z_eq = nx + r * nb;
    int row = 0;
    for (int i = 0; i < nb; ++i) {
      const auto& xi = x.blocks[static_cast<size_t>(i)];
      if (m) {
        g.block(row, i * m, xi.size(), m) = p.h_coupled[static_cast<size_t>(i)].grad(xi);
        g.block(z_eq + i * m, i * m, m, m) = -MatrixXd::Identity(m, m);
        g.block(z_eq + i * m, m * nb, m, m) = MatrixXd::Identity(m, m);
      }
      row += static_cast<int>(xi.size());
    }
    return g;
  };

  BoxSet box = p.x_sets[0];
  for (int i = 1; i < nb; ++i) box = box.product(p.x_sets[static_cast<size_t>(i)]);
  nlp.box = box.product(BoxSet::unbounded(nz));
  return t;
}

VectorXd lift_point(const DdToPd& t, const BlockVector& x) {
  const ProblemDD& p = *t.source;
  const int r = t.r, m = t.m, nb = t.blocks;
  int nx = x.total_dim();
  VectorXd v(nx + (r + m) * nb);
  v.head(nx) = x.flatten();
  for (int i = 0; i < nb; ++i) {
    if (r)
      v.segment(nx + i * r, r) = p.g_coupled[static_cast<size_t>(i)].value(
          x.blocks[static_cast<size_t>(i)]);
    if (m)
      v.segment(nx + r * nb + i * m, m) =
          p.h_coupled[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)]);
  }
  return v;
}

MultiplierSet lift_multipliers(const DdToPd& t, const BlockVector& /*x*/, const VectorXd& mu,
                               const VectorXd& lambda,
                               const std::vector<MultiplierSet>& block_mults) {
  const ProblemDD& p = *t.source;
  const int r = t.r, m = t.m, nb = t.blocks;
  MultiplierSet out;
  out.ineq = VectorXd::Zero(t.lifted.ineq.dim_out);
  out.eq = VectorXd::Zero(t.lifted.eq.dim_out);
  out.bound_lower = VectorXd::Zero(t.lifted.dim);
  out.bound_upper = VectorXd::Zero(t.lifted.dim);

  for (int i = 0; i < nb; ++i)
    if (r) out.ineq.segment(i * r, r) = mu;
  int at = r * nb;
  int row = 0;
  for (int i = 0; i < nb; ++i) {
    const auto& gb = p.g_block[static_cast<size_t>(i)];
    if (!gb.empty()) {
      out.ineq.segment(at, gb.dim_out) = block_mults[static_cast<size_t>(i)].ineq;
      at += gb.dim_out;
    }
    const int ni = p.block_dims[static_cast<size_t>(i)];
    out.bound_lower.segment(row, ni) = block_mults[static_cast<size_t>(i)].bound_lower;
    out.bound_upper.segment(row, ni) = block_mults[static_cast<size_t>(i)].bound_upper;
    row += ni;
  }
  if (r) out.ineq.tail(r) = mu;
  for (int i = 0; i < nb; ++i)
    if (m) out.eq.segment(i * m, m) = lambda;
  if (m) out.eq.tail(m) = lambda;
  return out;
}

DdPoint lower_point(const DdToPd& t, const VectorXd& lifted_point, const MultiplierSet& lifted_m) {
  const ProblemDD& p = *t.source;
  const int r = t.r, m = t.m, nb = t.blocks;
  int nx = 0;
  for (int d : p.block_dims) nx += d;

  DdPoint out;
  out.x = BlockVector::unflatten(lifted_point.head(nx), p.block_dims);
  out.mu = r ? VectorXd(lifted_m.ineq.tail(r)) : VectorXd(0);
  out.lambda = m ? VectorXd(lifted_m.eq.tail(m)) : VectorXd(0);
  int at = r * nb;
  int row = 0;
  for (int i = 0; i < nb; ++i) {
    MultiplierSet mi;
    const auto& gb = p.g_block[static_cast<size_t>(i)];
    mi.ineq = gb.empty() ? VectorXd(0) : VectorXd(lifted_m.ineq.segment(at, gb.dim_out));
    at += gb.dim_out;
    mi.eq = VectorXd::Zero(0);
    const int ni = p.block_dims[static_cast<size_t>(i)];
    mi.bound_lower = lifted_m.bound_lower.segment(row, ni);
    mi.bound_upper = lifted_m.bound_upper.segment(row, ni);
    row += ni;
    out.block_mult.push_back(mi);
  }
  return out;
}

TransformCertificate map_stationary_pd_to_dd(const ProblemPD& p, const BlockVector& x,
                                             const VectorXd& y,
                                             const std::vector<MultiplierSet>& block_mults,
                                             const VectorXd& mu0, double tol) {
  Nlp src = full_nlp(p);
  VectorXd v(src.dim);
  v << x.flatten(), y;
  MultiplierSet sm = assemble_pd_multipliers(p, block_mults, mu0);
  TransformCertificate cert;
  cert.direction = TransformDirection::kPdToDd;
  cert.source_residual = kkt_residual(src, v, sm).total();
  if (cert.source_residual > tol)
    throw NotStationary("pd_to_dd: source point residual exceeds tolerance");

  PdToDd t = pd_to_dd(p);
  BlockVector z = lift_point(t, x, y);
  LiftedDdMultipliers lm = lift_multipliers(t, x, y, block_mults, mu0);
  Nlp img = full_nlp(t.lifted);
  MultiplierSet im = assemble_dd_multipliers(t.lifted, VectorXd(0), lm.lambda_coupled,
                                             lm.block_mult);
  cert.image_residual = kkt_residual(img, z.flatten(), im).total();
  cert.note = "consensus duals set to the negated per-block master gradients";
  return cert;
}

TransformCertificate map_stationary_dd_to_pd(const ProblemDD& p, const BlockVector& x,
                                             const VectorXd& mu, const VectorXd& lambda,
                                             const std::vector<MultiplierSet>& block_mults,
                                             double tol) {
  Nlp src = full_nlp(p);
  MultiplierSet sm = assemble_dd_multipliers(p, mu, lambda, block_mults);
  TransformCertificate cert;
  cert.direction = TransformDirection::kDdToPd;
  cert.source_residual = kkt_residual(src, x.flatten(), sm).total();
  if (cert.source_residual > tol)
    throw NotStationary("dd_to_pd: source point residual exceeds tolerance");

  DdToPd t = dd_to_pd(p);
  VectorXd v = lift_point(t, x);
  MultiplierSet im = lift_multipliers(t, x, mu, lambda, block_mults);
  cert.image_residual = kkt_residual(t.lifted, v, im).total();
  cert.note = "slack duals copied from the coupling duals";
  return cert;
}

TransformCertificate map_stationary_pd_from_lifted(const DdToPd& t, const VectorXd& lifted_point,
                                                   const MultiplierSet& lifted_m, double tol) {
  TransformCertificate cert;
  cert.direction = TransformDirection::kBackward;
  cert.source_residual = kkt_residual(t.lifted, lifted_point, lifted_m).total();
  if (cert.source_residual > tol)
    throw NotStationary("lifted point residual exceeds tolerance");
  DdPoint p = lower_point(t, lifted_point, lifted_m);
  Nlp src = full_nlp(*t.source);
  MultiplierSet sm = assemble_dd_multipliers(*t.source, p.mu, p.lambda, p.block_mult);
  cert.image_residual = kkt_residual(src, p.x.flatten(), sm).total();
  cert.note = "coupling duals read from the aggregate slack rows";
  return cert;
}

}  // namespace decomp
