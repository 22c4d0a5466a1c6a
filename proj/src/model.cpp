#include "decomp/model.hpp"

#include <cmath>
#include <limits>

namespace decomp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double pos_part_inf_norm(const VectorXd& v) {
  double m = 0.0;
  for (int j = 0; j < v.size(); ++j) m = std::max(m, v[j]);
  return std::max(m, 0.0);
}
}  // namespace

VectorOracle empty_vector_oracle(int dim_in) {
  VectorOracle o;
  o.dim_in = dim_in;
  o.dim_out = 0;
  o.value = [](const VectorXd&) { return VectorXd(0); };
  o.grad = [dim_in](const VectorXd&) { return MatrixXd(dim_in, 0); };
  return o;
}

BivariateMap empty_bivariate_map() {
  BivariateMap m;
  m.dim_out = 0;
  m.value = [](const VectorXd&, const VectorXd&) { return VectorXd(0); };
  m.grad_x = [](const VectorXd& x, const VectorXd&) { return MatrixXd(x.size(), 0); };
  m.grad_y = [](const VectorXd&, const VectorXd& y) { return MatrixXd(y.size(), 0); };
  return m;
}

VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& x) {
  VectorXd g(x.size());
  VectorXd xp = x, xm = x;
  for (int j = 0; j < x.size(); ++j) {
    double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

MatrixXd fd_gradient_map(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                         int dim_out) {
  MatrixXd g(x.size(), dim_out);
  VectorXd xp = x, xm = x;
  for (int j = 0; j < x.size(); ++j) {
    double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    g.row(j) = ((f(xp) - f(xm)) / (2.0 * h)).transpose();
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

BoxSet BoxSet::unbounded(int n) {
  BoxSet s;
  s.lower = VectorXd::Constant(n, -kInf);
  s.upper = VectorXd::Constant(n, kInf);
  return s;
}

BoxSet BoxSet::interval(double lo, double hi, int n) {
  BoxSet s;
  s.lower = VectorXd::Constant(n, lo);
  s.upper = VectorXd::Constant(n, hi);
  return s;
}

VectorXd BoxSet::project(const VectorXd& x) const {
  VectorXd p = x;
  for (int j = 0; j < x.size(); ++j) {
    if (std::isfinite(lower[j]) && p[j] < lower[j]) p[j] = lower[j];
    if (std::isfinite(upper[j]) && p[j] > upper[j]) p[j] = upper[j];
  }
  return p;
}

bool BoxSet::contains(const VectorXd& x, double tol) const {
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
  }
  return true;
}

bool BoxSet::is_interior(const VectorXd& x, double margin) const {
  for (int j = 0; j < x.size(); ++j) {
    if (std::isfinite(lower[j]) && x[j] < lower[j] + margin) return false;
    if (std::isfinite(upper[j]) && x[j] > upper[j] - margin) return false;
  }
  return true;
}

BoxSet BoxSet::product(const BoxSet& other) const {
  BoxSet s;
  s.lower.resize(lower.size() + other.lower.size());
  s.upper.resize(s.lower.size());
  s.lower << lower, other.lower;
  s.upper << upper, other.upper;
  return s;
}

int BlockVector::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

VectorXd BlockVector::flatten() const {
  VectorXd v(total_dim());
  int at = 0;
  for (const auto& b : blocks) {
    v.segment(at, b.size()) = b;
    at += static_cast<int>(b.size());
  }
  return v;
}

BlockVector BlockVector::unflatten(const VectorXd& v, const std::vector<int>& dims) {
  BlockVector out;
  int at = 0;
  for (int d : dims) {
    out.blocks.push_back(v.segment(at, d));
    at += d;
  }
  if (at != v.size()) throw DimensionMismatch("unflatten: dims do not cover vector");
  return out;
}

ProblemPD ProblemSPD::as_pd() const {
  ProblemPD p;
  p.block_count = block_count;
  p.y_dim = y_dim;
  p.block_dims = block_dims;
  p.f = f;
  p.g_coupled = g_coupled;
  p.h_coupled.resize(static_cast<size_t>(block_count));
  for (int i = 0; i < block_count; ++i) {
    const MatrixXd& ax = a_x[static_cast<size_t>(i)];
    const MatrixXd& ay = a_y[static_cast<size_t>(i)];
    const VectorXd& bi = b_eq[static_cast<size_t>(i)];
    BivariateMap m;
    m.dim_out = static_cast<int>(bi.size());
    m.value = [ax, ay, bi](const VectorXd& x, const VectorXd& y) -> VectorXd {
      return ax * x + ay * y + bi;
    };
    m.grad_x = [ax](const VectorXd&, const VectorXd&) -> MatrixXd { return ax.transpose(); };
    m.grad_y = [ay](const VectorXd&, const VectorXd&) -> MatrixXd { return ay.transpose(); };
    p.h_coupled[static_cast<size_t>(i)] = m;
  }
  p.g_block = g_block;
  p.x_sets = x_sets;
  p.f0 = f0;
  p.g0 = g0;
  p.y_set = y_set;
  return p;
}

ProblemDD ProblemSDD::as_dd() const {
  ProblemDD p;
  p.block_count = block_count;
  p.block_dims = block_dims;
  p.coupled_ineq_dim = coupled_ineq_dim;
  p.coupled_eq_dim = static_cast<int>(b.size());
  p.f = f;
  p.g_coupled = g_coupled;
  p.h_coupled.resize(static_cast<size_t>(block_count));
  const int m = static_cast<int>(b.size());
  for (int i = 0; i < block_count; ++i) {
    const MatrixXd ai = a[static_cast<size_t>(i)];
    // b is attributed to block 0 so the sum reproduces sum_i A_i x_i + b.
    const VectorXd shift = (i == 0) ? VectorXd(b) : VectorXd(VectorXd::Zero(m));
    VectorOracle o;
    o.dim_in = block_dims[static_cast<size_t>(i)];
    o.dim_out = m;
    o.value = [ai, shift](const VectorXd& x) -> VectorXd { return ai * x + shift; };
    o.grad = [ai](const VectorXd&) -> MatrixXd { return ai.transpose(); };
    p.h_coupled[static_cast<size_t>(i)] = o;
  }
  p.g_block = g_block;
  p.x_sets = x_sets;
  p.block_solver = nullptr;
  return p;
}

double objective(const ProblemPD& p, const BlockVector& x, const VectorXd& y) {
  if (x.block_count() != p.block_count || y.size() != p.y_dim)
    throw DimensionMismatch("objective(pd): block count or y dimension mismatch");
  double v = p.f0.value ? p.f0.value(y) : 0.0;
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)], y);
  return v;
}

double objective(const ProblemSPD& p, const BlockVector& x, const VectorXd& y) {
  if (x.block_count() != p.block_count || y.size() != p.y_dim)
    throw DimensionMismatch("objective(spd): block count or y dimension mismatch");
  double v = p.f0.value ? p.f0.value(y) : 0.0;
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)], y);
  return v;
}

double objective(const ProblemDD& p, const BlockVector& x) {
  if (x.block_count() != p.block_count)
    throw DimensionMismatch("objective(dd): block count mismatch");
  double v = 0.0;
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)]);
  return v;
}

double objective(const ProblemSDD& p, const BlockVector& x) {
  if (x.block_count() != p.block_count)
    throw DimensionMismatch("objective(sdd): block count mismatch");
  double v = 0.0;
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(x.blocks[static_cast<size_t>(i)]);
  return v;
}

ViolationMetrics violation_metrics(const ProblemPD& p, const BlockVector& x, const VectorXd& y) {
  if (x.block_count() != p.block_count || y.size() != p.y_dim)
    throw DimensionMismatch("violation_metrics(pd): dimension mismatch");
  ViolationMetrics m;
  for (int i = 0; i < p.block_count; ++i) {
    const auto& xi = x.blocks[static_cast<size_t>(i)];
    const auto& g = p.g_coupled[static_cast<size_t>(i)];
    const auto& h = p.h_coupled[static_cast<size_t>(i)];
    double gi = g.empty() ? 0.0 : pos_part_inf_norm(g.value(xi, y));
    double hi = h.empty() ? 0.0 : h.value(xi, y).cwiseAbs().maxCoeff();
    m.mean_ineq += gi;
    m.max_ineq = std::max(m.max_ineq, gi);
    m.max_eq = std::max(m.max_eq, hi);
  }
  m.mean_ineq /= std::max(1, p.block_count);
  m.ineq_coupling = m.max_ineq;
  m.coupling = std::max(m.max_ineq, m.max_eq);
  return m;
}

ViolationMetrics violation_metrics(const ProblemSPD& p, const BlockVector& x, const VectorXd& y) {
  return violation_metrics(p.as_pd(), x, y);
}

namespace {
ViolationMetrics dd_family_metrics(int block_count, const std::vector<VectorOracle>& g_coupled,
                                   const std::function<VectorXd(const BlockVector&)>& eq_sum,
                                   const std::vector<VectorOracle>& g_block, const BlockVector& x,
                                   int coupled_ineq_dim) {
  ViolationMetrics m;
  VectorXd gsum = VectorXd::Zero(coupled_ineq_dim);
  for (int i = 0; i < block_count; ++i) {
    const auto& xi = x.blocks[static_cast<size_t>(i)];
    if (!g_coupled[static_cast<size_t>(i)].empty())
      gsum += g_coupled[static_cast<size_t>(i)].value(xi);
    const auto& gb = g_block[static_cast<size_t>(i)];
    double gi = gb.empty() ? 0.0 : pos_part_inf_norm(gb.value(xi));
    m.mean_ineq += gi;
    m.max_ineq = std::max(m.max_ineq, gi);
  }
  m.mean_ineq /= std::max(1, block_count);
  VectorXd hsum = eq_sum(x);
  m.max_eq = hsum.size() ? hsum.cwiseAbs().maxCoeff() : 0.0;
  m.ineq_coupling = pos_part_inf_norm(gsum);
  m.coupling = std::max(m.ineq_coupling, m.max_eq);
  return m;
}
}  // namespace

ViolationMetrics violation_metrics(const ProblemDD& p, const BlockVector& x) {
  if (x.block_count() != p.block_count)
    throw DimensionMismatch("violation_metrics(dd): block count mismatch");
  auto eq_sum = [&p](const BlockVector& xx) {
    VectorXd s = VectorXd::Zero(p.coupled_eq_dim);
    for (int i = 0; i < p.block_count; ++i)
      if (!p.h_coupled[static_cast<size_t>(i)].empty())
        s += p.h_coupled[static_cast<size_t>(i)].value(xx.blocks[static_cast<size_t>(i)]);
    return s;
  };
  return dd_family_metrics(p.block_count, p.g_coupled, eq_sum, p.g_block, x, p.coupled_ineq_dim);
}

ViolationMetrics violation_metrics(const ProblemSDD& p, const BlockVector& x) {
  if (x.block_count() != p.block_count)
    throw DimensionMismatch("violation_metrics(sdd): block count mismatch");
  auto eq_sum = [&p](const BlockVector& xx) {
    VectorXd s = p.b;
    for (int i = 0; i < p.block_count; ++i)
      if (p.a[static_cast<size_t>(i)].rows() > 0)
        s += p.a[static_cast<size_t>(i)] * xx.blocks[static_cast<size_t>(i)];
    return s;
  };
  return dd_family_metrics(p.block_count, p.g_coupled, eq_sum, p.g_block, x, p.coupled_ineq_dim);
}

}  // namespace decomp
