#include <biphoton/oracle.hpp>

#include <cmath>
#include <string>

#include <biphoton/errors.hpp>

namespace biphoton {

namespace {

struct Axis {
  std::vector<double> node;
  std::vector<double> weight;
};

void check_spec(const QuadratureSpec& spec) {
  if (!(spec.half_width_sigmas >= 4.0))
    throw InvalidGrid("quadrature window must span at least 4 sigmas");
  if (spec.points < 11 || spec.points % 2 == 0)
    throw InvalidGrid("quadrature needs an odd point count of at least 11");
}

Axis make_axis(double half_width, int n, QuadratureSpec::Rule rule) {
  Axis ax;
  ax.node.resize(n);
  ax.weight.resize(n);
  if (rule == QuadratureSpec::Rule::trapezoid) {
    double h = 2.0 * half_width / (n - 1);
    for (int k = 0; k < n; ++k) {
      ax.node[k] = -half_width + h * k;
      ax.weight[k] = (k == 0 || k == n - 1) ? 0.5 * h : h;
    }
  } else {
    double h = 2.0 * half_width / n;
    for (int k = 0; k < n; ++k) {
      ax.node[k] = -half_width + h * (k + 0.5);
      ax.weight[k] = h;
    }
  }
  return ax;
}

// Connected components of the exact nonzero pattern, each sorted, listed in
// order of their smallest member.
std::vector<std::vector<int>> components_of(const Eigen::MatrixXd& m) {
  int n = static_cast<int>(m.rows());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int seed = 0; seed < n; ++seed) {
    if (comp[seed] >= 0) continue;
    std::vector<int> stack{seed};
    comp[seed] = static_cast<int>(out.size());
    std::vector<int> members;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      members.push_back(i);
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && m(i, j) != 0.0) {
          comp[j] = comp[seed];
          stack.push_back(j);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

// Marginal sigma of exp(-x^T M x) along each coordinate: sqrt(diag(M^{-1})/2).
Eigen::VectorXd marginal_sigmas(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(std::string(what) + " is not positive definite");
  Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return (inv.diagonal() * 0.5).cwiseSqrt();
}

// Deterministic grid sum of exp(-x^T M x) over a tensor grid: partials per
// outermost index computed in lexicographic order and folded serially, so the
// result does not depend on the thread count.
double grid_mass(const Eigen::MatrixXd& m, const std::vector<Axis>& axes,
                 bool parallel) {
  int d = static_cast<int>(axes.size());
  int n0 = static_cast<int>(axes[0].node.size());
  long inner = 1;
  for (int k = 1; k < d; ++k)
    inner *= static_cast<long>(axes[k].node.size());
  std::vector<double> partial(n0, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int i0 = 0; i0 < n0; ++i0) {
    std::vector<int> idx(d, 0);
    std::vector<double> x(d, 0.0);
    idx[0] = i0;
    x[0] = axes[0].node[i0];
    double acc = 0.0;
    for (long flat = 0; flat < inner; ++flat) {
      long rem = flat;
      for (int k = d - 1; k >= 1; --k) {
        int nk = static_cast<int>(axes[k].node.size());
        idx[k] = static_cast<int>(rem % nk);
        rem /= nk;
        x[k] = axes[k].node[idx[k]];
      }
      double q = 0.0;
      for (int r = 0; r < d; ++r) {
        double row = 0.0;
        for (int c = 0; c < d; ++c) row += m(r, c) * x[c];
        q += x[r] * row;
      }
      double w = axes[0].weight[i0];
      for (int k = 1; k < d; ++k) w *= axes[k].weight[idx[k]];
      acc += w * std::exp(-q);
    }
    partial[i0] = acc;
  }

  double total = 0.0;
  for (int i0 = 0; i0 < n0; ++i0) total += partial[i0];
  return total;
}

double mass_at_resolution(const Eigen::MatrixXd& m2,
                          const std::vector<std::vector<int>>& comps,
                          const Eigen::VectorXd& sigma,
                          const QuadratureSpec& spec, int points) {
  double total = 1.0;
  for (const auto& comp : comps) {
    std::vector<Axis> axes;
    Eigen::MatrixXd sub(comp.size(), comp.size());
    for (size_t i = 0; i < comp.size(); ++i) {
      for (size_t j = 0; j < comp.size(); ++j)
        sub(i, j) = m2(comp[i], comp[j]);
      axes.push_back(make_axis(spec.half_width_sigmas * sigma(comp[i]), points,
                               spec.rule));
    }
    total *= grid_mass(sub, axes, spec.parallel);
  }
  return total;
}

// Shared implementation of the discretized purity: S2 / S1^2 with
// S1 = sum_i w_i rho(a_i, a_i) and S2 = sum_ij w_i w_j rho(a_i, a_j)^2
// (the grid spacings cancel between numerator and denominator).
double kernel_grid_purity(const Eigen::MatrixXd& rho,
                          const std::vector<double>& weight, bool parallel) {
  long n = rho.rows();
  double s1 = 0.0;
  for (long i = 0; i < n; ++i) s1 += weight[i] * rho(i, i);
  std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = 0; j < n; ++j) {
      double r = rho(i, j);
      acc += weight[j] * r * r;
    }
    partial[i] = weight[i] * acc;
  }
  double s2 = 0.0;
  for (long i = 0; i < n; ++i) s2 += partial[i];
  return s2 / (s1 * s1);
}

// Tensor grid over the kept coordinates (one or two) with windows wide enough
// for both the diagonal and the off-diagonal spread of the kernel.
struct KernelGrid {
  std::vector<Eigen::VectorXd> point;
  std::vector<double> weight;
};

KernelGrid make_kernel_grid(const GaussianKernel& k, double half_width_sigmas,
                            int points, QuadratureSpec::Rule rule) {
  int d = static_cast<int>(k.coords.size());
  Eigen::VectorXd su = marginal_sigmas(-(k.p + k.w), "kernel diagonal form");
  Eigen::VectorXd sv = marginal_sigmas(-(k.p - k.w), "kernel square form");
  std::vector<Axis> axes;
  for (int i = 0; i < d; ++i) {
    double hw = half_width_sigmas *
                std::sqrt(su(i) * su(i) + sv(i) * sv(i));
    axes.push_back(make_axis(hw, points, rule));
  }
  KernelGrid g;
  long total = 1;
  for (auto& ax : axes) total *= static_cast<long>(ax.node.size());
  g.point.reserve(total);
  g.weight.reserve(total);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    Eigen::VectorXd x(d);
    double w = 1.0;
    for (int kk = d - 1; kk >= 0; --kk) {
      int nk = static_cast<int>(axes[kk].node.size());
      int ik = static_cast<int>(rem % nk);
      rem /= nk;
      x(kk) = axes[kk].node[ik];
      w *= axes[kk].weight[ik];
    }
    g.point.push_back(std::move(x));
    g.weight.push_back(w);
  }
  return g;
}

double purity_at_resolution(const GaussianKernel& k,
                            const QuadratureSpec& spec, int points) {
  KernelGrid g = make_kernel_grid(k, spec.half_width_sigmas, points, spec.rule);
  long n = static_cast<long>(g.point.size());
  // rho(a_i, a_j) = exp(diag_i + diag_j + 2 a_i^T W a_j)
  std::vector<double> diag(n);
  for (long i = 0; i < n; ++i) diag[i] = g.point[i].dot(k.p * g.point[i]);
  Eigen::MatrixXd rho(n, n);
#pragma omp parallel for schedule(static) if (spec.parallel)
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd wi = k.w * g.point[i];
    for (long j = 0; j < n; ++j)
      rho(i, j) = std::exp(diag[i] + diag[j] + 2.0 * wi.dot(g.point[j]));
  }
  return kernel_grid_purity(rho, g.weight, spec.parallel);
}

}  // namespace

double oracle_mass(const Eigen::MatrixXd& a, const QuadratureSpec& spec) {
  check_spec(spec);
  if (a.rows() != a.cols()) throw InvalidGrid("form must be square");
  Eigen::MatrixXd m2 = -2.0 * a;
  Eigen::VectorXd sigma = [&] {
    try {
      return marginal_sigmas(m2, "mass form");
    } catch (const NotPositiveDefinite&) {
      std::vector<int> labels(m2.rows());
      for (int i = 0; i < m2.rows(); ++i) labels[i] = i % kCoordCount;
      throw NotPositiveDefinite("mass integral diverges along " +
                                soft_direction(m2, labels));
    }
  }();
  auto comps = components_of(m2);
  for (const auto& c : comps)
    if (c.size() > 4)
      throw InvalidGrid(
          "a coupled block of more than four coordinates exceeds the tensor "
          "grid budget");
  double m1 = mass_at_resolution(m2, comps, sigma, spec, spec.points);
  if (!spec.refine_check) return m1;
  double m2v = mass_at_resolution(m2, comps, sigma, spec, 2 * spec.points - 1);
  double drift = std::abs(m1 - m2v) / std::max(std::abs(m2v), 1e-300);
  if (drift > 1e-4)
    throw GridTooCoarse("mass moved by " + std::to_string(drift) +
                        " (relative) when the grid was doubled");
  return m2v;
}

double oracle_mass(const QuadraticForm& a, const QuadratureSpec& spec) {
  return oracle_mass(Eigen::MatrixXd(a.a), spec);
}

double oracle_purity(const QuadraticForm& a, const std::vector<int>& keep,
                     const QuadratureSpec& spec) {
  check_spec(spec);
  if (keep.size() < 1 || keep.size() > 2)
    throw InvalidGrid("grid purity supports one or two kept coordinates");
  GaussianKernel k = reduce_pure_state(a, keep);
  double p1 = purity_at_resolution(k, spec, spec.points);
  if (!spec.refine_check) return p1;
  double p2 = purity_at_resolution(k, spec, 2 * spec.points - 1);
  double drift = std::abs(p1 - p2) / std::max(std::abs(p2), 1e-300);
  if (drift > 1e-4)
    throw GridTooCoarse("purity moved by " + std::to_string(drift) +
                        " (relative) when the grid was doubled");
  return p2;
}

double oracle_purity_deep(const QuadraticForm& a, int keep_coord,
                          const QuadratureSpec& spec) {
  check_spec(spec);
  std::vector<int> keep{keep_coord};
  // The closed-form reduction fixes the grid geometry only; every kernel
  // value below comes from direct quadrature.
  GaussianKernel k = reduce_pure_state(a, keep);
  const int kernel_points = 21;
  KernelGrid g = make_kernel_grid(k, spec.half_width_sigmas, kernel_points,
                                  spec.rule);
  double la = 0.0;
  for (auto& pt : g.point) la = std::max(la, std::abs(pt(0)));

  std::vector<int> disc;
  for (int i = 0; i < kCoordCount; ++i)
    if (i != keep_coord) disc.push_back(i);
  Eigen::MatrixXd a_bb(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a_bb(i, j) = a.a(disc[i], disc[j]);
  Eigen::VectorXd a_ab(5);
  for (int i = 0; i < 5; ++i) a_ab(i) = a.a(keep_coord, disc[i]);

  Eigen::MatrixXd mb = -2.0 * a_bb;
  Eigen::VectorXd sigma_b = marginal_sigmas(mb, "discarded block");
  // Conditional centers shift by M_b^{-1} A_ab^T (a + a'); widen each axis by
  // the largest shift the kernel grid can produce.
  Eigen::LLT<Eigen::MatrixXd> llt(mb);
  Eigen::VectorXd shift = llt.solve(a_ab).cwiseAbs() * (2.0 * la);
  std::vector<Axis> axes;
  for (int i = 0; i < 5; ++i)
    axes.push_back(make_axis(
        spec.half_width_sigmas * sigma_b(i) + shift(i), spec.points,
        spec.rule));

  long n = static_cast<long>(g.point.size());
  long pairs = n * (n + 1) / 2;
  long inner = 1;
  for (auto& ax : axes) inner *= static_cast<long>(ax.node.size());
  Eigen::MatrixXd rho(n, n);

#pragma omp parallel for schedule(dynamic) if (spec.parallel)
  for (long pair = 0; pair < pairs; ++pair) {
    // Unrank the upper-triangle pair index.
    long i = 0;
    long rem = pair;
    while (rem >= n - i) {
      rem -= n - i;
      ++i;
    }
    long j = i + rem;
    double av = g.point[i](0);
    double av2 = g.point[j](0);
    double acc = 0.0;
    std::vector<int> idx(5, 0);
    double b[5];
    for (long flat = 0; flat < inner; ++flat) {
      long r = flat;
      for (int kk = 4; kk >= 0; --kk) {
        int nk = static_cast<int>(axes[kk].node.size());
        idx[kk] = static_cast<int>(r % nk);
        r /= nk;
        b[kk] = axes[kk].node[idx[kk]];
      }
      double bab = 0.0;  // b^T A_bb b
      for (int rr = 0; rr < 5; ++rr) {
        double row = 0.0;
        for (int cc = 0; cc < 5; ++cc) row += a_bb(rr, cc) * b[cc];
        bab += b[rr] * row;
      }
      double sb = 0.0;  // A_ab^T b
      for (int rr = 0; rr < 5; ++rr) sb += a_ab(rr) * b[rr];
      double aa = a.a(keep_coord, keep_coord);
      double e = aa * (av * av + av2 * av2) + 2.0 * (av + av2) * sb +
                 2.0 * bab;
      double w = 1.0;
      for (int kk = 0; kk < 5; ++kk) w *= axes[kk].weight[idx[kk]];
      acc += w * std::exp(e);
    }
    rho(i, j) = acc;
    rho(j, i) = acc;
  }

  return kernel_grid_purity(rho, g.weight, spec.parallel);
}

}  // namespace biphoton
