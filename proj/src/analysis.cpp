#include "gvf/analysis.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gvf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::optional<Vec> safe_eval(const PlanarField& field, const Vec& p) {
  try {
    Vec v = field(p);
    if (!v.allFinite()) return std::nullopt;
    return v;
  } catch (const SingularityError&) {
    return std::nullopt;
  }
}

struct Polished {
  Vec x;
  double residual;
};

// Levenberg-Marquardt on F(x) = 0 with a finite-difference Jacobian. Once the
// residual drops below tol, Newton steps continue while they still reduce it,
// so degenerate roots are located to near the noise floor.
std::optional<Polished> polish(const PlanarField& field, Vec x, double tol) {
  auto F = safe_eval(field, x);
  if (!F) return std::nullopt;
  double res = F->head<2>().norm();
  double mu = 1e-3;
  int refine = 0;
  for (int it = 0; it < 400; ++it) {
    if (res < tol && (++refine > 60 || res == 0.0)) break;
    Eigen::Matrix2d J;
    try {
      J = jacobian(field, x, 1e-7 * std::max(1.0, x.norm()));
    } catch (const SingularityError&) {
      return std::nullopt;
    }
    if (!J.allFinite()) return std::nullopt;
    const Eigen::Vector2d r = F->head<2>();
    const double damping = res < tol ? 0.0 : mu;
    const Eigen::Matrix2d A = J.transpose() * J + damping * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d step = A.fullPivLu().solve(-J.transpose() * r);
    if (!step.allFinite()) break;
    const Vec trial = x + planar(step.x(), step.y());
    auto Ft = safe_eval(field, trial);
    const double res_t = Ft ? Ft->head<2>().norm() : std::numeric_limits<double>::infinity();
    if (res_t < res) {
      x = trial;
      F = Ft;
      res = res_t;
      mu = std::max(mu / 3.0, 1e-12);
      if (step.norm() < 1e-15 * std::max(1.0, x.norm())) break;
    } else if (res < tol) {
      break;
    } else {
      mu *= 4.0;
      if (mu > 1e10) break;
    }
  }
  if (!(res < tol)) return std::nullopt;
  return Polished{x, res};
}

}  // namespace

std::string_view to_string(EquilibriumClass kind) {
  switch (kind) {
    case EquilibriumClass::Node: return "node";
    case EquilibriumClass::Focus: return "focus";
    case EquilibriumClass::Center: return "center";
    case EquilibriumClass::Saddle: return "saddle";
    case EquilibriumClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

std::string_view to_string(HessianVerdict verdict) {
  switch (verdict) {
    case HessianVerdict::AllNegative: return "all-negative";
    case HessianVerdict::AtLeastOneNegative: return "at-least-one-negative";
    case HessianVerdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

Eigen::Matrix2d jacobian(const PlanarField& field, const Vec& p, double h) {
  Eigen::Matrix2d J;
  for (int j = 0; j < 2; ++j) {
    Vec a = p, b = p;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (field(a) - field(b)).head<2>() / (2.0 * h);
  }
  return J;
}

Eigen::Matrix2d jacobian4(const PlanarField& field, const Vec& p, double h) {
  Eigen::Matrix2d J;
  for (int j = 0; j < 2; ++j) {
    Vec a1 = p, b1 = p, a2 = p, b2 = p;
    a1[j] += h;
    b1[j] -= h;
    a2[j] += 2 * h;
    b2[j] -= 2 * h;
    J.col(j) = (8.0 * (field(a1) - field(b1)) - (field(a2) - field(b2))).head<2>() / (12.0 * h);
  }
  return J;
}

Equilibrium classify_equilibrium(const PlanarField& field, const Vec& point, double tol) {
  Equilibrium eq;
  eq.location = point;
  eq.residual = field(point).head<2>().norm();
  if (!(eq.residual < tol)) {
    throw PreconditionError("classify_equilibrium: point is not an equilibrium (|field| = " +
                            std::to_string(eq.residual) + ")");
  }
  const Eigen::Matrix2d J = jacobian(field, point);
  const double tr = J.trace(), det = J.determinant();
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    eq.eigenvalues[0] = 0.5 * (tr - s);
    eq.eigenvalues[1] = 0.5 * (tr + s);
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    eq.eigenvalues[0] = {0.5 * tr, -im};
    eq.eigenvalues[1] = {0.5 * tr, im};
  }
  const auto& a = eq.eigenvalues[0];
  const auto& b = eq.eigenvalues[1];
  eq.stable = a.real() < 0.0 && b.real() < 0.0;
  if (std::abs(a) < 1e-8 || std::abs(b) < 1e-8) {
    eq.kind = EquilibriumClass::Degenerate;
  } else if (a.imag() != 0.0) {
    eq.kind = std::abs(a.real()) < 1e-6 ? EquilibriumClass::Center : EquilibriumClass::Focus;
    eq.index = 1;
  } else if (a.real() * b.real() > 0.0) {
    eq.kind = EquilibriumClass::Node;
    eq.index = 1;
  } else {
    eq.kind = EquilibriumClass::Saddle;
    eq.index = -1;
  }
  return eq;
}

EquilibriumSearch find_equilibria(const PlanarField& field, const Window& window, int grid_n, double tol) {
  if (grid_n < 16) throw InvalidArgument("find_equilibria: grid_n must be at least 16");
  if (!(window.x1 > window.x0 && window.y1 > window.y0)) {
    throw InvalidArgument("find_equilibria: empty window");
  }
  const int n = grid_n;
  const double hx = window.width() / (n - 1), hy = window.height() / (n - 1);
  std::vector<std::optional<Vec>> values(static_cast<std::size_t>(n * n));
  auto node = [&](int i, int j) { return planar(window.x0 + i * hx, window.y0 + j * hy); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(j * n + i)] = safe_eval(field, node(i, j));
  }

  EquilibriumSearch out;
  std::vector<Polished> roots;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
      bool ok = true;
      for (int dj = 0; dj < 2 && ok; ++dj) {
        for (int di = 0; di < 2; ++di) {
          const auto& v = values[static_cast<std::size_t>((j + dj) * n + i + di)];
          if (!v) {
            ok = false;
            break;
          }
          for (int c = 0; c < 2; ++c) {
            lo[c] = std::min(lo[c], (*v)[c]);
            hi[c] = std::max(hi[c], (*v)[c]);
          }
        }
      }
      if (!ok || lo[0] > 0.0 || hi[0] < 0.0 || lo[1] > 0.0 || hi[1] < 0.0) continue;
      ++out.seeds;
      auto root = polish(field, planar(window.x0 + (i + 0.5) * hx, window.y0 + (j + 0.5) * hy), tol);
      if (!root) {
        ++out.dropped;
        continue;
      }
      const double margin = 1e-9 * std::max(window.width(), window.height());
      if (root->x.x() < window.x0 - margin || root->x.x() > window.x1 + margin ||
          root->x.y() < window.y0 - margin || root->x.y() > window.y1 + margin) {
        continue;
      }
      auto dup = std::find_if(roots.begin(), roots.end(),
                              [&](const Polished& r) { return (r.x - root->x).norm() < 10.0 * tol; });
      if (dup == roots.end()) {
        roots.push_back(*root);
      } else if (root->residual < dup->residual) {
        *dup = *root;
      }
    }
  }
  if (out.dropped > 0) {
    spdlog::debug("find_equilibria: dropped {} of {} seeds that did not converge", out.dropped, out.seeds);
  }
  std::sort(roots.begin(), roots.end(), [](const Polished& a, const Polished& b) {
    return a.x.x() != b.x.x() ? a.x.x() < b.x.x() : a.x.y() < b.x.y();
  });
  for (const auto& r : roots) out.equilibria.push_back(classify_equilibrium(field, r.x, std::max(tol, r.residual * 2)));
  return out;
}

ClosedCurve circle_curve(const Vec& center, double radius) {
  return [center, radius](double s) {
    const double th = kTwoPi * s;
    return Vec(center + radius * planar(std::cos(th), std::sin(th)));
  };
}

int poincare_index(const PlanarField& field, const ClosedCurve& curve, int n_samples) {
  constexpr long kMaxSamples = 1L << 20;
  long evaluations = 0;
  auto angle_at = [&](double s) {
    ++evaluations;
    if (evaluations > kMaxSamples) {
      throw ConvergenceError("poincare_index: refinement exceeded 2^20 samples");
    }
    const Vec p = curve(s);
    auto v = safe_eval(field, p);
    if (!v || v->head<2>().norm() < 1e-9) {
      throw IndexUndefinedError("poincare_index: field vanishes on the curve near (" +
                                std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
    }
    return std::atan2(v->y(), v->x());
  };

  struct Segment {
    double s0, s1, a0, a1;
  };
  double total = 0.0;
  std::vector<Segment> stack;
  double s_prev = 0.0, a_prev = angle_at(0.0);
  const double a_first = a_prev;
  for (int i = 1; i <= n_samples; ++i) {
    const double s = static_cast<double>(i) / n_samples;
    const double a = i == n_samples ? a_first : angle_at(s);
    stack.push_back({s_prev, s, a_prev, a});
    while (!stack.empty()) {
      Segment seg = stack.back();
      stack.pop_back();
      const double d = std::remainder(seg.a1 - seg.a0, kTwoPi);
      if (std::abs(d) <= std::numbers::pi / 2) {
        total += d;
        continue;
      }
      const double mid = 0.5 * (seg.s0 + seg.s1);
      if (!(mid > seg.s0 && mid < seg.s1)) {
        throw ConvergenceError("poincare_index: direction jumps within an unresolvable interval");
      }
      const double am = angle_at(mid);
      // Process the left half first.
      stack.push_back({mid, seg.s1, am, seg.a1});
      stack.push_back({seg.s0, mid, seg.a0, am});
    }
    s_prev = s;
    a_prev = a;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<HessianSign> hessian_sign_report(const ImplicitFunction& f, std::span<const Vec> points,
                                             double shift) {
  std::vector<HessianSign> out;
  const int dim = f.dimension();
  for (const auto& q : points) {
    HessianSign hs;
    hs.point = q;
    const Eigen::MatrixXd M = (f.eval(q) - shift) * f.hessian(q).topLeftCorner(dim, dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const Eigen::VectorXd ev = es.eigenvalues();
    hs.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;
    const bool all_neg = (ev.array() < -tol).all();
    const bool any_neg = (ev.array() < -tol).any();
    hs.verdict = all_neg ? HessianVerdict::AllNegative
                         : (any_neg ? HessianVerdict::AtLeastOneNegative : HessianVerdict::Indeterminate);
    out.push_back(std::move(hs));
  }
  return out;
}

std::vector<Vec> critical_points(const ImplicitFunction& f, const Window& window, int grid_n) {
  PlanarField grad = [&f](const Vec& p) { return f.gradient(p); };
  auto search = find_equilibria(grad, window, grid_n, 1e-10);
  std::vector<Vec> pts;
  for (const auto& e : search.equilibria) pts.push_back(e.location);
  return pts;
}

}  // namespace gvf
