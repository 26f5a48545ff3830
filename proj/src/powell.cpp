#include "smoothlm/powell.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smoothlm {

namespace {

constexpr double kGold = 1.618034;
constexpr double kCGold = 0.3819660;
constexpr double kGrowLimit = 100.0;
constexpr double kTiny = 1e-20;
constexpr double kZeps = 1e-12;
constexpr double kEdge = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double log_or_inf(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(x);
}

std::string join(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(9);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ";" : "") << v[i];
  return out.str();
}

struct Bracket {
  double a, b, c, fa, fb, fc;
};

// Downhill bracketing from (a, b), as in the usual golden-section/parabolic scheme.
Bracket bracket_minimum(const std::function<double(double)>& f, double a, double b) {
  Bracket br{a, b, 0.0, f(a), f(b), 0.0};
  if (br.fb > br.fa) {
    std::swap(br.a, br.b);
    std::swap(br.fa, br.fb);
  }
  br.c = br.b + kGold * (br.b - br.a);
  br.fc = f(br.c);
  for (int guard = 0; br.fb > br.fc && guard < 60; ++guard) {
    const double r = (br.b - br.a) * (br.fb - br.fc);
    const double q = (br.b - br.c) * (br.fb - br.fa);
    const double denom = 2.0 * std::copysign(std::max(std::fabs(q - r), kTiny), q - r);
    double u = br.b - ((br.b - br.c) * q - (br.b - br.a) * r) / denom;
    const double ulim = br.b + kGrowLimit * (br.c - br.b);
    double fu;
    if ((br.b - u) * (u - br.c) > 0.0) {
      fu = f(u);
      if (fu < br.fc) {
        return {br.b, u, br.c, br.fb, fu, br.fc};
      }
      if (fu > br.fb) {
        return {br.a, br.b, u, br.fa, br.fb, fu};
      }
      u = br.c + kGold * (br.c - br.b);
      fu = f(u);
    } else if ((br.c - u) * (u - ulim) > 0.0) {
      fu = f(u);
      if (fu < br.fc) {
        br.b = br.c;
        br.c = u;
        u = br.c + kGold * (br.c - br.b);
        br.fb = br.fc;
        br.fc = fu;
        fu = f(u);
      }
    } else if ((u - ulim) * (ulim - br.c) >= 0.0) {
      u = ulim;
      fu = f(u);
    } else {
      u = br.c + kGold * (br.c - br.b);
      fu = f(u);
    }
    br.a = br.b;
    br.b = br.c;
    br.c = u;
    br.fa = br.fb;
    br.fb = br.fc;
    br.fc = fu;
  }
  return br;
}

}  // namespace

bool Bound::finite() const { return std::isfinite(lo) && std::isfinite(hi); }

double Bound::to_internal(double x) const {
  double lo_t = lo;
  double hi_t = hi;
  double y = x;
  if (log_scale) {
    lo_t = log_or_inf(lo);
    hi_t = std::isfinite(hi) ? std::log(hi) : hi;
    y = log_or_inf(x);
  }
  const bool has_lo = std::isfinite(lo_t);
  const bool has_hi = std::isfinite(hi_t);
  if (has_lo && has_hi) {
    const double frac = std::clamp((y - lo_t) / (hi_t - lo_t), kEdge, 1.0 - kEdge);
    return std::log(frac / (1.0 - frac));
  }
  if (has_lo) return std::log(std::max(y - lo_t, kEdge));
  if (has_hi) return std::log(std::max(hi_t - y, kEdge));
  return y;
}

double Bound::to_external(double z) const {
  double lo_t = lo;
  double hi_t = hi;
  if (log_scale) {
    lo_t = log_or_inf(lo);
    hi_t = std::isfinite(hi) ? std::log(hi) : hi;
  }
  const bool has_lo = std::isfinite(lo_t);
  const bool has_hi = std::isfinite(hi_t);
  double y = z;
  if (has_lo && has_hi) {
    y = lo_t + (hi_t - lo_t) * sigmoid(z);
  } else if (has_lo) {
    y = lo_t + std::exp(z);
  } else if (has_hi) {
    y = hi_t - std::exp(z);
  }
  return log_scale ? std::exp(y) : y;
}

std::pair<double, double> brent_minimize(const std::function<double(double)>& f, double ax,
                                         double bx, double cx, double tolerance,
                                         int max_iterations) {
  double a = std::min(ax, cx);
  double b = std::max(ax, cx);
  double x = bx, w = bx, v = bx;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tolerance * std::fabs(x) + kZeps;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x)) {
        e = (x >= xm) ? a - x : b - x;
        d = kCGold * e;
      } else {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
      }
    } else {
      e = (x >= xm) ? a - x : b - x;
      d = kCGold * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      w = x;
      x = u;
      fv = fw;
      fw = fx;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        w = u;
        fv = fw;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx};
}

OptimizerResult powell_minimize(const Objective& objective, std::vector<double> start,
                                const std::vector<Bound>& bounds, const PowellOptions& options) {
  const std::size_t n = start.size();
  if (bounds.size() != n) throw std::invalid_argument("powell: one bound per parameter required");

  OptimizerResult result;
  auto external = [&](const std::vector<double>& z) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = bounds[i].to_external(z[i]);
    return x;
  };
  auto eval = [&](const std::vector<double>& z) {
    const auto x = external(z);
    ++result.evaluations;
    const double value = objective(x);
    if (!std::isfinite(value)) {
      throw std::domain_error("objective is not finite at (" + join(x) + ")");
    }
    return value;
  };

  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = bounds[i].to_internal(start[i]);
  double fret = eval(p);
  if (options.trace) *options.trace << "cycle,param_vector,objective\n0," << join(external(p)) << ',' << fret << '\n';

  std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

  // Minimize along `dir` from p; move only on a strict decrease.
  auto line_search = [&](std::vector<double>& point, double& value, const std::vector<double>& dir) {
    std::vector<double> trial(n);
    auto along = [&](double t) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = point[i] + t * dir[i];
      return eval(trial);
    };
    const Bracket br = bracket_minimum(along, 0.0, 1.0);
    double best_t = br.b;
    double best_f = br.fb;
    if (br.fb <= br.fa && br.fb <= br.fc) {
      std::tie(best_t, best_f) = brent_minimize(along, br.a, br.b, br.c, options.line_tolerance);
    } else if (br.fa < br.fb || br.fc < br.fb) {
      if (br.fa < br.fc) {
        best_t = br.a;
        best_f = br.fa;
      } else {
        best_t = br.c;
        best_f = br.fc;
      }
    }
    if (best_f < value) {
      for (std::size_t i = 0; i < n; ++i) point[i] += best_t * dir[i];
      value = best_f;
    }
  };

  if (n == 0) {
    result.value = fret;
    result.converged = true;
    return result;
  }

  std::vector<double> pt;
  for (int cycle = 1; cycle <= options.max_cycles; ++cycle) {
    const double fp = fret;
    pt = p;
    std::size_t ibig = 0;
    double biggest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fret;
      line_search(p, fret, dirs[i]);
      if (before - fret > biggest) {
        biggest = before - fret;
        ibig = i;
      }
    }
    result.iterations = cycle;
    if (options.trace) *options.trace << cycle << ',' << join(external(p)) << ',' << fret << '\n';
    if (fp - fret <= options.tolerance * std::fabs(fp) + kTiny) {
      result.converged = true;
      break;
    }
    std::vector<double> extrapolated(n);
    std::vector<double> new_dir(n);
    for (std::size_t i = 0; i < n; ++i) {
      extrapolated[i] = 2.0 * p[i] - pt[i];
      new_dir[i] = p[i] - pt[i];
    }
    const double fe = eval(extrapolated);
    if (fe < fp) {
      const double t = 2.0 * (fp - 2.0 * fret + fe) * (fp - fret - biggest) * (fp - fret - biggest) -
                       biggest * (fp - fe) * (fp - fe);
      if (t < 0.0) {
        line_search(p, fret, new_dir);
        dirs[ibig] = dirs[n - 1];
        dirs[n - 1] = new_dir;
      }
    }
  }
  result.params = external(p);
  result.value = fret;
  return result;
}

}  // namespace smoothlm
