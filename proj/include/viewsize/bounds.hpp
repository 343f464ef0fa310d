#pragma once

// Theoretical error guarantees of the streaming estimators.
//
// For Gibbons-Tirthapura with a k-wise independent hash and M stored tuples,
// the failure probability delta of missing relative precision epsilon is
//
//   delta = k^{k/2} / (e^{k/3} M^{k/2}) * (2^{k/2} + 8^{k/2} / (eps^k (2^{k/2} - 1)))   (M >= 8k)
//
// and, for any alpha in [4k/M, 1),
//
//   delta <= k^{k/2} / (e^{k/3} M^{k/2})
//            * (alpha^{k/2} / (1 - alpha)^k + 4^{k/2} / (alpha^{k/2} eps^k (2^{k/2} - 1))).
//
// The first form is the second at alpha = 1/2. Everything is evaluated in log
// space so that large k does not overflow.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "viewsize/sketches.hpp"

namespace viewsize {

class BoundDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

using real = long double;

inline real log_add(real a, real b) {
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline real log_prefactor(real k, real m) {
  return (k / 2) * std::log(k) - k / 3 - (k / 2) * std::log(m);
}

/// log(2^{k/2} - 1)
inline real log_pow2_half_minus_one(real k) {
  return std::log(std::expm1((k / 2) * std::log(real{2})));
}

inline void check_k_m(double k, double m) {
  if (!(k >= 2)) throw BoundDomainError("independence order k must be >= 2");
  if (!(m > 0)) throw BoundDomainError("memory budget M must be positive");
}

inline real log_delta_alpha(real k, real m, real eps, real alpha) {
  const real ln2 = std::log(real{2});
  const real first = (k / 2) * std::log(alpha) - k * std::log1p(-alpha);
  const real second = (k / 2) * 2 * ln2 - (k / 2) * std::log(alpha) - k * std::log(eps) -
                      log_pow2_half_minus_one(k);
  return log_prefactor(k, m) + log_add(first, second);
}

}  // namespace detail

/// Closed-form failure probability (first form). Requires M >= 8k.
inline double gt_delta(double k, double m, double epsilon) {
  detail::check_k_m(k, m);
  if (m < 8 * k) throw BoundDomainError("first-form bound requires M >= 8k");
  if (!(epsilon > 0)) throw BoundDomainError("epsilon must be positive");
  const detail::real kl = k, ln2 = std::log(detail::real{2});
  const detail::real a = (kl / 2) * ln2;
  const detail::real b = (kl / 2) * 3 * ln2 - kl * std::log(static_cast<detail::real>(epsilon)) -
                         detail::log_pow2_half_minus_one(kl);
  return static_cast<double>(std::exp(detail::log_prefactor(kl, m) + detail::log_add(a, b)));
}

/// General bound for a chosen alpha in [4k/M, 1).
inline double gt_delta_alpha(double k, double m, double epsilon, double alpha) {
  detail::check_k_m(k, m);
  if (!(epsilon > 0)) throw BoundDomainError("epsilon must be positive");
  if (!(alpha >= 4 * k / m && alpha < 1))
    throw BoundDomainError("alpha must lie in [4k/M, 1)");
  return static_cast<double>(std::exp(detail::log_delta_alpha(k, m, epsilon, alpha)));
}

struct AlphaMinimum {
  double alpha = 0;
  double delta = 0;
};

/// Minimizes gt_delta_alpha over alpha by golden-section search on log delta
/// (relative tolerance 1e-6 in alpha).
inline AlphaMinimum minimize_alpha(double k, double m, double epsilon) {
  detail::check_k_m(k, m);
  if (!(epsilon > 0)) throw BoundDomainError("epsilon must be positive");
  const double lo_bound = 4 * k / m;
  if (!(lo_bound < 1)) throw BoundDomainError("no admissible alpha: 4k/M >= 1");
  auto f = [&](detail::real a) { return detail::log_delta_alpha(k, m, epsilon, a); };

  const detail::real phi = (std::sqrt(detail::real{5}) - 1) / 2;
  detail::real lo = lo_bound, hi = std::nextafter(1.0L, 0.0L);
  detail::real x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  detail::real f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-6L * hi) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  detail::real best_a = (lo + hi) / 2, best = f(best_a);
  // The interval ends are admissible too; the first form's alpha = 1/2 is
  // checked so the minimum never exceeds the closed form.
  for (detail::real a : {detail::real{lo_bound}, detail::real{0.5L}}) {
    if (a < lo_bound || a >= 1) continue;
    if (detail::real v = f(a); v < best) {
      best = v;
      best_a = a;
    }
  }
  return {static_cast<double>(best_a), static_cast<double>(std::exp(best))};
}

struct EpsilonBound {
  double epsilon = 0;                        // alpha-minimized bound
  double alpha = 0;                          // minimizing alpha at epsilon
  std::optional<double> epsilon_first_form;  // closed-form inversion, when M >= 8k
};

inline constexpr double kMaxEpsilon = 10.0;

/// Closed-form inversion of gt_delta for epsilon; nullopt when unbounded or
/// out of the first form's domain.
inline std::optional<double> gt_epsilon_first_form(double k, double m, double delta_target) {
  detail::check_k_m(k, m);
  if (m < 8 * k) return std::nullopt;
  if (!(delta_target > 0 && delta_target < 1)) throw BoundDomainError("delta must be in (0, 1)");
  const detail::real kl = k, ln2 = std::log(detail::real{2});
  // bracket = delta / prefactor must exceed 2^{k/2}.
  const detail::real log_bracket = std::log(static_cast<detail::real>(delta_target)) -
                                   detail::log_prefactor(kl, m);
  const detail::real log_fixed = (kl / 2) * ln2;
  if (log_bracket <= log_fixed) return std::nullopt;
  const detail::real log_rest = log_bracket + std::log(-std::expm1(log_fixed - log_bracket));
  const detail::real log_eps_k = (kl / 2) * 3 * ln2 - detail::log_pow2_half_minus_one(kl) - log_rest;
  const double eps = static_cast<double>(std::exp(log_eps_k / kl));
  if (eps > kMaxEpsilon) return std::nullopt;
  return eps;
}

/// Smallest epsilon whose alpha-minimized failure probability is at most
/// delta_target, by bisection to relative tolerance 1e-6. Throws
/// BoundDomainError when no epsilon <= 10 qualifies.
inline EpsilonBound gt_epsilon(double k, double m, double delta_target) {
  detail::check_k_m(k, m);
  if (!(delta_target > 0 && delta_target < 1)) throw BoundDomainError("delta must be in (0, 1)");
  if (m < 8 * k) throw BoundDomainError("bound requires M >= 8k");
  auto delta_at = [&](double eps) { return minimize_alpha(k, m, eps).delta; };
  if (delta_at(kMaxEpsilon) > delta_target)
    throw BoundDomainError("no epsilon <= 10 reaches delta=" + std::to_string(delta_target) +
                           " at k=" + std::to_string(k) + ", M=" + std::to_string(m));
  double lo = 0, hi = kMaxEpsilon;
  while (hi - lo > 1e-6 * hi) {
    const double mid = (lo + hi) / 2;
    (delta_at(mid) <= delta_target ? hi : lo) = mid;
  }
  EpsilonBound out;
  out.epsilon = hi;
  out.alpha = minimize_alpha(k, m, hi).alpha;
  out.epsilon_first_form = gt_epsilon_first_form(k, m, delta_target);
  return out;
}

/// Standard error (standard deviation of the relative error) of probabilistic
/// counting and LogLog under independent hashing.
inline double sketch_standard_error(Method method, double m) {
  if (!(m >= 1)) throw BoundDomainError("M must be >= 1");
  switch (method) {
    case Method::pc: return 0.78 / std::sqrt(m);
    case Method::loglog: return 1.3 / std::sqrt(m);
    default: break;
  }
  throw BoundDomainError("standard error law is defined for pc and loglog only");
}

}  // namespace viewsize
