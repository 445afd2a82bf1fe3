#pragma once

// Truncated power series of germs fixing the origin.
//
// A germ of order N stores c_1..c_N; c_0 = 0 is implicit. All arithmetic
// truncates at order N and is otherwise exact in coefficient arithmetic.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "germlab/error.hpp"

namespace germlab {

enum class Backend { float64, extended };

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);

template <class Real>
constexpr Backend backend_of() {
  return sizeof(Real) > sizeof(double) ? Backend::extended : Backend::float64;
}

template <class Real>
class BasicGerm {
 public:
  using real_type = Real;
  using value_type = std::complex<Real>;

  BasicGerm() = default;

  /// Takes c_1..c_N.
  explicit BasicGerm(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorCode::invalid_order, "germ order must be positive");
    for (const auto& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorCode::non_finite_coefficient, "germ has a non-finite coefficient");
    }
  }

  static BasicGerm identity(int order) {
    if (order < 1) throw Error(ErrorCode::invalid_order, "germ order must be positive");
    std::vector<value_type> c(order, value_type{});
    c[0] = value_type{1};
    return BasicGerm(std::move(c));
  }

  /// Linear germ c1*z.
  static BasicGerm linear(value_type c1, int order) {
    auto g = identity(order);
    g.coeffs_[0] = c1;
    return g;
  }

  int order() const { return static_cast<int>(coeffs_.size()); }
  static constexpr Backend backend() { return backend_of<Real>(); }

  /// Coefficient of z^k; zero outside 1..N.
  value_type coeff(int k) const {
    if (k < 1 || k > order()) return value_type{};
    return coeffs_[k - 1];
  }

  std::span<const value_type> coeffs() const { return coeffs_; }

  bool invertible(Real tol = 0) const { return std::abs(coeffs_[0]) > tol; }

  BasicGerm truncated(int n) const {
    if (n < 1) throw Error(ErrorCode::invalid_order, "germ order must be positive");
    std::vector<value_type> c(n, value_type{});
    for (int k = 0; k < std::min(n, order()); ++k) c[k] = coeffs_[k];
    return BasicGerm(std::move(c));
  }

  /// Evaluates the truncated polynomial at z (Horner).
  value_type operator()(value_type z) const {
    value_type acc{};
    for (int k = order(); k >= 1; --k) acc = acc * z + coeffs_[k - 1];
    return acc * z;
  }

  /// Value and first derivative of the truncated polynomial.
  std::pair<value_type, value_type> eval_with_derivative(value_type z) const {
    value_type p{}, dp{};
    for (int k = order(); k >= 1; --k) {
      dp = dp * z + p;
      p = p * z + coeffs_[k - 1];
    }
    // p(z) here is sum c_k z^{k-1}; the germ is z*p(z).
    return {p * z, p + dp * z};
  }

  template <class Other>
  BasicGerm<Other> cast() const {
    std::vector<std::complex<Other>> c;
    c.reserve(coeffs_.size());
    for (const auto& x : coeffs_) c.emplace_back(static_cast<Other>(x.real()), static_cast<Other>(x.imag()));
    return BasicGerm<Other>(std::move(c));
  }

 private:
  std::vector<value_type> coeffs_;
};

using Germ = BasicGerm<double>;
using GermExt = BasicGerm<long double>;

namespace detail {

/// Full coefficient arrays a[0..n] with a[0] the constant term.
template <class T>
std::vector<T> mul_trunc(const std::vector<T>& a, const std::vector<T>& b, int n) {
  std::vector<T> r(n + 1, T{});
  for (int i = 0; i <= n && i < static_cast<int>(a.size()); ++i) {
    if (a[i] == T{}) continue;
    for (int j = 0; i + j <= n && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class Real>
std::vector<std::complex<Real>> full(const BasicGerm<Real>& g, int n) {
  std::vector<std::complex<Real>> a(n + 1, std::complex<Real>{});
  for (int k = 1; k <= n; ++k) a[k] = g.coeff(k);
  return a;
}

template <class Real>
BasicGerm<Real> from_full(const std::vector<std::complex<Real>>& a, int n) {
  return BasicGerm<Real>(std::vector<std::complex<Real>>(a.begin() + 1, a.begin() + 1 + n));
}

}  // namespace detail

/// Coefficients of f(g(z)) truncated at min(order f, order g).
template <class Real>
BasicGerm<Real> compose(const BasicGerm<Real>& f, const BasicGerm<Real>& g) {
  const int n = std::min(f.order(), g.order());
  const auto gf = detail::full(g, n);
  std::vector<std::complex<Real>> h(n + 1, std::complex<Real>{});
  h[0] = f.coeff(n);
  for (int k = n - 1; k >= 1; --k) {
    h = detail::mul_trunc(gf, h, n);
    h[0] += f.coeff(k);
  }
  h = detail::mul_trunc(gf, h, n);
  return detail::from_full(h, n);
}

/// Compositional inverse, solved order by order.
template <class Real>
BasicGerm<Real> reversion(const BasicGerm<Real>& f) {
  const auto c1 = f.coeff(1);
  if (std::abs(c1) == Real(0)) throw Error(ErrorCode::not_invertible, "reversion needs c1 != 0");
  const int n = f.order();
  std::vector<std::complex<Real>> h(n, std::complex<Real>{});
  h[0] = Real(1) / c1;
  for (int m = 2; m <= n; ++m) {
    // f(h) = z + e_m z^m + O(z^{m+1}); only h_m contributes linearly at z^m.
    const auto fh = compose(f.truncated(m), BasicGerm<Real>(std::vector(h.begin(), h.begin() + m)));
    h[m - 1] -= fh.coeff(m) / c1;
  }
  return BasicGerm<Real>(std::move(h));
}

/// k-fold self-composition; negative k iterates the inverse.
template <class Real>
BasicGerm<Real> iterate(const BasicGerm<Real>& f, int k) {
  if (k == 0) return BasicGerm<Real>::identity(f.order());
  const BasicGerm<Real> base = k > 0 ? f : reversion(f);
  // Binary powering keeps the number of compositions at O(log |k|).
  BasicGerm<Real> result = BasicGerm<Real>::identity(f.order());
  BasicGerm<Real> power = base;
  for (unsigned m = static_cast<unsigned>(k > 0 ? k : -k); m != 0; m >>= 1) {
    if (m & 1u) result = compose(power, result);
    if (m > 1) power = compose(power, power);
  }
  return result;
}

/// Max modulus of the coefficientwise difference (orders beyond the shorter
/// germ count against the longer one).
template <class Real>
Real germ_distance(const BasicGerm<Real>& a, const BasicGerm<Real>& b) {
  Real d = 0;
  for (int k = 1; k <= std::max(a.order(), b.order()); ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

/// Max modulus of the coefficients of f∘g - g∘f.
template <class Real>
Real commutator_norm(const BasicGerm<Real>& f, const BasicGerm<Real>& g) {
  return germ_distance(compose(f, g), compose(g, f));
}

/// A reduced fraction p/q with q >= 1.
struct RationalAngle {
  std::int64_t p = 0;
  std::int64_t q = 1;

  RationalAngle() = default;
  RationalAngle(std::int64_t num, std::int64_t den);

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  std::string str() const;
  static RationalAngle parse(std::string_view text);

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
};

/// e^{2πiα} z + z^2 truncated at order N.
template <class Real = double>
BasicGerm<Real> quadratic_germ(Real alpha, int order) {
  if (order < 2) throw Error(ErrorCode::invalid_order, "quadratic germ needs order >= 2");
  std::vector<std::complex<Real>> c(order, std::complex<Real>{});
  c[0] = std::polar(Real(1), 2 * std::numbers::pi_v<Real> * alpha);
  c[1] = Real(1);
  return BasicGerm<Real>(std::move(c));
}

/// Uses the exactly reduced angle so that multipliers of 0/1 and 1/2 are
/// exactly 1 and -1.
template <class Real = double>
BasicGerm<Real> quadratic_germ(const RationalAngle& pq, int order) {
  auto g = quadratic_germ<Real>(Real(0), order);
  std::vector<std::complex<Real>> c(g.coeffs().begin(), g.coeffs().end());
  const auto r = pq.p % pq.q;
  const auto m = r < 0 ? r + pq.q : r;
  if (m == 0) {
    c[0] = {1, 0};
  } else if (2 * m == pq.q) {
    c[0] = {-1, 0};
  } else if (4 * m == pq.q) {
    c[0] = {0, 1};
  } else if (4 * m == 3 * pq.q) {
    c[0] = {0, -1};
  } else {
    c[0] = std::polar(Real(1), 2 * std::numbers::pi_v<Real> * static_cast<Real>(m) / static_cast<Real>(pq.q));
  }
  return BasicGerm<Real>(std::move(c));
}

struct ParabolicOrder {
  int q = 0;
  std::complex<double> a_next;  // the coefficient of z^{q+1}
};

inline constexpr double kDefaultParabolicTol = 1e-9;

/// Least q >= 1 with |c_{q+1}| > tol for a germ tangent to the identity.
ParabolicOrder parabolic_order(const Germ& f, double tol = kDefaultParabolicTol);

enum class CoeffStatus { given, determined, free, inconsistent };

struct CommutantReport {
  std::set<int> forced_zero;
  std::set<int> free_indices;
  std::set<int> inconsistent;
  std::vector<CoeffStatus> status;  // status[k-1] for index k
  double residual_norm = 0;
  int order = 0;
};

struct CommutantSolution {
  CommutantReport report;
  Germ candidate;
};

struct CommutantOptions {
  double root_of_unity_tol = 1e-9;
  double solve_tol = 1e-12;  // below this a linear coefficient counts as zero
};

/// Solves F∘g = g∘F order by order for g with g'(0) = b1, where F is tangent
/// to the identity. Free coefficients are set to zero in the candidate.
CommutantSolution commutant_solve(const Germ& f, std::complex<double> b1, int order,
                                  const CommutantOptions& opts = {});

struct FormalCommutant {
  Germ germ;
  std::vector<int> resonant;  // indices n with λ^n ≈ λ; coefficient set to 0
};

/// Order-by-order commuting germ with prescribed g'(0) for F with multiplier
/// λ ≠ 1: b_n (λ - λ^n) = known terms.
FormalCommutant formal_commutant(const Germ& f, std::complex<double> b1, int order,
                                 double resonance_tol = 1e-14);

inline constexpr double kRGoodSlack = 1e-12;

/// |g_k| r^{k-1} <= 1 for all 1 <= k <= N. The slack absorbs rounding in
/// unit-modulus multipliers.
template <class Real>
bool is_r_good(const BasicGerm<Real>& g, double r, double slack = kRGoodSlack) {
  if (!(r > 0)) throw Error(ErrorCode::invalid_argument, "r must be positive");
  double scale = 1;
  for (int k = 1; k <= g.order(); ++k) {
    if (static_cast<double>(std::abs(g.coeff(k))) * scale > 1 + slack) return false;
    scale *= r;
  }
  return true;
}

/// {k in [k_min,k_max] : iterate(Q_{p/q}, k) is r-good} at truncation N.
std::vector<int> k_set(const RationalAngle& pq, double r, int k_min, int k_max, int order);

/// Same scan for an arbitrary multiplier angle (used for nearby-rational
/// probes given as doubles).
std::vector<int> k_set(double alpha, double r, int k_min, int k_max, int order);

struct KSetResult {
  std::vector<int> members;
  int k_min = 0;
  int k_max = 0;
  int order = 0;
  bool capped = false;  // window hit the cap before the boundary iterates failed
};

struct KSetOptions {
  int order = 16;
  int initial_half_width = 4;
  int max_half_width = 4096;
  int fail_run = 0;  // consecutive failures required at each end; 0 means q + 2
  bool adaptive_order = true;  // raise the order to q + 2 (at most 512)
};

/// Widens the window until `fail_run` consecutive iterates fail on each side.
KSetResult k_set_widened(const RationalAngle& pq, double r, const KSetOptions& opts = {});

}  // namespace germlab
