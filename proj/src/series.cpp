#include "germlab/series.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace germlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::non_finite_coefficient: return "non-finite-coefficient";
    case ErrorCode::not_invertible: return "not-invertible";
    case ErrorCode::not_tangent_to_identity: return "not-tangent-to-identity";
    case ErrorCode::indistinguishable_from_identity: return "indistinguishable-from-identity";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::petal_certification_failed: return "petal-certification-failed";
    case ErrorCode::outside_domain: return "outside-domain";
    case ErrorCode::branch_escape: return "branch-escape";
    case ErrorCode::iteration_budget_exhausted: return "iteration-budget-exhausted";
    case ErrorCode::needs_extended_precision: return "needs-extended-precision";
    case ErrorCode::outside_petal: return "outside-petal";
    case ErrorCode::not_in_basin: return "not-in-basin";
    case ErrorCode::undecided: return "undecided";
    case ErrorCode::inversion_failed: return "inversion-failed";
    case ErrorCode::critical_point_not_found: return "critical-point-not-found";
    case ErrorCode::not_a_centralizer_candidate: return "not-a-centralizer-candidate";
    case ErrorCode::not_commuting: return "not-commuting";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::undecidable_at_this_order: return "undecidable-at-this-order";
    case ErrorCode::estimator_failure: return "estimator-failure";
  }
  return "unknown";
}

std::string_view to_string(Backend backend) {
  return backend == Backend::extended ? "extended" : "float64";
}

Backend backend_from_string(std::string_view name) {
  if (name == "float64") return Backend::float64;
  if (name == "extended") return Backend::extended;
  throw Error(ErrorCode::invalid_argument, "unknown precision backend '" + std::string(name) + "'");
}

RationalAngle::RationalAngle(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "rational angle with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const auto g = std::gcd(num, den);
  p = num / g;
  q = den / g;
}

std::string RationalAngle::str() const { return std::to_string(p) + "/" + std::to_string(q); }

RationalAngle RationalAngle::parse(std::string_view text) {
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      throw Error(ErrorCode::invalid_argument, "cannot parse rational '" + std::string(text) + "'");
    return v;
  };
  if (slash == std::string_view::npos) return RationalAngle(parse_int(text), 1);
  return RationalAngle(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

ParabolicOrder parabolic_order(const Germ& f, double tol) {
  if (std::abs(f.coeff(1) - 1.0) > tol)
    throw Error(ErrorCode::not_tangent_to_identity, "multiplier is not +1");
  for (int k = 2; k <= f.order(); ++k) {
    if (std::abs(f.coeff(k)) > tol) return {k - 1, f.coeff(k)};
  }
  throw Error(ErrorCode::indistinguishable_from_identity,
              "all coefficients beyond c1 are below tolerance at order " + std::to_string(f.order()));
}

namespace {

using cplx = std::complex<double>;

// Coefficient of z^m in F∘g - g∘F, using only the first m coefficients.
cplx commutator_coeff(const Germ& f, const std::vector<cplx>& b, int m) {
  std::vector<cplx> bm(m, cplx{});
  for (int k = 0; k < m && k < static_cast<int>(b.size()); ++k) bm[k] = b[k];
  const Germ g(std::move(bm));
  const Germ fm = f.truncated(m);
  return compose(fm, g).coeff(m) - compose(g, fm).coeff(m);
}

}  // namespace

CommutantSolution commutant_solve(const Germ& f, std::complex<double> b1, int order,
                                  const CommutantOptions& opts) {
  const auto po = parabolic_order(f);
  const int q = po.q;
  const int n_max = std::min(order, f.order());
  if (n_max < 1) throw Error(ErrorCode::invalid_order, "order must be positive");
  if (std::abs(std::pow(b1, q) - 1.0) > opts.root_of_unity_tol) {
    std::ostringstream msg;
    msg << "b1 = " << b1 << " is not a " << q << "-th root of unity";
    throw Error(ErrorCode::no_solution, msg.str());
  }

  constexpr double kZeroTol = 1e-10;
  std::vector<cplx> b(n_max, cplx{});
  b[0] = b1;
  CommutantReport report;
  report.order = n_max;
  report.status.assign(n_max, CoeffStatus::free);
  report.status[0] = CoeffStatus::given;

  const double scale = std::max(1.0, std::abs(po.a_next));
  for (int n = 2; n <= n_max; ++n) {
    const int m = n + q;
    if (m > n_max) {
      report.status[n - 1] = CoeffStatus::free;
      report.free_indices.insert(n);
      continue;
    }
    b[n - 1] = 0.0;
    const cplx r0 = commutator_coeff(f, b, m);
    b[n - 1] = 1.0;
    const cplx r1 = commutator_coeff(f, b, m);
    const cplx lin = r1 - r0;
    if (std::abs(lin) > opts.solve_tol * scale) {
      b[n - 1] = -r0 / lin;
      report.status[n - 1] = CoeffStatus::determined;
      if (std::abs(b[n - 1]) <= kZeroTol) report.forced_zero.insert(n);
    } else {
      b[n - 1] = 0.0;
      if (std::abs(r0) <= kZeroTol * scale) {
        report.status[n - 1] = CoeffStatus::free;
        report.free_indices.insert(n);
      } else {
        report.status[n - 1] = CoeffStatus::inconsistent;
        report.inconsistent.insert(n);
      }
    }
  }
  Germ candidate(std::move(b));
  report.residual_norm = commutator_norm(f.truncated(n_max), candidate);
  return {std::move(report), std::move(candidate)};
}

FormalCommutant formal_commutant(const Germ& f, std::complex<double> b1, int order, double resonance_tol) {
  const int n_max = std::min(order, f.order());
  const cplx lambda = f.coeff(1);
  std::vector<cplx> b(n_max, cplx{});
  b[0] = b1;
  FormalCommutant out;
  cplx lambda_n = lambda;
  for (int n = 2; n <= n_max; ++n) {
    lambda_n *= lambda;
    b[n - 1] = 0.0;
    const cplx r0 = commutator_coeff(f, b, n);
    const cplx denom = lambda - lambda_n;
    if (std::abs(denom) < resonance_tol) {
      out.resonant.push_back(n);
      continue;
    }
    b[n - 1] = -r0 / denom;
  }
  out.germ = Germ(std::move(b));
  return out;
}

namespace {

// Goodness of Q^k for k = 1..count (direction +1) or k = -1..-count (-1).
// Q is λz + z², so one step costs a single truncated square in either
// direction: forward x ↦ λx + x², backward solves λy + y² = x order by order.
class IterateScanner {
 public:
  IterateScanner(const Germ& q_germ, double r, int direction)
      : lambda_(q_germ.coeff(1)), current_(q_germ.order(), cplx{}), r_(r), direction_(direction) {
    current_[0] = 1.0;
  }

  bool next() {
    const int n = static_cast<int>(current_.size());
    std::vector<cplx> out(n, cplx{});
    if (direction_ > 0) {
      for (int m = 0; m < n; ++m) {
        cplx sq{};
        for (int i = 0; 2 * i < m - 1; ++i) sq += current_[i] * current_[m - 1 - i];
        sq *= 2.0;
        if ((m + 1) % 2 == 0) sq += current_[(m - 1) / 2] * current_[(m - 1) / 2];
        out[m] = lambda_ * current_[m] + sq;
      }
    } else {
      for (int m = 0; m < n; ++m) {
        cplx sq{};
        for (int i = 0; 2 * i < m - 1; ++i) sq += out[i] * out[m - 1 - i];
        sq *= 2.0;
        if ((m + 1) % 2 == 0) sq += out[(m - 1) / 2] * out[(m - 1) / 2];
        out[m] = (current_[m] - sq) / lambda_;
      }
    }
    current_ = std::move(out);
    double scale = 1;
    for (const cplx c : current_) {
      if (std::abs(c) * scale > 1 + kRGoodSlack) return false;
      scale *= r_;
    }
    return true;
  }

 private:
  cplx lambda_;
  std::vector<cplx> current_;  // c_1..c_N
  double r_;
  int direction_;
};

std::vector<int> k_set_for(const Germ& q_germ, double r, int k_min, int k_max) {
  if (k_min > k_max) throw Error(ErrorCode::invalid_argument, "k_min > k_max");
  if (!(r > 0)) throw Error(ErrorCode::invalid_argument, "r must be positive");
  std::vector<int> out;
  if (k_min <= 0 && 0 <= k_max) out.push_back(0);
  if (k_max > 0) {
    IterateScanner up(q_germ, r, +1);
    for (int k = 1; k <= k_max; ++k) {
      const bool good = up.next();
      if (good && k >= k_min) out.push_back(k);
    }
  }
  if (k_min < 0) {
    IterateScanner down(q_germ, r, -1);
    for (int k = -1; k >= k_min; --k) {
      const bool good = down.next();
      if (good && k <= k_max) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> k_set(const RationalAngle& pq, double r, int k_min, int k_max, int order) {
  return k_set_for(quadratic_germ(pq, order), r, k_min, k_max);
}

std::vector<int> k_set(double alpha, double r, int k_min, int k_max, int order) {
  return k_set_for(quadratic_germ(alpha, order), r, k_min, k_max);
}

KSetResult k_set_widened(const RationalAngle& pq, double r, const KSetOptions& opts) {
  if (!(r > 0)) throw Error(ErrorCode::invalid_argument, "r must be positive");
  // Q^{q} has multiplicity q+1, so below order q+2 its first nonlinear
  // coefficient is truncated away and the verdict at k = ±q is meaningless.
  const int order = opts.adaptive_order
                        ? std::max<int>(opts.order, static_cast<int>(std::min<std::int64_t>(pq.q + 2, 512)))
                        : opts.order;
  const Germ q_germ = quadratic_germ(pq, order);
  const int fail_run = opts.fail_run > 0 ? opts.fail_run
                                         : static_cast<int>(std::min<std::int64_t>(pq.q + 2, 64));
  KSetResult res;
  res.order = order;
  res.members.push_back(0);

  auto scan = [&](int direction) {
    IterateScanner sc(q_germ, r, direction);
    int run = 0;
    int k = 0;
    while (true) {
      k += direction;
      if (std::abs(k) > opts.max_half_width) {
        res.capped = true;
        return k - direction;
      }
      if (sc.next()) {
        res.members.push_back(k);
        run = 0;
      } else {
        ++run;
      }
      if (run >= fail_run && std::abs(k) >= opts.initial_half_width) return k;
    }
  };
  res.k_max = scan(+1);
  res.k_min = scan(-1);
  std::sort(res.members.begin(), res.members.end());
  return res;
}

}  // namespace germlab
