#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankin/scalarfactor.hpp"

namespace rankin::zeta {

using cplx = std::complex<double>;

struct PoleAt : std::domain_error {
  explicit PoleAt(int p) : std::domain_error("xi: pole at s = " + std::to_string(p)), point(p) {}
  int point;
};

inline constexpr double kPi = 3.14159265358979323846;

// Lanczos approximation, g = 7, 9 coefficients.
inline cplx gamma(cplx z) {
  static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

struct XiEvaluator {
  int N = 50;  // Euler–Maclaurin cut-off (raised with |Im s|)

  cplx zeta(cplx s) const {
    if (s == cplx(1.0, 0.0)) throw PoleAt(1);
    static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    const int n = N + static_cast<int>(std::ceil(std::abs(s.imag())));
    const double dn = n;
    cplx sum = 0;
    for (int k = 1; k < n; ++k) sum += std::exp(-s * std::log(static_cast<double>(k)));
    cplx Ns = std::exp(-s * std::log(dn));
    sum += dn * Ns / (s - 1.0) + 0.5 * Ns;
    // Σ B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    cplx rising = s;
    double fact = 2;
    cplx Npow = Ns / dn;
    for (int k = 1; k <= 6; ++k) {
      sum += B[k - 1] / fact * rising * Npow;
      rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
      fact *= (2 * k + 1) * (2 * k + 2);
      Npow /= dn * dn;
    }
    return sum;
  }

  // ξ(s) = π^{-s/2} Γ(s/2) ζ(s)
  cplx xi(cplx s) const {
    if (s == cplx(0.0, 0.0)) throw PoleAt(0);
    if (s == cplx(1.0, 0.0)) throw PoleAt(1);
    return std::exp(-0.5 * s * std::log(kPi)) * gamma(0.5 * s) * zeta(s);
  }
};

inline cplx xi(cplx s) { return XiEvaluator{}.xi(s); }

// Evaluation through ξ(s) = ξ(1−s) left of the critical line: avoids the cancellation of the
// Euler–Maclaurin sum near the trivial zeros of ζ.  Used for limits, never for the symmetry checks.
inline cplx xi_stable(cplx s) { return s.real() < 0.5 ? xi(1.0 - s) : xi(s); }

// Neville extrapolation to h = 0 of f sampled at h = 10^{-k}, k = 3..6.
template <class F>
cplx richardson_limit(F f) {
  std::vector<double> h;
  std::vector<cplx> v;
  for (int k = 3; k <= 6; ++k) {
    h.push_back(std::pow(10.0, -k));
    v.push_back(f(h.back()));
  }
  for (std::size_t m = 1; m < h.size(); ++m)
    for (std::size_t i = h.size() - 1; i >= m; --i) v[i] = (h[i - m] * v[i] - h[i] * v[i - 1]) / (h[i - m] - h[i]);
  return v.back();
}

// lim_{s→s0} (s − s0) ξ(s), approached from the right along the real direction
inline cplx residue_xi(double s0) {
  return richardson_limit([&](double h) { return h * xi_stable(cplx(s0 + h, 0)); });
}

struct NumericReport {
  std::string check;
  std::vector<std::string> points;
  double max_abs_error = 0;
  bool pass = false;
};

inline std::string fmt(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

// ξ(s) = ξ(1−s) on a grid with −1 ≤ Re s ≤ 2 off the critical line; relative deviation.
inline NumericReport functional_equation_grid(double tol = 1e-10) {
  NumericReport r{"xi_functional_equation", {}, 0, false};
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      double re = -1.0 + 3.0 * a / 9.0;
      if (std::abs(re - 0.5) < 1e-9) re += 0.05;
      double im = 0.7 + 2.9 * b;
      cplx s(re, im);
      cplx x = xi(s), y = xi(1.0 - s);
      r.max_abs_error = std::max(r.max_abs_error, std::abs(x - y) / std::abs(x));
      r.points.push_back(fmt(s));
    }
  r.pass = r.max_abs_error <= tol;
  return r;
}

inline NumericReport reflection_grid(double tol = 1e-10) {
  NumericReport r{"xi_reflection", {}, 0, false};
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      cplx s(-1.0 + 0.31 * a, 0.5 + 3.1 * b);
      cplx x = xi(std::conj(s)), y = std::conj(xi(s));
      r.max_abs_error = std::max(r.max_abs_error, std::abs(x - y) / std::abs(y));
      r.points.push_back(fmt(s));
    }
  r.pass = r.max_abs_error <= tol;
  return r;
}

inline NumericReport residue_checks(double tol = 1e-9) {
  NumericReport r{"xi_residues", {"1", "0"}, 0, false};
  r.max_abs_error = std::max(std::abs(residue_xi(1.0) - 1.0), std::abs(residue_xi(0.0) + 1.0));
  r.pass = r.max_abs_error <= tol;
  return r;
}

// Evaluate an LTermProduct in the trivial-character model (every L ↦ ξ) at a real point.
inline cplx evaluate_trivial(const LTermProduct& p, const std::vector<double>& point) {
  cplx v = 1;
  for (const auto& [t, e] : p.terms()) {
    double arg = t.arg.constant.to_double();
    for (std::size_t i = 0; i < point.size(); ++i) arg += t.arg.coeffs[i].to_double() * point[i];
    cplx x = xi_stable(cplx(arg, 0));
    for (int k = 0; k < (e > 0 ? e : -e); ++k) v = e > 0 ? v * x : v / x;
  }
  return v;
}

// n_π(w, s) for π = Speh(1,d) ⊠ Speh(1,d), w = (1 2), regularised at s = λ1 − λ2 = 0.
inline cplx numeric_n_at_zero(int d) {
  if (d < 1) throw std::invalid_argument("numeric_n_at_zero: d >= 1");
  TokenRegistry reg({{"1", 1, "1"}});
  auto b = SpehBlock::make(reg, "1", d);
  auto p = n_factor(reg, {b, b}, WeylBlockElement({1, 0}));
  return richardson_limit([&](double h) { return evaluate_trivial(p, {h, 0.0}); });
}

struct Gl1Gl2Result {
  double lambda1, lambda22;
  cplx lhs, rhs;
  double error;
};

// Residue across λ1 + λ2¹ = 1/2 of ξ(1/2+λ1+λ2¹) ξ(1/2+λ1+λ2²) / ξ(1+λ2¹−λ2²) against ξ(λ2¹−λ2²)/ξ(1+λ2¹−λ2²).
inline Gl1Gl2Result gl1gl2_residue_check(double l1, double l22) {
  auto quotient = [&](double l21) {
    return xi(cplx(0.5 + l1 + l21, 0)) * xi(cplx(0.5 + l1 + l22, 0)) / xi(cplx(1 + l21 - l22, 0));
  };
  const double l21 = 0.5 - l1;
  Gl1Gl2Result r{l1, l22, 0, 0, 0};
  r.lhs = richardson_limit([&](double t) { return t * quotient(l21 + t); });
  r.rhs = xi(cplx(l21 - l22, 0)) / xi(cplx(1 + l21 - l22, 0));
  r.error = std::abs(r.lhs - r.rhs);
  return r;
}

// The case χ1 = χ2^{2,∨}: residue across λ1 + λ2² = 1/2; the quotient collapses to 1.
inline Gl1Gl2Result gl1gl2_residue_check_swapped(double l1, double l21) {
  auto quotient = [&](double l22) {
    return xi(cplx(0.5 + l1 + l21, 0)) * xi(cplx(0.5 + l1 + l22, 0)) / xi(cplx(1 + l21 - l22, 0));
  };
  const double l22 = 0.5 - l1;
  Gl1Gl2Result r{l1, l22, 0, 0, 0};
  r.lhs = richardson_limit([&](double t) { return t * quotient(l22 + t); });
  r.rhs = 1.0;
  r.error = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace rankin::zeta
