#include "mkse/bounds.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mkse::bounds {
namespace {

using std::numbers::pi;

void check_args(double lambda, double L) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("bounds require lambda > 0, got " + std::to_string(lambda));
  if (!(L > 0.0) || !std::isfinite(L))
    throw std::domain_error("bounds require L > 0, got " + std::to_string(L));
}

void check_dim(int d) {
  if (d != 1 && d != 2) throw std::domain_error("dimension must be 1 or 2, got " + std::to_string(d));
}

// Σ_{k>=0} (-1)^k a_k for completely monotone a_k, algorithm 1 of Cohen,
// Rodriguez Villegas and Zagier. Error ~ 5.8^{-terms}.
double alternating_sum(const std::function<double(int)>& a, int terms = 30) {
  double d = std::pow(3.0 + std::sqrt(8.0), terms);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (int k = 0; k < terms; ++k) {
    c = b - c;
    s += c * a(k);
    b = (k + double(terms)) * (k - double(terms)) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

double lambda_quarter(double lambda) { return lambda + 0.25; }

}  // namespace

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta needs s > 1");
  // ζ(s) = η(s) / (1 - 2^{1-s}) with η the alternating Dirichlet eta series.
  const double eta = alternating_sum([s](int k) { return std::pow(k + 1.0, -s); });
  return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

double dirichlet_beta(double s) {
  if (!(s > 0.0)) throw std::domain_error("beta needs s > 0");
  return alternating_sum([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
}

double bound_J0(int d, double lambda, double L) {
  check_dim(d);
  check_args(lambda, L);
  return std::pow(L, d) * lambda_quarter(lambda);
}

double j1_prefactor_2d() {
  return std::cbrt(5.0 / 3.0 + 5.0 / 6.0 * std::pow(4.0, 14.0 / 5.0) * std::pow(6.0 / pi, 3.0 / 5.0));
}

double bound_J1(int d, double lambda, double L) {
  const double j0 = bound_J0(d, lambda, L);
  if (d == 1) return std::sqrt((24.0 * lambda + 13.0) / 11.0) * j0;
  return j1_prefactor_2d() * j0;
}

double bound_J2_2d(double lambda, double L) {
  const double j0 = bound_J0(2, lambda, L);
  const double c5 = std::pow(5.0 / std::sqrt(pi), 4);
  const double c78 = std::pow(78.0 / pi, 4);
  const double j0_sq = j0 * j0;
  return std::pow(j0, 1.5) *
         std::sqrt(108.0 + 4.0 * lambda * lambda + 108.0 * c5 * j0_sq + 108.0 * c78 * j0_sq * j0_sq);
}

double sup_coefficient_2d(double L) { return L / (2.0 * pi * pi * pi) * std::sqrt(6.0 * kCatalan); }

double sup_coefficient_2d_sharp(double L) {
  return L / (2.0 * pi * pi) * std::sqrt(pi * pi * kCatalan / 6.0);
}

double bound_sup(int d, double lambda, double L) {
  check_dim(d);
  check_args(lambda, L);
  if (d == 1) {
    const double growth = std::sqrt((24.0 * lambda + 13.0) / 11.0);
    return std::sqrt(L * pi / 24.0 * (4.0 * lambda + 1.0) * growth) +
           0.5 * std::sqrt(4.0 * lambda + 1.0);
  }
  return sup_coefficient_2d(L) * std::sqrt(bound_J2_2d(lambda, L)) +
         std::sqrt(bound_J0(2, lambda, L)) / L;
}

TimeAverageBounds bound_time_avg(int d, double lambda, double L) {
  const double j0 = bound_J0(d, lambda, L);
  const double root = std::sqrt(2.0 * lambda + 1.0);
  TimeAverageBounds b{root * j0, (2.0 * lambda + 1.0) * j0, std::nullopt};
  if (d == 2)
    b.J3 = root * j0 *
           (lambda + root * (1.0 + std::sqrt(24.0 / pi) * L * std::sqrt(lambda_quarter(lambda))));
  return b;
}

TimeAverageTriple bound_time_avg_J1_J2_J3_2d(double lambda, double L) {
  const auto b = bound_time_avg(2, lambda, L);
  return {b.J1, b.J2, *b.J3};
}

double bound_crest_avg(int d, double lambda, double L) {
  check_dim(d);
  check_args(lambda, L);
  if (d == 1) return 1.0 + std::sqrt(L) * std::pow((24.0 * lambda + 13.0) / 11.0, 0.125);
  const auto avg = bound_time_avg_J1_J2_J3_2d(lambda, L);
  const double inner = (2.0 * lambda + 1.0) + 156.0 / pi * avg.J1 +
                       10.0 / std::sqrt(pi) * std::pow(avg.J3, 0.25) * std::pow(avg.J1, 0.25);
  return 1.0 + L / std::sqrt(pi) * std::pow(inner, 0.25);
}

BoundSet bound_set(int d, double lambda, double L) {
  check_dim(d);
  check_args(lambda, L);
  const auto avg = bound_time_avg(d, lambda, L);
  BoundSet b{};
  b.d = d;
  b.lambda = lambda;
  b.L = L;
  b.J0 = bound_J0(d, lambda, L);
  b.J1 = bound_J1(d, lambda, L);
  if (d == 2) b.J2 = bound_J2_2d(lambda, L);
  b.sup = bound_sup(d, lambda, L);
  b.crest_avg = bound_crest_avg(d, lambda, L);
  b.J1_time_avg = avg.J1;
  b.J2_time_avg = avg.J2;
  b.J3_time_avg = avg.J3;
  return b;
}

}  // namespace mkse::bounds
