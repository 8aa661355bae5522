#pragma once

#include <cstdint>

#include "covert/errors.hpp"

namespace covert {

// Upper tail Q(x) of the standard normal, and its inverse.
double q_function(double x);
double q_inverse(double p);  // DomainError unless p in (0,1)
double normal_pdf(double x);

// Totals for a sum of independent variables: mean = sum mu_k,
// variance = sum sigma_k^2, third_abs_central = sum E|X_k - mu_k|^3.
struct GaussianMoments {
  double mean = 0.0;
  double variance = 0.0;
  double third_abs_central = 0.0;

  static GaussianMoments iid(double mu, double var, double t_abs, std::uint64_t n);
};

// Uniform bound 6T/sigma^3 on |P{sum(X_k - mu_k) >= lambda*sigma} - Q(lambda)|.
double berry_esseen_bound(const GaussianMoments& m);

// Regularized lower incomplete gamma P(a, x); used for chi-squared p-values.
double regularized_gamma_lower(double a, double x);
double chi_squared_sf(double statistic, int dof);

}  // namespace covert
