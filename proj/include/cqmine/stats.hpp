#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cqmine::stats {

// All routines validate their inputs and throw std::invalid_argument on
// degenerate data (empty/constant samples, out-of-range lags or quantiles).
// p-values are clamped to >= 1e-300 so extreme statistics stay reportable.

// Sample autocorrelation at lags 1..max_lag:
//   rho_k = sum_t (x_t - mean)(x_{t+k} - mean) / sum_t (x_t - mean)^2
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

struct LjungBoxResult {
    double q;  // n(n+2) * sum_{k<=h} rho_k^2 / (n-k)
    double p;  // upper chi-squared tail with h degrees of freedom
};

// Portmanteau test over the first h autocorrelations of a length-n series.
LjungBoxResult ljung_box(std::span<const double> rho, std::size_t n,
                         std::size_t h);

// Convenience bundle: rho plus the Ljung-Box statistic/p at every lag.
struct SerialCorrelation {
    std::vector<double> rho;
    std::vector<double> q;
    std::vector<double> p;
};
SerialCorrelation serial_correlation(std::span<const double> series,
                                     std::size_t max_lag);

// Linear-interpolation empirical quantile (R type 7): rank = 1 + (n-1)q,
// interpolating between the neighbouring order statistics.
double empirical_quantile(std::vector<double> values, double q);

struct KsResult {
    double d;  // sup |F1 - F2| over the merged sample
    double p;  // asymptotic: Q_KS(sqrt(ne) * d), ne = n*m/(n+m)
};
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

// Benjamini-Hochberg step-up adjustment; result aligns with the input order.
std::vector<double> bh_adjust(std::span<const double> p_values);

// Upper tail of the chi-squared distribution with k degrees of freedom,
// via the regularized incomplete gamma function (series + continued
// fraction, both iterated to 1e-10).
double chi_squared_sf(double x, double k);

// Kolmogorov limiting survival function Q_KS(t); two-branch series.
double kolmogorov_sf(double t);

} // namespace cqmine::stats
