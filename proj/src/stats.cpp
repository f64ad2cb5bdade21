#include "cqmine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cqmine::stats {

namespace {

constexpr double kTolerance = 1e-10;
constexpr int kMaxIterations = 1000;
constexpr double kPFloor = 1e-300;

// Lower regularized incomplete gamma P(a,x) by power series (x < a+1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kTolerance) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by modified Lentz continued
// fraction (x >= a+1).
double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kTolerance) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double chi_squared_sf(double x, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("chi_squared_sf: dof must be > 0");
    if (std::isnan(x)) throw std::invalid_argument("chi_squared_sf: x is NaN");
    if (x <= 0.0) return 1.0;
    const double a = k / 2.0;
    const double half_x = x / 2.0;
    const double q = (half_x < a + 1.0) ? 1.0 - gamma_p_series(a, half_x)
                                        : gamma_q_continued_fraction(a, half_x);
    return std::clamp(q, 0.0, 1.0);
}

double kolmogorov_sf(double t) {
    if (std::isnan(t)) throw std::invalid_argument("kolmogorov_sf: t is NaN");
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        // theta-series form of the CDF, accurate for small t
        const double y = std::exp(-1.2337005501361697 / (t * t));  // pi^2/8
        const double y2 = y * y;
        const double y4 = y2 * y2;
        const double y8 = y4 * y4;
        const double cdf = 2.5066282746310002 / t *               // sqrt(2*pi)
                           (y * (1.0 + y8 * (1.0 + y8 * y8 * (1.0 + y8 * y8 * y8))));
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    // alternating series, fast for large t
    const double x = std::exp(-2.0 * t * t);
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= kMaxIterations; ++j) {
        const double term = std::pow(x, static_cast<double>(j) * j);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("acf: need at least two observations");
    if (max_lag < 1 || max_lag >= n)
        throw std::invalid_argument("acf: max_lag must be in [1, n-1]");
    const double mean =
        std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (const double v : series) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw std::invalid_argument("acf: constant series");
    std::vector<double> rho(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t)
            num += (series[t] - mean) * (series[t + k] - mean);
        rho[k - 1] = num / denom;
    }
    return rho;
}

LjungBoxResult ljung_box(std::span<const double> rho, std::size_t n,
                         std::size_t h) {
    if (h == 0 || h > rho.size())
        throw std::invalid_argument("ljung_box: h must be in [1, #rho]");
    if (n <= h)
        throw std::invalid_argument("ljung_box: series length must exceed h");
    double q = 0.0;
    for (std::size_t k = 1; k <= h; ++k)
        q += rho[k - 1] * rho[k - 1] / static_cast<double>(n - k);
    q *= static_cast<double>(n) * static_cast<double>(n + 2);
    const double p = std::max(chi_squared_sf(q, static_cast<double>(h)), kPFloor);
    return {q, p};
}

SerialCorrelation serial_correlation(std::span<const double> series,
                                     std::size_t max_lag) {
    SerialCorrelation sc;
    sc.rho = acf(series, max_lag);
    sc.q.resize(max_lag);
    sc.p.resize(max_lag);
    for (std::size_t h = 1; h <= max_lag; ++h) {
        const LjungBoxResult lb = ljung_box(sc.rho, series.size(), h);
        sc.q[h - 1] = lb.q;
        sc.p[h - 1] = lb.p;
    }
    return sc;
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty())
        throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("empirical_quantile: q must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double rank = 1.0 + (static_cast<double>(n) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    if (lo >= n) return values[n - 1];
    const double frac = rank - static_cast<double>(lo);
    const double below = values[lo - 1];
    return frac == 0.0 ? below : below + frac * (values[lo] - below);
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                                  static_cast<double>(j) / ny));
    }
    const double ne = nx * ny / (nx + ny);
    const double p = std::max(kolmogorov_sf(std::sqrt(ne) * d), kPFloor);
    return {d, p};
}

std::vector<double> bh_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p_values[a] < p_values[b];
    });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t r = m; r >= 1; --r) {
        const std::size_t idx = order[r - 1];
        running = std::min(
            running, p_values[idx] * static_cast<double>(m) / static_cast<double>(r));
        adjusted[idx] = running;
    }
    return adjusted;
}

} // namespace cqmine::stats
