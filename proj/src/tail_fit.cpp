#include "deplens/tail_fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_sf_zeta.h>

namespace deplens {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kAlphaLow = 1.0 + 1e-6;
constexpr double kAlphaHigh = 50.0;

void silence_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

double hzeta(double s, double q) {
    gsl_sf_result r;
    if (gsl_sf_hzeta_e(s, q, &r) != GSL_SUCCESS) return kNaN;
    return r.val;
}

double log_hzeta(double s, double q) { return std::log(hzeta(s, q)); }

struct Minimum {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

double nm_trampoline(const gsl_vector* v, void* params) {
    const auto& f = *static_cast<const std::function<double(const std::vector<double>&)>*>(params);
    std::vector<double> x(v->size);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = gsl_vector_get(v, i);
    const double y = f(x);
    return std::isfinite(y) ? y : 1e300;
}

Minimum nelder_mead(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& start,
                    const std::vector<double>& step) {
    const std::size_t d = start.size();
    gsl_multimin_function fn{&nm_trampoline, d, const_cast<void*>(static_cast<const void*>(&f))};
    gsl_vector* x = gsl_vector_alloc(d);
    gsl_vector* s = gsl_vector_alloc(d);
    for (std::size_t i = 0; i < d; ++i) {
        gsl_vector_set(x, i, start[i]);
        gsl_vector_set(s, i, step[i]);
    }
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d);
    gsl_multimin_fminimizer_set(m, &fn, x, s);
    Minimum out;
    for (int it = 0; it < 5000; ++it) {
        if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-9) == GSL_SUCCESS) {
            out.converged = true;
            break;
        }
    }
    out.x.resize(d);
    for (std::size_t i = 0; i < d; ++i) out.x[i] = gsl_vector_get(m->x, i);
    out.value = m->fval;
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(s);
    gsl_vector_free(x);
    return out;
}

double alpha_from_log_sum(double sum_log, std::size_t n, std::uint64_t x_min, std::uint64_t approximate_from) {
    const auto nd = static_cast<double>(n);
    if (x_min >= approximate_from) {
        const double denom = sum_log - nd * std::log(static_cast<double>(x_min) - 0.5);
        return denom > 0.0 ? std::min(kAlphaHigh, 1.0 + nd / denom) : kAlphaHigh;
    }
    const auto q = static_cast<double>(x_min);
    const auto nll = [&](double a) { return nd * log_hzeta(a, q) + a * sum_log; };
    const auto r = boost::math::tools::brent_find_minima(nll, kAlphaLow, kAlphaHigh, 52);
    return r.first;
}

// Survival function of the standard normal.
double norm_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double log_interval(double lo, double hi) {
    const double p = lo > 0.0 ? norm_sf(lo) - norm_sf(hi) : norm_cdf(hi) - norm_cdf(lo);
    return std::log(std::max(p, 1e-300));
}

}  // namespace

std::vector<std::uint64_t> positive_samples(std::span<const std::size_t> values) {
    std::vector<std::uint64_t> out;
    for (auto v : values) {
        if (v > 0) out.push_back(v);
    }
    return out;
}

double powerlaw_cdf(double alpha, std::uint64_t x_min, std::uint64_t x) {
    silence_gsl();
    if (x < x_min) return 0.0;
    return 1.0 - hzeta(alpha, static_cast<double>(x) + 1.0) / hzeta(alpha, static_cast<double>(x_min));
}

double powerlaw_ks(std::span<const std::uint64_t> sorted_tail, double alpha, std::uint64_t x_min) {
    silence_gsl();
    const std::size_t n = sorted_tail.size();
    if (n == 0) return 0.0;
    const double z0 = hzeta(alpha, static_cast<double>(x_min));
    const auto cdf = [&](std::uint64_t x) {
        return x < x_min ? 0.0 : 1.0 - hzeta(alpha, static_cast<double>(x) + 1.0) / z0;
    };
    double d = 0.0;
    if (sorted_tail.front() > x_min) d = cdf(sorted_tail.front() - 1);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted_tail[j] == sorted_tail[i]) ++j;
        const double emp = static_cast<double>(j) / static_cast<double>(n);
        d = std::max(d, std::abs(emp - cdf(sorted_tail[i])));
        // The empirical CDF is flat until the next value; the fitted one rises.
        if (j < n && sorted_tail[j] - 1 > sorted_tail[i]) d = std::max(d, std::abs(emp - cdf(sorted_tail[j] - 1)));
        i = j;
    }
    return d;
}

double powerlaw_alpha(std::span<const std::uint64_t> tail, std::uint64_t x_min, std::uint64_t approximate_from) {
    silence_gsl();
    if (tail.empty()) throw std::invalid_argument("powerlaw_alpha: empty tail");
    double sum_log = 0.0;
    for (auto x : tail) sum_log += std::log(static_cast<double>(x));
    return alpha_from_log_sum(sum_log, tail.size(), x_min, approximate_from);
}

TailFit fit_powerlaw(std::span<const std::uint64_t> samples, const TailFitOptions& options) {
    silence_gsl();
    if (samples.size() < std::max<std::size_t>(options.min_samples, 1)) {
        throw std::invalid_argument("fit_powerlaw: too few samples");
    }
    std::vector<std::uint64_t> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    if (xs.front() == 0) throw std::invalid_argument("fit_powerlaw: samples must be positive");
    if (xs.front() == xs.back()) throw std::invalid_argument("fit_powerlaw: degenerate sample (all values equal)");

    // suffix_log[i] = sum of ln(xs[j]) for j >= i.
    std::vector<double> suffix_log(xs.size() + 1, 0.0);
    for (std::size_t i = xs.size(); i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(xs[i]));

    std::vector<std::uint64_t> candidates;
    if (options.fixed_xmin) {
        candidates.push_back(*options.fixed_xmin);
    } else {
        std::vector<std::uint64_t> distinct = xs;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        const auto cap = static_cast<std::size_t>(std::floor(options.xmin_quantile * static_cast<double>(distinct.size() - 1)));
        candidates.assign(distinct.begin(), distinct.begin() + static_cast<std::ptrdiff_t>(cap + 1));
    }

    std::vector<TailFit> fits(candidates.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto x_min = candidates[c];
        const auto first = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x_min) - xs.begin());
        auto& f = fits[c];
        f.x_min = x_min;
        f.n = xs.size();
        f.n_tail = xs.size() - first;
        if (f.n_tail < 2) {
            f.ks = std::numeric_limits<double>::infinity();
            continue;
        }
        f.alpha = alpha_from_log_sum(suffix_log[first], f.n_tail, x_min, options.approximate_from);
        f.ks = powerlaw_ks(std::span<const std::uint64_t>(xs).subspan(first), f.alpha, x_min);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < fits.size(); ++c) {
        if (fits[c].ks < fits[best].ks) best = c;
    }
    TailFit out = fits[best];
    if (!std::isfinite(out.ks)) throw std::invalid_argument("fit_powerlaw: no cutoff leaves at least two tail samples");
    out.sigma = (out.alpha - 1.0) / std::sqrt(static_cast<double>(out.n_tail));
    out.tail_fraction = static_cast<double>(out.n_tail) / static_cast<double>(out.n);
    return out;
}

std::string to_string(Alternative alt) {
    switch (alt) {
        case Alternative::lognormal: return "lognormal";
        case Alternative::exponential: return "exponential";
        case Alternative::stretched_exponential: return "stretched_exponential";
        case Alternative::truncated_power_law: return "truncated_power_law";
    }
    return "unknown";
}

ModelComparison compare_alternatives(std::span<const std::uint64_t> samples, const TailFit& fit) {
    silence_gsl();
    std::vector<double> x;
    for (auto s : samples) {
        if (s >= fit.x_min) x.push_back(static_cast<double>(s));
    }
    if (x.size() < 2) throw std::invalid_argument("compare_alternatives: tail has fewer than two samples");
    const auto n = static_cast<double>(x.size());
    const auto xmin = static_cast<double>(fit.x_min);
    std::vector<double> lnx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lnx[i] = std::log(x[i]);

    ModelComparison out;
    std::vector<double> ll_pl(x.size());
    const double lz = log_hzeta(fit.alpha, xmin);
    for (std::size_t i = 0; i < x.size(); ++i) ll_pl[i] = -fit.alpha * lnx[i] - lz;
    out.powerlaw_log_likelihood = std::accumulate(ll_pl.begin(), ll_pl.end(), 0.0);

    const auto finish = [&](AlternativeFit& alt, const std::vector<double>& ll) {
        alt.log_likelihood = std::accumulate(ll.begin(), ll.end(), 0.0);
        std::vector<double> d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = ll_pl[i] - ll[i];
        alt.R = std::accumulate(d.begin(), d.end(), 0.0);
        const double mean = alt.R / n;
        double var = 0.0;
        for (double di : d) var += (di - mean) * (di - mean);
        const double sd = std::sqrt(var / n);
        alt.p = sd > 0.0 ? std::erfc(std::abs(alt.R / (sd * std::sqrt(n))) / std::sqrt(2.0)) : 1.0;
        out.alternatives.push_back(std::move(alt));
    };

    // Lognormal, discretized over [x - 1/2, x + 1/2).
    {
        double mu = 0.0, s2 = 0.0;
        for (double l : lnx) mu += l;
        mu /= n;
        for (double l : lnx) s2 += (l - mu) * (l - mu);
        const double sigma0 = std::max(0.1, std::sqrt(s2 / n));
        const auto per_point = [&](double m, double s, std::vector<double>* ll) {
            const double norm = std::log(std::max(norm_sf((std::log(xmin - 0.5) - m) / s), 1e-300));
            double total = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = log_interval((std::log(x[i] - 0.5) - m) / s, (std::log(x[i] + 0.5) - m) / s) - norm;
                if (ll) (*ll)[i] = v;
                total += v;
            }
            return total;
        };
        const auto r = nelder_mead([&](const std::vector<double>& p) { return -per_point(p[0], std::exp(p[1]), nullptr); },
                                   {mu, std::log(sigma0)}, {0.5, 0.3});
        AlternativeFit alt;
        alt.model = Alternative::lognormal;
        alt.parameters = {r.x[0], std::exp(r.x[1])};
        alt.converged = r.converged;
        std::vector<double> ll(x.size());
        per_point(r.x[0], std::exp(r.x[1]), &ll);
        finish(alt, ll);
    }
    // Geometric (discrete exponential) on x >= x_min: closed form.
    {
        double shift = 0.0;
        for (double v : x) shift += v - xmin;
        shift /= n;
        const double lambda = shift > 0.0 ? std::log1p(1.0 / shift) : 50.0;
        AlternativeFit alt;
        alt.model = Alternative::exponential;
        alt.parameters = {lambda};
        std::vector<double> ll(x.size());
        const double c = std::log(-std::expm1(-lambda));
        for (std::size_t i = 0; i < x.size(); ++i) ll[i] = c - lambda * (x[i] - xmin);
        finish(alt, ll);
    }
    // Discrete Weibull: P(X >= x) proportional to exp(-lambda x^k).
    {
        const auto per_point = [&](double lambda, double k, std::vector<double>* ll) {
            const double base = std::pow(xmin, k);
            double total = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double xk = std::pow(x[i], k);
                const double step = std::pow(x[i] + 1.0, k) - xk;
                const double v = -lambda * (xk - base) + std::log(std::max(-std::expm1(-lambda * step), 1e-300));
                if (ll) (*ll)[i] = v;
                total += v;
            }
            return total;
        };
        double m = 0.0;
        for (double v : x) m += std::sqrt(v) - std::sqrt(xmin);
        m /= n;
        const double lambda0 = m > 0.0 ? 1.0 / m : 1.0;
        const auto r = nelder_mead(
            [&](const std::vector<double>& p) { return -per_point(std::exp(p[0]), std::exp(p[1]), nullptr); },
            {std::log(lambda0), std::log(0.5)}, {0.5, 0.3});
        AlternativeFit alt;
        alt.model = Alternative::stretched_exponential;
        alt.parameters = {std::exp(r.x[0]), std::exp(r.x[1])};
        alt.converged = r.converged;
        std::vector<double> ll(x.size());
        per_point(alt.parameters[0], alt.parameters[1], &ll);
        finish(alt, ll);
    }
    // Truncated power law: x^-alpha e^-lambda x. Normalizer = direct sum over
    // [x_min, N) + Euler-Maclaurin remainder from N, whose integral is taken by
    // quadrature so that lambda -> 0 degrades smoothly to the zeta tail.
    {
        constexpr std::uint64_t kDirectTerms = 256;
        const std::uint64_t cap = fit.x_min + kDirectTerms;  // N
        std::vector<double> lny;
        lny.reserve(kDirectTerms);
        for (std::uint64_t y = fit.x_min; y < cap; ++y) lny.push_back(std::log(static_cast<double>(y)));
        gsl_integration_workspace* ws = gsl_integration_workspace_alloc(256);
        struct Integrand {
            double a, lambda;
        };
        const auto f = [](double y, void* p) {
            const auto* q = static_cast<const Integrand*>(p);
            return std::exp(-q->a * std::log(y) - q->lambda * y);
        };
        const auto log_norm = [&](double a, double lambda) {
            double z = 0.0;
            for (std::size_t i = 0; i < lny.size(); ++i) {
                z += std::exp(-a * lny[i] - lambda * static_cast<double>(fit.x_min + i));
            }
            const auto big_n = static_cast<double>(cap);
            Integrand q{a, lambda};
            gsl_function fn{+f, &q};
            double integral = 0.0, err = 0.0;
            if (gsl_integration_qagiu(&fn, big_n, 0.0, 1e-10, 256, ws, &integral, &err) != GSL_SUCCESS) return kNaN;
            const double f_n = std::exp(-a * std::log(big_n) - lambda * big_n);
            z += integral + f_n / 2.0 + f_n * (a / big_n + lambda) / 12.0;
            return std::log(z);
        };
        const auto per_point = [&](double a, double lambda, std::vector<double>* ll) {
            const double lz_t = log_norm(a, lambda);
            double total = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = -a * lnx[i] - lambda * x[i] - lz_t;
                if (ll) (*ll)[i] = v;
                total += v;
            }
            return total;
        };
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= n;
        // lambda = u^2 keeps the pure power law (u = 0) inside the search space.
        const auto r = nelder_mead([&](const std::vector<double>& p) { return -per_point(p[0], p[1] * p[1], nullptr); },
                                   {fit.alpha, std::sqrt(0.1 / mean)}, {0.2, 0.5 * std::sqrt(0.1 / mean)});
        AlternativeFit alt;
        alt.model = Alternative::truncated_power_law;
        alt.parameters = {r.x[0], r.x[1] * r.x[1]};
        alt.converged = r.converged && std::isfinite(r.value) && r.value < 1e300;
        std::vector<double> ll(x.size());
        per_point(alt.parameters[0], alt.parameters[1], &ll);
        gsl_integration_workspace_free(ws);
        finish(alt, ll);
    }
    std::sort(out.alternatives.begin(), out.alternatives.end(),
              [](const AlternativeFit& a, const AlternativeFit& b) { return a.model < b.model; });
    return out;
}

}  // namespace deplens
