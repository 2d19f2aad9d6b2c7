#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace deplens {

struct TailFitOptions {
    std::size_t min_samples = 50;
    /// Candidate cutoffs are distinct sample values up to this quantile of
    /// the distinct values.
    double xmin_quantile = 0.9;
    /// Cutoffs at or above this use the closed-form half-shift estimate.
    std::uint64_t approximate_from = 6;
    std::optional<std::uint64_t> fixed_xmin;
};

struct TailFit {
    double alpha = 0.0;
    std::uint64_t x_min = 1;
    double sigma = 0.0;  // (alpha - 1) / sqrt(n_tail)
    double tail_fraction = 0.0;
    double ks = 0.0;
    std::size_t n = 0;
    std::size_t n_tail = 0;
};

/// Discrete power-law fit; x_min minimizes the KS distance of the tail.
/// Throws std::invalid_argument on zeros, too few samples, or a single
/// distinct value.
[[nodiscard]] TailFit fit_powerlaw(std::span<const std::uint64_t> samples, const TailFitOptions& options = {});

/// Maximum-likelihood exponent for a fixed cutoff (exact when x_min is below
/// `approximate_from`).
[[nodiscard]] double powerlaw_alpha(std::span<const std::uint64_t> tail, std::uint64_t x_min,
                                    std::uint64_t approximate_from = 6);

/// P(X <= x) of the discrete power law on x >= x_min.
[[nodiscard]] double powerlaw_cdf(double alpha, std::uint64_t x_min, std::uint64_t x);

/// Sup distance between the empirical CDF of `tail` (all values >= x_min) and
/// the fitted CDF over every integer.
[[nodiscard]] double powerlaw_ks(std::span<const std::uint64_t> sorted_tail, double alpha, std::uint64_t x_min);

/// Strictly positive entries of a degree sequence.
[[nodiscard]] std::vector<std::uint64_t> positive_samples(std::span<const std::size_t> values);

enum class Alternative { lognormal, exponential, stretched_exponential, truncated_power_law };
[[nodiscard]] std::string to_string(Alternative alt);

struct AlternativeFit {
    Alternative model = Alternative::exponential;
    std::vector<double> parameters;
    double log_likelihood = 0.0;
    double R = 0.0;  // L_powerlaw - L_alternative; > 0 favors the power law
    double p = 1.0;  // two-sided, normalized likelihood-ratio test
    bool converged = true;
};

struct ModelComparison {
    double powerlaw_log_likelihood = 0.0;
    std::vector<AlternativeFit> alternatives;  // in Alternative enum order
};

/// Fits each alternative by maximum likelihood on samples >= fit.x_min.
[[nodiscard]] ModelComparison compare_alternatives(std::span<const std::uint64_t> samples, const TailFit& fit);

}  // namespace deplens
