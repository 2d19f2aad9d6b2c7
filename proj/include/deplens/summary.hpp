#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace deplens {

/// Population summary of a sample. Medians of even-length samples take the
/// lower middle element.
struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

[[nodiscard]] Summary summarize(std::span<const double> values);

/// Lower median (element at index (n-1)/2 of the sorted sample); 0 when empty.
[[nodiscard]] double lower_median(std::vector<double> values);

/// Linear-interpolation quantile on a sorted sample, q in [0,1].
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace deplens
