#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uavslice/geometry.hpp"

namespace uavslice {

// Boolean activation vector over the sensing users, index-aligned with their
// tenant-local ordering.
using ActivationVector = std::vector<uint8_t>;

namespace detail {

// Constructive information sum: users are visited in ascending index order;
// the first contributor is credited the full raw-data volume, every later one
// is discounted by the minimum distance to the contributors before it.
inline double information_sum(const std::vector<Point2>& positions,
                              const std::vector<int>& active_sorted,
                              double raw_bits, double rho) {
    double total = 0.0;
    for (std::size_t a = 0; a < active_sorted.size(); ++a) {
        if (a == 0) {
            total += raw_bits;
            continue;
        }
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < a; ++b) {
            double d = distance(positions[active_sorted[a]], positions[active_sorted[b]]);
            if (d < dmin) dmin = d;
        }
        total += raw_bits * (1.0 - 1.0 / (dmin / rho + 1.0));
    }
    return total;
}

}  // namespace detail

// Maximum information attainable when every sensing user contributes.
inline double max_information(const std::vector<Point2>& sensing_positions,
                              double raw_bits, double rho) {
    std::vector<int> all(sensing_positions.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return detail::information_sum(sensing_positions, all, raw_bits, rho);
}

// Information gathered by the active subset. Zero when nobody is active.
inline double gathered_information(const ActivationVector& activation,
                                   const std::vector<Point2>& sensing_positions,
                                   double raw_bits, double rho) {
    if (activation.size() != sensing_positions.size())
        throw std::invalid_argument("gathered_information: activation length mismatch");
    std::vector<int> active;
    for (std::size_t i = 0; i < activation.size(); ++i)
        if (activation[i]) active.push_back(static_cast<int>(i));
    return detail::information_sum(sensing_positions, active, raw_bits, rho);
}

// Information gained by activating `candidate` on top of `activation`.
inline double marginal_information(const ActivationVector& activation, int candidate,
                                   const std::vector<Point2>& sensing_positions,
                                   double raw_bits, double rho) {
    if (candidate < 0 || static_cast<std::size_t>(candidate) >= activation.size())
        throw std::invalid_argument("marginal_information: candidate out of range");
    if (activation[candidate])
        throw std::invalid_argument("marginal_information: candidate already active");
    ActivationVector with = activation;
    with[candidate] = 1;
    return gathered_information(with, sensing_positions, raw_bits, rho) -
           gathered_information(activation, sensing_positions, raw_bits, rho);
}

}  // namespace uavslice
