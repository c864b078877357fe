#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bbe/maps.hpp"

namespace bbe {

/// One timed pixel-assignment run. wall_time is the median over `repeats`
/// measurements (a discarded warm-up precedes them).
struct BenchRecord {
    Eigen::Index height = 0;
    Eigen::Index width = 0;
    int n_instances = 0;              // = global boxes M for oracle scenes
    Eigen::Index n_person_pixels = 0; // |S_p| actually visited
    double wall_time = 0.0;           // seconds
    int repeats = 0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept with the coefficient of
/// determination.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct SweepResult {
    std::vector<BenchRecord> records;
    LinearFit fit;  // wall_time against n_person_pixels * n_instances
};

/// Times assign_pixels on zero-noise oracle scenes over the cross product of
/// canvas sizes (square) and instance counts. Scene generation, oracle map
/// construction and box selection happen outside the timed region.
/// Single-threaded.
SweepResult run_sweep(std::span<const Eigen::Index> sizes, std::span<const int> instance_counts,
                      std::uint64_t seed, int repeats = 5);

/// CSV, one row per record:
/// height,width,n_instances,n_person_pixels,wall_time,repeats
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

}  // namespace bbe
