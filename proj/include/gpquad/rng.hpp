#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gpquad {

/// Derives an independent child seed from a master seed and a stream index.
///
/// The splitting rule is fixed and documented so experiment runs are
/// reproducible and parallelizable: the child seed is the splitmix64
/// finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_index);

/// Seeded random source for Gaussian draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// One draw from N(0, 1).
    double normal() { return normal_(engine_); }

    /// Vector of iid N(0, 1) draws.
    Eigen::VectorXd normal_vector(Eigen::Index n) {
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            z(i) = normal_(engine_);
        }
        return z;
    }

    std::uint64_t uniform_index(std::uint64_t upper_exclusive) {
        std::uniform_int_distribution<std::uint64_t> dist(0, upper_exclusive - 1);
        return dist(engine_);
    }

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace gpquad
