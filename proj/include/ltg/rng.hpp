#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ltg {

/// Quantile function of the standard normal distribution (Acklam's
/// rational approximation, ~1e-9 relative accuracy on (0, 1)).
double inverse_normal_cdf(double p);

/// Counter-based random stream: every draw is a pure hash of
/// (seed, stream, counter). Derived substreams are statistically
/// independent, cheap to create, and replay exactly, which keeps
/// parallel Monte Carlo fan-outs deterministic regardless of
/// scheduling order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

    /// Independent stream derived from this one's identity.
    RandomStream substream(std::uint64_t id) const { return RandomStream(key_, id + 1); }

    /// Uniform draw in [0, 1) with 53 significant bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard Gaussian draw via the inverse CDF.
    double normal() { return inverse_normal_cdf(0x1.0p-54 + static_cast<double>(next() >> 11) * 0x1.0p-53); }

    Eigen::Vector3d normal3() {
        Eigen::Vector3d v;
        v << normal(), normal(), normal();
        return v;
    }

    /// Uniform direction on the unit sphere (normalized Gaussian triple).
    Eigen::Vector3d unit_vector() {
        for (;;) {
            const Eigen::Vector3d v = normal3();
            const double n = v.norm();
            if (n > 1e-8) return v / n;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next() { return mix(key_ ^ mix(counter_++)); }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ltg
