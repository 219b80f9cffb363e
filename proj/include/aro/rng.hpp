#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>

namespace aro {

// Counter-based seeded RNG with named substreams. Derivation is pure
// (splitmix64 over a hash of the stream name), so adding draws to one
// stream never perturbs another.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(splitmix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

    // Derive an independent child stream from a name and optional index.
    RngStream substream(std::string_view name, std::uint64_t index = 0) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    // Standard normal (Box-Muller, spare cached).
    double normal();

    // Gamma(shape, 1) via Marsaglia-Tsang; boost trick for shape < 1.
    double gamma(double shape);

    Eigen::VectorXd normal_vector(Eigen::Index n);

    // Uniform on the interior of the L2 ball of given radius.
    Eigen::VectorXd uniform_ball(Eigen::Index dim, double radius);

private:
    static std::uint64_t splitmix(std::uint64_t x);

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace aro
