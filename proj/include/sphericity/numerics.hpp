#pragma once

#include <Eigen/Core>

#include <array>

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace sphericity {

// Weights of the Lagrange interpolant (deriv = 0) or of its derivative
// (deriv = 1) at z, for the given nodes.
template <std::size_t N>
std::array<double, N> lagrange_weights(const std::array<double, N>& nodes, double z, int deriv) {
    std::array<double, N> w{};
    for (std::size_t k = 0; k < N; ++k) {
        if (deriv == 0) {
            double l = 1.0;
            for (std::size_t m = 0; m < N; ++m)
                if (m != k) l *= (z - nodes[m]) / (nodes[k] - nodes[m]);
            w[k] = l;
        } else {
            double sum = 0.0;
            for (std::size_t m = 0; m < N; ++m) {
                if (m == k) continue;
                double term = 1.0 / (nodes[k] - nodes[m]);
                for (std::size_t l = 0; l < N; ++l)
                    if (l != k && l != m) term *= (z - nodes[l]) / (nodes[k] - nodes[l]);
                sum += term;
            }
            w[k] = sum;
        }
    }
    return w;
}

struct Extremum {
    double x;
    double value;
};

// Golden-section search on [lo, hi] for a unimodal function; stops when the
// bracket is narrower than `tol`.
Extremum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                            double tol = 1e-12, int max_iter = 200);
Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                            double tol = 1e-12, int max_iter = 200);

struct SimplexResult {
    Eigen::Vector2d x;
    double value;
    int iterations;
};

// Nelder-Mead (GSL nmsimplex2) minimisation of a function of two variables.
SimplexResult nelder_mead_min(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Eigen::Vector2d& start, double step, double size_tol = 1e-11,
                              int max_iter = 2000);

// mt19937_64 with a portable double conversion, so seeded streams agree
// across standard libraries (std::uniform_real_distribution does not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

private:
    std::mt19937_64 engine_;
};

// Decimal rendering with `digits` significant digits ("%.17g" style).
std::string format_number(double v, int digits = 17);

}  // namespace sphericity
