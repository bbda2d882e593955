#pragma once

// Seedable random stream with hand-built transforms. The standard library's
// distribution objects are implementation-defined, so identical seeds would
// not give identical streams across platforms; everything here is built from
// the mt19937_64 engine (which IS pinned by the standard) and elementary
// operations, making runs bit-reproducible anywhere.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace conflev {

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static constexpr const char* algorithm() { return "mt19937_64+box-muller"; }

    // Uniform on (0,1): 53 random bits centered in the cell, never 0 or 1.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double theta = 2.0 * 3.141592653589793238462643 * uniform01();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Chi-square as a sum of squared standard normals.
    double chi_square(int df) {
        if (df < 1) throw std::domain_error("chi_square: df must be a positive integer");
        double s = 0.0;
        for (int i = 0; i < df; ++i) {
            const double z = normal();
            s += z * z;
        }
        return s;
    }

    // Student-t via the ratio construction.
    double student_t(int df) {
        return normal() / std::sqrt(chi_square(df) / static_cast<double>(df));
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace conflev
