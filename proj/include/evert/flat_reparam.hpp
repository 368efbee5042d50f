#pragma once

#include <cmath>
#include <stdexcept>

#include "evert/geometry.hpp"

namespace evert {

// Smoothing of the z-variable at a zone junction level i: a strictly
// increasing C-infinity map that is the identity away from i, fixes i, and
// has all derivatives vanishing at i.  Substituting f(z) for z makes the
// pieced-together family flat across the junction, so mismatched z-derivatives
// of adjacent zone builders cannot produce a crease.
//
// Construction: f(z) = i + h(z - i) with h(u) = u * phi(u), where phi ramps
// from exp(-1/u^2) (flat at 0) to 1 (identity) across the smoothing width.
class FlatReparam {
  public:
    FlatReparam(double junction, double width) : junction_(junction), width_(width) {
        if (width <= 0.0) throw std::invalid_argument("flat_reparam width must be positive");
        // Monotonicity of the chosen blend is validated numerically once at
        // construction; the blend has no closed-form monotonicity proof.
        double prev = apply(junction_ - width_ * 1.5);
        for (int k = 1; k <= 4096; ++k) {
            double z = junction_ - width_ * 1.5 + 3.0 * width_ * static_cast<double>(k) / 4096.0;
            double v = apply(z);
            if (!(v > prev)) throw std::logic_error("flat_reparam blend is not strictly increasing");
            prev = v;
        }
    }

    double junction() const { return junction_; }
    double width() const { return width_; }

    double apply(double z) const {
        double u = z - junction_;
        if (std::abs(u) >= width_) return z;
        return junction_ + u * phi(u);
    }

  private:
    double phi(double u) const {
        double a = std::abs(u) / width_;  // in [0,1)
        // Flat core on |u| <= width/2, blended to identity at |u| = width.
        double core = std::exp(-1.0 / (u * u / (width_ * width_)));  // exp(-width^2/u^2) scaled
        if (a >= 1.0) return 1.0;
        double w = smoothstep((a - 0.5) / 0.5);  // 0 on the core, 1 at the edge
        return core * (1.0 - w) + w;
    }

    double junction_;
    double width_;
};

// Convenience form matching the operation signature: strictly increasing,
// identity for |z-junction| >= width, value junction at z=junction, flat there.
double flat_reparam(double z, double junction, double width);

}  // namespace evert

#include <map>
#include <mutex>

namespace evert {

inline double flat_reparam(double z, double junction, double width) {
    static std::map<std::pair<double, double>, FlatReparam> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(junction, width);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, FlatReparam(junction, width)).first;
    return it->second.apply(z);
}

}  // namespace evert
