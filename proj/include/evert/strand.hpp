#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evert/geometry.hpp"

namespace evert {

// One interpolation node of a strand: parameter, position and tangent
// (velocity with respect to the strand parameter, never zero).
struct StrandSample {
    double s = 0.0;
    Point2 position;
    Vec2 tangent;
};

enum class StrandKind { kClosed, kProperArc };

struct StrandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Immersed parametrized planar curve stored as cubic Hermite pieces through
// (position, tangent) samples.  Evaluation is exact at the samples, so
// regularity and turning data stated at samples survive interpolation.
class Strand {
  public:
    static constexpr double kDegenerateLength = 1e-6;

    Strand(StrandKind kind, std::vector<StrandSample> samples) : kind_(kind), samples_(std::move(samples)) {
        validate();
    }

    StrandKind kind() const { return kind_; }
    const std::vector<StrandSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

    const Point2& front_position() const { return samples_.front().position; }
    const Point2& back_position() const { return samples_.back().position; }

    // Position at parameter s in [0,1].
    Point2 position(double s) const { return eval(s).first; }

    // Tangent (d position / d s) at parameter s in [0,1].
    Vec2 tangent(double s) const { return eval(s).second; }

    // Position and tangent together.
    std::pair<Point2, Vec2> eval(double s) const {
        if (s < -1e-12 || s > 1.0 + 1e-12) throw StrandError("strand parameter out of range");
        s = std::clamp(s, 0.0, 1.0);
        std::size_t i = segment_index(s);
        const StrandSample& a = samples_[i];
        const StrandSample& b = samples_[i + 1];
        double h = b.s - a.s;
        double u = (s - a.s) / h;
        // Exact at u=0 and u=1 by construction of the Hermite basis.
        double u2 = u * u, u3 = u2 * u;
        double h00 = 2 * u3 - 3 * u2 + 1;
        double h10 = u3 - 2 * u2 + u;
        double h01 = -2 * u3 + 3 * u2;
        double h11 = u3 - u2;
        Point2 p = a.position * h00 + a.tangent * (h10 * h) + b.position * h01 + b.tangent * (h11 * h);
        double d00 = 6 * u2 - 6 * u;
        double d10 = 3 * u2 - 4 * u + 1;
        double d01 = -6 * u2 + 6 * u;
        double d11 = 3 * u2 - 2 * u;
        Vec2 t = (a.position * d00 + b.position * d01) * (1.0 / h) + a.tangent * d10 + b.tangent * d11;
        return {p, t};
    }

    // Chord-length estimate over the samples; used for the degeneracy check.
    double sample_length() const {
        double len = 0.0;
        for (std::size_t i = 0; i + 1 < samples_.size(); ++i)
            len += dist(samples_[i].position, samples_[i + 1].position);
        return len;
    }

    Strand reversed() const {
        std::vector<StrandSample> rev(samples_.rbegin(), samples_.rend());
        for (auto& smp : rev) {
            smp.s = 1.0 - smp.s;
            smp.tangent = -smp.tangent;
        }
        return Strand(kind_, std::move(rev));
    }

  private:
    void validate() {
        if (samples_.size() < 2) throw StrandError("strand needs at least two samples");
        if (std::abs(samples_.front().s) > 1e-12 || std::abs(samples_.back().s - 1.0) > 1e-12)
            throw StrandError("strand parameters must start at 0 and end at 1");
        samples_.front().s = 0.0;
        samples_.back().s = 1.0;
        for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
            if (!(samples_[i].s < samples_[i + 1].s))
                throw StrandError("strand parameters must be strictly increasing");
        }
        for (const auto& smp : samples_) {
            if (!finite(smp.position) || !std::isfinite(smp.tangent.x) || !std::isfinite(smp.tangent.y))
                throw StrandError("non-finite strand sample");
            if (smp.tangent.norm() <= 0.0) throw StrandError("zero tangent stored in strand sample");
        }
        if (sample_length() < kDegenerateLength) throw StrandError("degenerate strand (length below tolerance)");
        if (kind_ == StrandKind::kClosed) {
            if (dist(samples_.front().position, samples_.back().position) > 1e-9)
                throw StrandError("closed strand endpoints do not match");
            if ((samples_.front().tangent - samples_.back().tangent).norm() > 1e-9)
                throw StrandError("closed strand tangents do not match");
        }
    }

    std::size_t segment_index(double s) const {
        std::size_t lo = 0, hi = samples_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (samples_[mid].s <= s)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    StrandKind kind_;
    std::vector<StrandSample> samples_;
};

// Outcome of the immersion check of a single strand.
struct RegularityResult {
    bool regular = true;
    double min_speed = std::numeric_limits<double>::infinity();
    double failure_s = -1.0;  // first offending parameter when !regular
};

// Checks |strand'(s)| > eps_speed on a dense parameter grid.
inline RegularityResult regularity_certificate(const Strand& strand, double eps_speed, int grid = 2048) {
    if (eps_speed <= 0.0) throw StrandError("eps_speed must be positive");
    RegularityResult res;
    for (int i = 0; i <= grid; ++i) {
        double s = static_cast<double>(i) / grid;
        double v = strand.tangent(s).norm();
        if (v < res.min_speed) res.min_speed = v;
        if (v <= eps_speed && res.regular) {
            res.regular = false;
            res.failure_s = s;
        }
    }
    return res;
}

// Parameters where the y-component of the tangent changes sign, refined by
// bisection between grid points.
inline std::vector<double> y_critical(const Strand& strand, int grid = 2048, double tol = 1e-10) {
    std::vector<double> out;
    double prev_s = 0.0;
    double prev_v = strand.tangent(0.0).y;
    for (int i = 1; i <= grid; ++i) {
        double s = static_cast<double>(i) / grid;
        double v = strand.tangent(s).y;
        if (prev_v == 0.0 && v != 0.0 && !out.empty()) {
            // grid point exactly at a zero already recorded
        } else if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double lo = prev_s, hi = s, vlo = prev_v;
            while (hi - lo > tol) {
                double mid = 0.5 * (lo + hi);
                double vm = strand.tangent(mid).y;
                if ((vlo < 0.0) == (vm < 0.0)) {
                    lo = mid;
                    vlo = vm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev_s = s;
        prev_v = v;
    }
    return out;
}

// A finite set of strands forming one slice of the surface.
class CurveSystem {
  public:
    CurveSystem() : rectangle_(slice_rect()) {}
    explicit CurveSystem(Rect rectangle) : rectangle_(rectangle) {}
    CurveSystem(Rect rectangle, std::vector<Strand> strands) : rectangle_(rectangle) {
        for (auto& s : strands) add(std::move(s));
    }

    const Rect& rectangle() const { return rectangle_; }
    const std::vector<Strand>& strands() const { return strands_; }
    std::size_t size() const { return strands_.size(); }
    const Strand& operator[](std::size_t i) const { return strands_[i]; }

    void add(Strand strand) {
        for (const auto& smp : strand.samples()) {
            if (!rectangle_.contains(smp.position, 1e-9))
                throw StrandError("strand sample outside the slice rectangle");
        }
        strands_.push_back(std::move(strand));
    }

  private:
    Rect rectangle_;
    std::vector<Strand> strands_;
};

// Builds a strand by sampling a parametric curve at n+1 uniformly spaced
// parameters; tangents by the supplied derivative.
inline Strand sample_strand(StrandKind kind, int n, const std::function<Point2(double)>& pos,
                            const std::function<Vec2(double)>& vel) {
    std::vector<StrandSample> samples;
    samples.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double s = static_cast<double>(i) / n;
        samples.push_back({s, pos(s), vel(s)});
    }
    return Strand(kind, std::move(samples));
}

// Same, with tangents from central finite differences.
inline Strand sample_strand_fd(StrandKind kind, int n, const std::function<Point2(double)>& pos) {
    const double h = 0.5 / n;
    return sample_strand(kind, n, pos, [&pos, h](double s) {
        double a = std::max(0.0, s - h), b = std::min(1.0, s + h);
        return (pos(b) - pos(a)) * (1.0 / (b - a));
    });
}

}  // namespace evert
