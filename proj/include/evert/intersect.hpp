#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "evert/strand.hpp"

namespace evert {

// A detected k-fold point of a slice: location, the participating strand
// branches, and the radius of the crossing cluster it was merged from.
struct MultiPoint {
    Point2 location;
    int multiplicity = 2;
    std::vector<std::pair<int, double>> branches;  // (strand index, parameter)
    double cluster_radius = 0.0;
    bool tangential = false;
};

struct IntersectTolerances {
    double refine_tol = 1e-9;       // bisection tolerance for crossing location
    double cluster_radius = 1e-3;   // single-linkage merge radius
    double tangency_angle = 1e-3;   // radians; below this the crossing is flagged tangential
    int samples_per_piece = 8;      // segment subdivisions per Hermite piece
};

namespace detail {

struct RawCrossing {
    Point2 location;
    int strand_a = 0, strand_b = 0;
    double s_a = 0.0, s_b = 0.0;
    double angle = 0.0;  // absolute crossing angle
};

// Proper segment intersection (excluding shared endpoints within eps).
inline std::optional<std::pair<double, double>> segment_intersection(const Point2& p0, const Point2& p1,
                                                                     const Point2& q0, const Point2& q1) {
    Vec2 r = p1 - p0, s = q1 - q0;
    double denom = cross(r, s);
    Vec2 qp = q0 - p0;
    if (std::abs(denom) < 1e-15) return std::nullopt;
    double t = cross(qp, s) / denom;
    double u = cross(qp, r) / denom;
    if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
    return std::make_pair(std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0));
}

// Refine a crossing of two strand pieces by bisection on the separating axis.
inline RawCrossing refine_crossing(const Strand& sa, int ia, double sa_lo, double sa_hi, const Strand& sb, int ib,
                                   double sb_lo, double sb_hi, double tol) {
    // Newton-like refinement on the 2x2 system sa(s) = sb(u) starting from
    // the midpoints; falls back to the coarse solution if it stalls.
    double s = 0.5 * (sa_lo + sa_hi), u = 0.5 * (sb_lo + sb_hi);
    for (int it = 0; it < 60; ++it) {
        auto [pa, ta] = sa.eval(s);
        auto [pb, tb] = sb.eval(u);
        Vec2 f = pa - pb;
        if (f.norm() < tol) break;
        double det = cross(ta, -tb);
        if (std::abs(det) < 1e-18) break;
        // Solve [ta, -tb] [ds, du]^T = -f
        double ds = (-f.x * (-tb.y) - (-tb.x) * (-f.y)) / det;
        double du = (ta.x * (-f.y) - (-f.x) * ta.y) / det;
        s = std::clamp(s + ds, 0.0, 1.0);
        u = std::clamp(u + du, 0.0, 1.0);
    }
    auto [pa, ta] = sa.eval(s);
    auto [pb, tb] = sb.eval(u);
    RawCrossing rc;
    rc.location = (pa + pb) * 0.5;
    rc.strand_a = ia;
    rc.strand_b = ib;
    rc.s_a = s;
    rc.s_b = u;
    double c = std::abs(cross(ta.normalized(), tb.normalized()));
    rc.angle = std::asin(std::clamp(c, 0.0, 1.0));
    return rc;
}

inline void collect_polyline(const Strand& st, int samples_per_piece, std::vector<Point2>& pts,
                             std::vector<double>& params) {
    const auto& smp = st.samples();
    pts.clear();
    params.clear();
    for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
        for (int k = 0; k < samples_per_piece; ++k) {
            double s = smp[i].s + (smp[i + 1].s - smp[i].s) * (static_cast<double>(k) / samples_per_piece);
            pts.push_back(st.position(s));
            params.push_back(s);
        }
    }
    pts.push_back(st.back_position());
    params.push_back(1.0);
}

}  // namespace detail

// All pairwise transverse crossings of the system, refined to `refine_tol`
// and merged into MultiPoints by single-linkage clustering: a true k-fold
// point perturbed numerically appears as C(k,2) nearby pairwise crossings,
// and single linkage reunites them.
inline std::vector<MultiPoint> self_intersections(const CurveSystem& system,
                                                  const IntersectTolerances& tols = {}) {
    using detail::RawCrossing;
    std::vector<RawCrossing> raw;

    std::vector<std::vector<Point2>> polys(system.size());
    std::vector<std::vector<double>> parms(system.size());
    for (std::size_t i = 0; i < system.size(); ++i)
        detail::collect_polyline(system[i], tols.samples_per_piece, polys[i], parms[i]);

    // Uniform spatial binning keeps the candidate pair scan near-linear.
    struct SegRef {
        int strand;
        int seg;
    };
    const Rect rect = system.rectangle();
    const int nbx = 32, nby = 96;
    auto bin_of = [&](double x, double y) {
        int bx = std::clamp(static_cast<int>((x - rect.xmin) / rect.width() * nbx), 0, nbx - 1);
        int by = std::clamp(static_cast<int>((y - rect.ymin) / rect.height() * nby), 0, nby - 1);
        return by * nbx + bx;
    };
    std::vector<std::vector<SegRef>> bins(static_cast<std::size_t>(nbx) * nby);
    for (std::size_t i = 0; i < system.size(); ++i) {
        for (std::size_t k = 0; k + 1 < polys[i].size(); ++k) {
            const Point2& a = polys[i][k];
            const Point2& b = polys[i][k + 1];
            int b0x = std::clamp(static_cast<int>((std::min(a.x, b.x) - rect.xmin) / rect.width() * nbx), 0, nbx - 1);
            int b1x = std::clamp(static_cast<int>((std::max(a.x, b.x) - rect.xmin) / rect.width() * nbx), 0, nbx - 1);
            int b0y = std::clamp(static_cast<int>((std::min(a.y, b.y) - rect.ymin) / rect.height() * nby), 0, nby - 1);
            int b1y = std::clamp(static_cast<int>((std::max(a.y, b.y) - rect.ymin) / rect.height() * nby), 0, nby - 1);
            for (int by = b0y; by <= b1y; ++by)
                for (int bx = b0x; bx <= b1x; ++bx)
                    bins[static_cast<std::size_t>(by) * nbx + bx].push_back({static_cast<int>(i), static_cast<int>(k)});
        }
    }
    (void)bin_of;

    std::vector<std::pair<long long, long long>> seen;
    auto key_of = [&](int si, int sk) { return static_cast<long long>(si) * (1 << 24) + sk; };
    for (const auto& bin : bins) {
        for (std::size_t ii = 0; ii < bin.size(); ++ii) {
            for (std::size_t jj = ii + 1; jj < bin.size(); ++jj) {
                SegRef A = bin[ii], B = bin[jj];
                if (A.strand == B.strand) {
                    int d = std::abs(A.seg - B.seg);
                    int n = static_cast<int>(polys[A.strand].size()) - 1;
                    bool closed = system[A.strand].kind() == StrandKind::kClosed;
                    if (d <= 1) continue;
                    if (closed && d == n - 1) continue;  // wrap-adjacent
                }
                if (A.strand > B.strand || (A.strand == B.strand && A.seg > B.seg)) std::swap(A, B);
                auto hit = detail::segment_intersection(polys[A.strand][A.seg], polys[A.strand][A.seg + 1],
                                                        polys[B.strand][B.seg], polys[B.strand][B.seg + 1]);
                if (!hit) continue;
                auto key = std::make_pair(key_of(A.strand, A.seg), key_of(B.strand, B.seg));
                if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
                seen.push_back(key);
                double sa0 = parms[A.strand][A.seg], sa1 = parms[A.strand][A.seg + 1];
                double sb0 = parms[B.strand][B.seg], sb1 = parms[B.strand][B.seg + 1];
                raw.push_back(detail::refine_crossing(system[A.strand], A.strand, sa0, sa1, system[B.strand], B.strand,
                                                      sb0, sb1, tols.refine_tol));
            }
        }
    }

    // Single-linkage agglomerative clustering on crossing locations.
    std::vector<int> cluster(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) cluster[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int i) { return cluster[i] == i ? i : cluster[i] = find(cluster[i]); };
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = i + 1; j < raw.size(); ++j)
            if (dist(raw[i].location, raw[j].location) <= tols.cluster_radius)
                cluster[find(static_cast<int>(i))] = find(static_cast<int>(j));

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < raw.size(); ++i) groups[find(static_cast<int>(i))].push_back(i);

    std::vector<MultiPoint> out;
    for (const auto& [root, members] : groups) {
        MultiPoint mp;
        Point2 centroid{0, 0};
        bool tangential = false;
        for (auto m : members) {
            centroid += raw[m].location;
            if (raw[m].angle < tols.tangency_angle) tangential = true;
        }
        centroid *= 1.0 / static_cast<double>(members.size());
        mp.location = centroid;
        mp.tangential = tangential;
        // Distinct branches: same strand counts once per distinct parameter.
        for (auto m : members) {
            auto add_branch = [&](int strand, double s) {
                for (auto& br : mp.branches) {
                    if (br.first != strand) continue;
                    // Two parameters on one strand are the same branch when
                    // the curve points stay within the cluster radius.
                    if (std::abs(br.second - s) < 1e-9) return;
                    if (dist(system[strand].position(br.second), system[strand].position(s)) <=
                        2.0 * tols.cluster_radius && std::abs(br.second - s) < 0.05)
                        return;
                }
                mp.branches.push_back({strand, s});
            };
            add_branch(raw[m].strand_a, raw[m].s_a);
            add_branch(raw[m].strand_b, raw[m].s_b);
        }
        double radius = 0.0;
        for (auto m : members) radius = std::max(radius, dist(raw[m].location, centroid));
        mp.cluster_radius = radius;
        mp.multiplicity = static_cast<int>(mp.branches.size());
        std::sort(mp.branches.begin(), mp.branches.end());
        out.push_back(std::move(mp));
    }
    std::sort(out.begin(), out.end(), [](const MultiPoint& a, const MultiPoint& b) {
        if (a.location.x != b.location.x) return a.location.x < b.location.x;
        return a.location.y < b.location.y;
    });
    return out;
}

enum class Side { kLeft, kRight, kOn };

struct SideOfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Side of an oriented simple strand: sign of the cross product of the tangent
// at the nearest curve point with the offset to p.  Throws when the nearest
// point is a free arc endpoint and p lies beyond it, which would make the
// verdict depend on an arbitrary extension.
inline Side side_of(const Strand& strand, const Point2& p, double on_tol = 1e-9, int grid = 1024) {
    double best_s = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double s = static_cast<double>(i) / grid;
        double d2 = (strand.position(s) - p).norm2();
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s;
        }
    }
    // Local refinement by golden-section around the best grid point.
    double lo = std::max(0.0, best_s - 1.5 / grid), hi = std::min(1.0, best_s + 1.5 / grid);
    for (int it = 0; it < 80; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if ((strand.position(m1) - p).norm2() < (strand.position(m2) - p).norm2())
            hi = m2;
        else
            lo = m1;
    }
    best_s = 0.5 * (lo + hi);
    auto [q, t] = strand.eval(best_s);
    Vec2 offset = p - q;
    if (offset.norm() <= on_tol) return Side::kOn;
    if (strand.kind() == StrandKind::kProperArc && (best_s < 1e-9 || best_s > 1.0 - 1e-9)) {
        // p beyond the endpoint: acceptable only when the endpoint sits on the
        // rectangle boundary and p projects back onto the tangent line within
        // the collar, i.e. the arc continues virtually straight.
        if (dot(offset, t) * (best_s < 0.5 ? -1.0 : 1.0) > on_tol)
            throw SideOfError("side_of is ambiguous beyond a proper-arc endpoint; extend the arc by its boundary collar");
    }
    double c = cross(t, offset);
    if (std::abs(c) <= on_tol * t.norm()) return Side::kOn;
    return c > 0.0 ? Side::kLeft : Side::kRight;
}

}  // namespace evert
