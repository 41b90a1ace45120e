#include "climbprint/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

namespace climbprint {
namespace {

constexpr double kDuplicateTol = 1e-12;
constexpr double kIntersectTol = 1e-9;

std::string format_point(Vec2 p) {
    std::ostringstream os;
    os << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

// One primitive of the blended centerline: a straight segment or a circular
// arc. Arcs store the signed sweep direction; local arclength runs 0..length.
struct Piece {
    bool is_arc = false;
    Vec2 a;             // line start
    Vec2 dir;           // line unit direction
    Vec2 center;        // arc center
    double radius = 0.0;
    double ang0 = 0.0;  // arc start angle
    double sweep_sign = 1.0;
    double length = 0.0;
    double s0 = 0.0;    // cumulative arclength at piece start
};

struct PieceEval {
    Vec2 position;
    Vec2 tangent;
    double curvature;
};

PieceEval eval_piece(const Piece& p, double local_s) {
    if (!p.is_arc) {
        return {p.a + local_s * p.dir, p.dir, 0.0};
    }
    double phi = p.ang0 + p.sweep_sign * local_s / p.radius;
    Vec2 radial{std::cos(phi), std::sin(phi)};
    Vec2 pos = p.center + p.radius * radial;
    Vec2 tan = p.sweep_sign * radial.rot90();
    return {pos, tan, p.sweep_sign / p.radius};
}

double min_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    Vec2 u = a1 - a0;
    Vec2 v = b1 - b0;
    Vec2 w = a0 - b0;
    double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v);
    double uw = u.dot(w), vw = v.dot(w);
    double denom = uu * vv - uv * uv;
    double s, t;
    if (denom > 1e-30) {
        s = std::clamp((uv * vw - vv * uw) / denom, 0.0, 1.0);
    } else {
        s = 0.0;  // near-parallel: fall back to endpoint projections
    }
    t = vv > 1e-30 ? std::clamp((uv * s + vw) / vv, 0.0, 1.0) : 0.0;
    s = uu > 1e-30 ? std::clamp((uv * t - uw) / uu, 0.0, 1.0) : 0.0;
    Vec2 pa = a0 + s * u;
    Vec2 pb = b0 + t * v;
    double best = (pa - pb).norm();
    // Clamped projections can miss the true minimum for crossing segments, so
    // also test proper intersection directly.
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
    double o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
    double o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;
    return best;
}

// Uniform grid over segment bounding boxes; candidate pairs share a cell.
void check_self_intersection(const std::vector<Vec2>& pts, bool closed) {
    std::size_t n_seg = closed ? pts.size() : pts.size() - 1;
    if (n_seg < 2) return;
    double max_len = 0.0;
    for (std::size_t i = 0; i < n_seg; ++i) {
        max_len = std::max(max_len, (pts[(i + 1) % pts.size()] - pts[i]).norm());
    }
    double cell = std::max(max_len, 1e-9);
    auto key = [](std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^
               (static_cast<std::uint64_t>(cy) & 0xffffffffull);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    grid.reserve(n_seg * 2);

    auto adjacent = [&](std::size_t i, std::size_t j) {
        if (j - i == 1) return true;
        return closed && i == 0 && j == n_seg - 1;
    };

    for (std::size_t j = 0; j < n_seg; ++j) {
        Vec2 a = pts[j];
        Vec2 b = pts[(j + 1) % pts.size()];
        double x0 = std::min(a.x, b.x) - kIntersectTol;
        double x1 = std::max(a.x, b.x) + kIntersectTol;
        double y0 = std::min(a.y, b.y) - kIntersectTol;
        double y1 = std::max(a.y, b.y) + kIntersectTol;
        auto cx0 = static_cast<std::int64_t>(std::floor(x0 / cell));
        auto cx1 = static_cast<std::int64_t>(std::floor(x1 / cell));
        auto cy0 = static_cast<std::int64_t>(std::floor(y0 / cell));
        auto cy1 = static_cast<std::int64_t>(std::floor(y1 / cell));
        std::vector<std::size_t> seen;
        for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
            for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
                auto& bucket = grid[key(cx, cy)];
                for (std::size_t i : bucket) {
                    if (adjacent(std::min(i, j), std::max(i, j))) continue;
                    if (std::find(seen.begin(), seen.end(), i) != seen.end()) continue;
                    seen.push_back(i);
                    Vec2 c = pts[i];
                    Vec2 d = pts[(i + 1) % pts.size()];
                    if (min_segment_distance(a, b, c, d) < kIntersectTol) {
                        std::ostringstream os;
                        os << "segments " << i << " and " << j
                           << " intersect near " << format_point(a);
                        throw Error(ErrorCode::SelfIntersection, os.str());
                    }
                }
                bucket.push_back(j);
            }
        }
    }
}

std::vector<Vec2> dedup_points(const PathSpec& spec) {
    std::vector<Vec2> pts;
    pts.reserve(spec.points.size());
    for (Vec2 p : spec.points) {
        if (pts.empty() || (p - pts.back()).norm() > kDuplicateTol) pts.push_back(p);
    }
    if (spec.closed && pts.size() > 1 &&
        (pts.front() - pts.back()).norm() <= kDuplicateTol) {
        pts.pop_back();
    }
    return pts;
}

std::vector<Piece> build_pieces(const std::vector<Vec2>& pts, bool closed) {
    std::size_t n = pts.size();
    std::size_t n_edges = closed ? n : n - 1;

    std::vector<double> edge_len(n_edges);
    std::vector<Vec2> edge_dir(n_edges);
    for (std::size_t j = 0; j < n_edges; ++j) {
        Vec2 d = pts[(j + 1) % n] - pts[j];
        edge_len[j] = d.norm();
        edge_dir[j] = d * (1.0 / edge_len[j]);
    }

    // Blend parameters per vertex: trim distance T and signed turn angle.
    // T = min adjacent half-edge, so trims on a shared edge never overlap.
    std::vector<double> trim(n, 0.0), turn(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        bool interior = closed || (v > 0 && v + 1 < n);
        if (!interior) continue;
        std::size_t e_in = closed ? (v + n_edges - 1) % n_edges : v - 1;
        std::size_t e_out = closed ? v : v;
        Vec2 u = edge_dir[e_in];
        Vec2 w = edge_dir[e_out];
        double ang = std::atan2(u.cross(w), u.dot(w));
        if (std::abs(ang) < 1e-12 || std::abs(ang) > kSmoothTurnMaxRad) continue;
        turn[v] = ang;
        trim[v] = 0.5 * std::min(edge_len[e_in], edge_len[e_out]);
    }

    auto arc_at = [&](std::size_t v, std::size_t e_in) {
        Piece p;
        p.is_arc = true;
        p.radius = trim[v] / std::tan(std::abs(turn[v]) / 2.0);
        p.sweep_sign = turn[v] > 0 ? 1.0 : -1.0;
        Vec2 start = pts[v] - trim[v] * edge_dir[e_in];
        p.center = start + p.sweep_sign * p.radius * edge_dir[e_in].rot90();
        Vec2 radial = start - p.center;
        p.ang0 = std::atan2(radial.y, radial.x);
        p.length = p.radius * std::abs(turn[v]);
        return p;
    };

    std::vector<Piece> pieces;
    pieces.reserve(2 * n_edges);
    for (std::size_t j = 0; j < n_edges; ++j) {
        std::size_t v0 = j;
        std::size_t v1 = (j + 1) % n;
        Vec2 a = pts[v0] + trim[v0] * edge_dir[j];
        Vec2 b = pts[v1] - trim[v1] * edge_dir[j];
        double len = (b - a).norm();
        if (len > kDuplicateTol) {
            Piece p;
            p.a = a;
            p.dir = edge_dir[j];
            p.length = len;
            pieces.push_back(p);
        }
        if (trim[v1] > 0.0) pieces.push_back(arc_at(v1, j));
    }
    // Closed paths place the vertex-0 blend after the last edge; open paths
    // never blend endpoints, so nothing remains either way.
    double s = 0.0;
    for (Piece& p : pieces) {
        p.s0 = s;
        s += p.length;
    }
    return pieces;
}

PieceEval eval_at(const std::vector<Piece>& pieces, double total, double s) {
    s = std::clamp(s, 0.0, total);
    std::size_t lo = 0, hi = pieces.size();
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (pieces[mid].s0 <= s) lo = mid;
        else hi = mid;
    }
    return eval_piece(pieces[lo], s - pieces[lo].s0);
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "piecewise-linear profile needs at least one knot");
    }
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i].first > knots_[i - 1].first)) {
            std::ostringstream os;
            os << "profile knots must be strictly increasing in s, got "
               << knots_[i - 1].first << " then " << knots_[i].first;
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
    }
}

double PiecewiseLinear::operator()(double s) const {
    if (s <= knots_.front().first) return knots_.front().second;
    if (s >= knots_.back().first) return knots_.back().second;
    auto it = std::upper_bound(
        knots_.begin(), knots_.end(), s,
        [](double v, const std::pair<double, double>& k) { return v < k.first; });
    auto [s1, v1] = *it;
    auto [s0, v0] = *(it - 1);
    double t = (s - s0) / (s1 - s0);
    return v0 + t * (v1 - v0);
}

double PiecewiseLinear::min_value() const {
    double m = knots_.front().second;
    for (auto& [s, v] : knots_) m = std::min(m, v);
    return m;
}

double PiecewiseLinear::max_value() const {
    double m = knots_.front().second;
    for (auto& [s, v] : knots_) m = std::max(m, v);
    return m;
}

ArcLengthPath resample(const PathSpec& spec, double step_m) {
    if (!(step_m > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "resample step must be positive");
    }
    std::vector<Vec2> pts = dedup_points(spec);
    std::size_t min_pts = spec.closed ? 3 : 2;
    if (pts.size() < min_pts) {
        std::ostringstream os;
        os << "path has " << pts.size() << " distinct points, needs at least " << min_pts;
        throw Error(ErrorCode::DegeneratePath, os.str());
    }
    check_self_intersection(pts, spec.closed);

    std::vector<Piece> pieces = build_pieces(pts, spec.closed);
    double total = pieces.back().s0 + pieces.back().length;
    if (!(total > kDuplicateTol)) {
        throw Error(ErrorCode::DegeneratePath, "path has zero length");
    }

    auto n_intervals = std::max<std::size_t>(4, std::llround(total / step_m));
    double ds = total / double(n_intervals);
    std::size_t n_samples = n_intervals + 1;

    std::vector<PathSample> samples(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double s = std::min(double(i) * ds, total);
        PieceEval e = eval_at(pieces, total, s);
        samples[i].s = s;
        samples[i].position = e.position;
        samples[i].tangent = e.tangent;
    }
    if (spec.closed) {
        samples.back().position = samples.front().position;
        samples.back().tangent = samples.front().tangent;
    }

    // Curvature from the circumscribed circle of consecutive sample triples.
    // On arc-blend output the samples lie exactly on the primitive, so this
    // recovers the piece curvature away from primitive joins.
    std::size_t ring = spec.closed ? n_intervals : n_samples;
    for (std::size_t i = 0; i < ring; ++i) {
        double k;
        if (spec.closed) {
            k = circumcircle_curvature(samples[(i + ring - 1) % ring].position,
                                       samples[i].position,
                                       samples[(i + 1) % ring].position);
        } else if (i == 0 || i + 1 == ring) {
            continue;  // endpoints copy their neighbor below
        } else {
            k = circumcircle_curvature(samples[i - 1].position, samples[i].position,
                                       samples[i + 1].position);
        }
        samples[i].curvature = k;
    }
    if (spec.closed) {
        samples.back().curvature = samples.front().curvature;
    } else {
        samples.front().curvature = samples[1].curvature;
        samples.back().curvature = samples[n_samples - 2].curvature;
    }
    return ArcLengthPath(std::move(samples), total, spec.closed);
}

PathSample point_at(const ArcLengthPath& path, double s_m) {
    const auto& samples = path.samples();
    if (samples.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "path has no samples");
    }
    double total = path.total_length();
    double s = s_m;
    if (path.closed()) {
        s = std::fmod(s, total);
        if (s < 0.0) s += total;
    } else {
        if (s < -1e-9 || s > total + 1e-9) {
            std::ostringstream os;
            os << "arclength " << s << " outside [0, " << total << "]";
            throw Error(ErrorCode::OutOfRange, os.str());
        }
        s = std::clamp(s, 0.0, total);
    }
    double ds = path.step();
    auto idx = std::min<std::size_t>(static_cast<std::size_t>(s / ds), samples.size() - 2);
    const PathSample& a = samples[idx];
    const PathSample& b = samples[idx + 1];
    double t = (s - a.s) / (b.s - a.s);
    PathSample out;
    out.s = s;
    out.position = a.position + t * (b.position - a.position);
    Vec2 tan = a.tangent + t * (b.tangent - a.tangent);
    out.tangent = tan.norm() > 1e-12 ? tan.normalized() : a.tangent;
    out.curvature = a.curvature + t * (b.curvature - a.curvature);
    return out;
}

Vec2 offset_point(const ArcLengthPath& path, double s_m, double offset_m) {
    PathSample p = point_at(path, s_m);
    if (std::abs(offset_m * p.curvature) >= 1.0) {
        std::ostringstream os;
        os << "offset " << offset_m << " reaches the curvature radius "
           << 1.0 / std::abs(p.curvature) << " at s=" << p.s;
        throw Error(ErrorCode::OffsetExceedsCurvatureRadius, os.str());
    }
    return p.position + offset_m * p.tangent.rot90();
}

double chord_sagitta(double curvature, double chord_m) {
    if (chord_m < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "chord length must be non-negative");
    }
    double k = std::abs(curvature);
    double half = chord_m / 2.0;
    if (k * half == 0.0) return 0.0;
    if (k * half >= 1.0) {
        std::ostringstream os;
        os << "chord " << chord_m << " cannot be inscribed in a circle of radius "
           << 1.0 / k;
        throw Error(ErrorCode::ChordExceedsDiameter, os.str());
    }
    double radius = 1.0 / k;
    // Stable form of R - sqrt(R^2 - h^2); exact at half == R.
    return half * half / (radius + std::sqrt((radius - half) * (radius + half)));
}

double circumcircle_curvature(Vec2 a, Vec2 b, Vec2 c) {
    Vec2 ab = b - a;
    Vec2 ac = c - a;
    Vec2 bc = c - b;
    double denom = ab.norm() * ac.norm() * bc.norm();
    if (denom < 1e-300) return 0.0;
    return 2.0 * ab.cross(ac) / denom;
}

}  // namespace climbprint
