#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "climbprint/errors.hpp"

namespace climbprint {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // Left normal: tangent rotated +90 degrees (counterclockwise).
    Vec2 rot90() const { return {-y, x}; }
};

inline Vec2 operator*(double k, Vec2 v) { return {v.x * k, v.y * k}; }

// Piecewise-linear function of arclength, clamped to the end values outside
// the breakpoint span. Breakpoints must be strictly increasing in s.
class PiecewiseLinear {
public:
    PiecewiseLinear() : PiecewiseLinear(0.0) {}
    explicit PiecewiseLinear(double constant_value)
        : knots_{{0.0, constant_value}} {}
    explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

    double operator()(double s) const;
    double min_value() const;
    double max_value() const;
    bool is_constant() const { return knots_.size() == 1; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;  // (s, value), s strictly increasing
};

// Wall footprint centerline as authored: a planar polyline plus the wall
// thickness and the terrain profile (top of existing structure) along it.
struct PathSpec {
    std::vector<Vec2> points;
    bool closed = false;
    double thickness_m = 0.0;
    PiecewiseLinear top_height_m{0.0};
};

struct PathSample {
    double s = 0.0;        // arclength from the start
    Vec2 position;
    Vec2 tangent;          // unit, in travel direction
    double curvature = 0.0;  // signed, positive turning left
};

// Arclength-resampled path. Samples are uniformly spaced in s; closed paths
// carry a duplicated first sample at s = total_length so consumers can index
// [s_i, s_i+1] brackets without wrapping.
class ArcLengthPath {
public:
    ArcLengthPath() = default;
    ArcLengthPath(std::vector<PathSample> samples, double total_length, bool closed)
        : samples_(std::move(samples)), total_length_(total_length), closed_(closed) {}

    const std::vector<PathSample>& samples() const { return samples_; }
    double total_length() const { return total_length_; }
    bool closed() const { return closed_; }
    double step() const {
        return samples_.size() > 1 ? total_length_ / double(samples_.size() - 1) : 0.0;
    }
    // Count of distinct sample positions (excludes the duplicated closing sample).
    std::size_t ring_size() const {
        return closed_ && !samples_.empty() ? samples_.size() - 1 : samples_.size();
    }

private:
    std::vector<PathSample> samples_;
    double total_length_ = 0.0;
    bool closed_ = false;
};

// Resamples the polyline at uniform arclength spacing. Before sampling,
// vertices whose turn angle is at most smooth_turn_max_rad are replaced by
// tangent circular arc blends so that curvature estimates on smooth input
// converge to the underlying curve instead of the polygonization; sharper
// vertices are kept as exact corners and the total length is unchanged there.
//
// The sample count is max(4, lround(length / step)) intervals. Throws
// DegeneratePath (fewer than 2 distinct points, or zero length) and
// SelfIntersection (non-adjacent input segments closer than 1e-9).
ArcLengthPath resample(const PathSpec& spec, double step_m);

constexpr double kSmoothTurnMaxRad = 0.35;

// Interpolated sample at arclength s. Closed paths wrap s modulo the total
// length; open paths throw OutOfRange beyond [0, length] (1e-9 slack).
PathSample point_at(const ArcLengthPath& path, double s_m);

// Point at signed lateral offset d along the left normal at arclength s.
// Throws OffsetExceedsCurvatureRadius when |d * curvature| >= 1, where the
// offset curve degenerates.
Vec2 offset_point(const ArcLengthPath& path, double s_m, double offset_m);

// Maximum deviation between a circular arc of the given curvature and its
// chord: R - sqrt(R^2 - (c/2)^2). Returns the unsigned magnitude; even in the
// curvature sign, zero for straight lines. Throws ChordExceedsDiameter when
// the chord cannot be inscribed (|curvature| * chord / 2 >= 1) and
// InvalidArgument for a negative chord.
double chord_sagitta(double curvature, double chord_m);

// Signed curvature of the circumscribed circle through three points,
// positive when a->b->c turns left. Collinear points give zero.
double circumcircle_curvature(Vec2 a, Vec2 b, Vec2 c);

}  // namespace climbprint
