#include "climbprint/mesh_obj.hpp"

#include <cstdio>

namespace climbprint {

std::string export_obj(const PrintedStructure& structure) {
    bool any = false;
    for (const BeadSegment& seg : structure.beads) {
        if (seg.s_m.size() >= 2) any = true;
    }
    if (!any) {
        throw Error(ErrorCode::EmptyStructure, "no deposited material to export");
    }

    std::string out;
    out.reserve(1 << 20);
    char buf[160];
    auto vertex = [&](Vec2 xy, double z) {
        std::snprintf(buf, sizeof(buf), "v %.9f %.9f %.9f\n", xy.x, xy.y, z);
        out += buf;
    };
    // Faces are emitted counterclockwise seen from outside the bead, the
    // usual outward-normal convention.
    auto tri = [&](long a, long b, long c) {
        std::snprintf(buf, sizeof(buf), "f %ld %ld %ld\n", a, c, b);
        out += buf;
    };
    auto quad = [&](long a, long b, long c, long d) {
        tri(a, b, c);
        tri(a, c, d);
    };

    long base = 1;  // OBJ indices are 1-based
    for (const BeadSegment& seg : structure.beads) {
        std::size_t m = seg.s_m.size();
        if (m < 2) continue;
        // Ring per sample: [left-bottom, right-bottom, right-top, left-top],
        // a consistent loop around the cross-section. A centerline offset by
        // u is shorter or longer than the base path by (1 - u * curvature),
        // and the nozzle slows by the same factor, so the bead widens by the
        // inverse; modeling that keeps the mesh volume equal to the
        // extruded volume.
        double along = 0.0;
        Vec2 prev_center{};
        for (std::size_t i = 0; i < m; ++i) {
            PathSample ps = point_at(structure.path, seg.s_m[i]);
            Vec2 n = ps.tangent.rot90();
            Vec2 center = ps.position + seg.u_m[i] * n;
            double squeeze = 1.0 - seg.u_m[i] * ps.curvature;  // > 0: offsets
            // past the curvature radius cannot be deposited
            double w = seg.width_m / squeeze;
            Vec2 left = center + (w / 2.0) * n;
            Vec2 right = center - (w / 2.0) * n;
            double z_top = seg.z_m[i];
            double z_bot = z_top - seg.height_m;
            vertex(left, z_bot);
            vertex(right, z_bot);
            vertex(right, z_top);
            vertex(left, z_top);
            if (i > 0) along += (center - prev_center).dot(ps.tangent);
            prev_center = center;
        }
        // Beads deposited toward decreasing arclength sweep their rings
        // backwards; flip the face winding so the surface stays outward.
        bool reversed = along < 0.0;
        auto oriented_quad = [&](long a, long b, long c, long d) {
            if (reversed) {
                quad(d, c, b, a);
            } else {
                quad(a, b, c, d);
            }
        };
        for (std::size_t i = 0; i + 1 < m; ++i) {
            long r0 = base + static_cast<long>(4 * i);
            long r1 = r0 + 4;
            for (int j = 0; j < 4; ++j) {
                int jn = (j + 1) % 4;
                oriented_quad(r0 + j, r0 + jn, r1 + jn, r1 + j);
            }
        }
        long first = base;
        long last = base + static_cast<long>(4 * (m - 1));
        oriented_quad(first + 3, first + 2, first + 1, first + 0);  // start cap
        oriented_quad(last + 0, last + 1, last + 2, last + 3);      // end cap
        base += static_cast<long>(4 * m);
    }
    return out;
}

}  // namespace climbprint
