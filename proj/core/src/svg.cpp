#include "climbprint/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace climbprint {

std::string layer_svg(const PrintedStructure& structure, int layer) {
    struct Stroke {
        std::vector<Vec2> pts;
        double width_mm;
    };
    std::vector<Stroke> strokes;
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool first = true;
    for (const BeadSegment& seg : structure.beads) {
        if (seg.layer != layer || seg.s_m.size() < 2) continue;
        Stroke st;
        st.width_mm = seg.width_m * 1000.0;
        st.pts.reserve(seg.s_m.size());
        for (std::size_t i = 0; i < seg.s_m.size(); ++i) {
            PathSample ps = point_at(structure.path, seg.s_m[i]);
            Vec2 p = ps.position + seg.u_m[i] * ps.tangent.rot90();
            st.pts.push_back(p);
            if (first) {
                min_x = max_x = p.x;
                min_y = max_y = p.y;
                first = false;
            } else {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
        }
        strokes.push_back(std::move(st));
    }

    double pad_mm = 10.0;
    double w_mm = (max_x - min_x) * 1000.0 + 2.0 * pad_mm;
    double h_mm = (max_y - min_y) * 1000.0 + 2.0 * pad_mm;

    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" "
                  "viewBox=\"0 0 %.3f %.3f\" width=\"%.3fmm\" height=\"%.3fmm\">\n",
                  w_mm, h_mm, w_mm, h_mm);
    out += buf;
    std::snprintf(buf, sizeof(buf), "<!-- layer %d, millimeters -->\n", layer);
    out += buf;
    for (const Stroke& st : strokes) {
        out += "<polyline fill=\"none\" stroke=\"#1f2430\" stroke-linecap=\"round\" "
               "stroke-linejoin=\"round\" stroke-width=\"";
        std::snprintf(buf, sizeof(buf), "%.3f", st.width_mm);
        out += buf;
        out += "\" points=\"";
        for (std::size_t i = 0; i < st.pts.size(); ++i) {
            double x = (st.pts[i].x - min_x) * 1000.0 + pad_mm;
            double y = (max_y - st.pts[i].y) * 1000.0 + pad_mm;
            std::snprintf(buf, sizeof(buf), i == 0 ? "%.3f,%.3f" : " %.3f,%.3f", x, y);
            out += buf;
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace climbprint
