#pragma once

// Minimal SVG 1.1 time-series plots: one polyline per file, axes box,
// min/max labels. Good enough to eyeball a trajectory.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fintime/errors.hpp"
#include "fintime/linalg.hpp"

namespace fintime {

inline void write_timeseries_svg(std::ostream& os, const Vec& times, const Vec& values,
                                 const std::string& title) {
    if (times.size() != values.size() || times.empty())
        throw ValidationError("write_timeseries_svg: times/values mismatch or empty");
    const double w = 800.0, h = 400.0, ml = 70.0, mr = 20.0, mt = 30.0, mb = 40.0;
    const double t0 = times.front(), t1 = times.back();
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) {
        hi += 1.0;
        lo -= 1.0;
    }
    const double span_t = t1 > t0 ? t1 - t0 : 1.0;
    const auto px = [&](double t) { return ml + (t - t0) / span_t * (w - ml - mr); };
    const auto py = [&](double v) { return h - mb - (v - lo) / (hi - lo) * (h - mt - mb); };

    char num[64];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "  <rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (w - ml - mr)
       << "\" height=\"" << (h - mt - mb)
       << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "  <text x=\"" << ml << "\" y=\"20\" font-family=\"monospace\" font-size=\"14\">"
       << title << "</text>\n";
    std::snprintf(num, sizeof num, "%.6g", lo);
    os << "  <text x=\"4\" y=\"" << py(lo) << "\" font-family=\"monospace\" font-size=\"11\">"
       << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.6g", hi);
    os << "  <text x=\"4\" y=\"" << py(hi) + 10.0
       << "\" font-family=\"monospace\" font-size=\"11\">" << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.6g", t0);
    os << "  <text x=\"" << px(t0) << "\" y=\"" << h - 10.0
       << "\" font-family=\"monospace\" font-size=\"11\">t=" << num << "</text>\n";
    std::snprintf(num, sizeof num, "%.6g", t1);
    os << "  <text x=\"" << px(t1) - 60.0 << "\" y=\"" << h - 10.0
       << "\" font-family=\"monospace\" font-size=\"11\">t=" << num << "</text>\n";
    if (lo < 0.0 && hi > 0.0)
        os << "  <line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << (w - mr)
           << "\" y2=\"" << py(0.0) << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

    os << "  <polyline fill=\"none\" stroke=\"#0057b7\" stroke-width=\"1.5\" points=\"";
    // cap the polyline at ~4000 vertices to keep files small
    const std::size_t stride = std::max<std::size_t>(1, times.size() / 4000);
    for (std::size_t i = 0; i < times.size(); i += stride) {
        std::snprintf(num, sizeof num, "%.2f,%.2f ", px(times[i]), py(values[i]));
        os << num;
    }
    std::snprintf(num, sizeof num, "%.2f,%.2f", px(times.back()), py(values.back()));
    os << num << "\"/>\n</svg>\n";
}

}  // namespace fintime
