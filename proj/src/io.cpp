#include "acsf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acsf/errors.hpp"

namespace acsf::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create directory '" + path + "': " + ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

void write_curve_csv(const std::string& path, const geom::DiscreteCurve& curve) {
    std::ofstream out = open_out(path);
    out << "rho,x1,x2\n";
    for (int j = 0; j < curve.size(); ++j) {
        out << format_double(curve.mesh.node(j)) << ',' << format_double(curve.positions[j].x)
            << ',' << format_double(curve.positions[j].y) << '\n';
    }
}

void write_points_csv(const std::string& path, const std::vector<Vec2>& points) {
    std::ofstream out = open_out(path);
    out << "x1,x2\n";
    for (const Vec2& p : points)
        out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_points3_csv(const std::string& path,
                       const std::vector<std::array<double, 3>>& points) {
    std::ofstream out = open_out(path);
    out << "x1,x2,x3\n";
    for (const auto& p : points)
        out << format_double(p[0]) << ',' << format_double(p[1]) << ','
            << format_double(p[2]) << '\n';
}

void write_svg(const std::string& path, const std::vector<std::vector<Vec2>>& polylines,
               std::optional<ViewBox> viewbox) {
    ViewBox vb;
    if (viewbox) {
        vb = *viewbox;
    } else {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& poly : polylines) {
            for (const Vec2& p : poly) {
                xmin = std::min(xmin, p.x);
                xmax = std::max(xmax, p.x);
                ymin = std::min(ymin, p.y);
                ymax = std::max(ymax, p.y);
            }
        }
        if (xmax < xmin) { xmin = ymin = 0.0; xmax = ymax = 1.0; }
        const double margin = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1e-12;
        vb = {xmin - margin, ymin - margin, (xmax - xmin) + 2 * margin,
              (ymax - ymin) + 2 * margin};
    }

    std::ofstream out = open_out(path);
    const double stroke = 0.004 * std::max(vb.width, vb.height);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
        << "viewBox=\"" << format_double(vb.xmin) << ' ' << format_double(vb.ymin) << ' '
        << format_double(vb.width) << ' ' << format_double(vb.height) << "\">\n";
    // SVG y grows downward; flip around the viewbox center line.
    out << "  <g transform=\"translate(0," << format_double(2.0 * vb.ymin + vb.height)
        << ") scale(1,-1)\">\n";
    for (const auto& poly : polylines) {
        out << "    <polygon fill=\"none\" stroke=\"black\" stroke-width=\""
            << format_double(stroke) << "\" points=\"";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (i) out << ' ';
            out << format_double(poly[i].x) << ',' << format_double(poly[i].y);
        }
        out << "\"/>\n";
    }
    out << "  </g>\n</svg>\n";
}

void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
    bool with_errors = false;
    for (const auto& r : rows) with_errors = with_errors || r.l2.has_value();
    std::ofstream out = open_out(path);
    out << "step,t,energy,ratio,newton_iters";
    if (with_errors) out << ",l2_err,h1_err";
    out << '\n';
    for (const auto& r : rows) {
        out << r.step << ',' << format_double(r.t) << ',' << format_double(r.energy) << ','
            << format_double(r.ratio) << ',' << r.newton_iters;
        if (with_errors)
            out << ',' << format_double(r.l2.value_or(0.0)) << ','
                << format_double(r.h1.value_or(0.0));
        out << '\n';
    }
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw Error("empty series file '" + path + "'");
    const bool with_errors = line.find("l2_err") != std::string::npos;
    std::vector<SeriesRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        SeriesRow r;
        char comma;
        ss >> r.step >> comma >> r.t >> comma >> r.energy >> comma >> r.ratio >> comma >>
            r.newton_iters;
        if (with_errors) {
            double l2 = 0.0, h1 = 0.0;
            ss >> comma >> l2 >> comma >> h1;
            r.l2 = l2;
            r.h1 = h1;
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace acsf::io
