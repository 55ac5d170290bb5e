#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acsf/geom.hpp"
#include "acsf/vec2.hpp"

namespace acsf::io {

/// Doubles are printed with 17 significant digits so that re-parsing an
/// emitted file reproduces the values bitwise.
std::string format_double(double v);

void ensure_directory(const std::string& path);

/// Curve snapshot: header `rho,x1,x2`, one row per node.
void write_curve_csv(const std::string& path, const geom::DiscreteCurve& curve);

/// Closed polyline list: header `x1,x2`, one row per point.
void write_points_csv(const std::string& path, const std::vector<Vec2>& points);

/// 3D snapshot: header `x1,x2,x3`.
void write_points3_csv(const std::string& path,
                       const std::vector<std::array<double, 3>>& points);

struct ViewBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double width = 0.0;
    double height = 0.0;
};

/// Closed polylines as an SVG document. Without an explicit view box the
/// bounding box of all points plus a 5% margin is used.
void write_svg(const std::string& path, const std::vector<std::vector<Vec2>>& polylines,
               std::optional<ViewBox> viewbox = std::nullopt);

struct SeriesRow {
    int step = 0;
    double t = 0.0;
    double energy = 0.0;  // discrete energy E^h
    double ratio = 0.0;
    int newton_iters = 0;
    std::optional<double> l2;
    std::optional<double> h1;
};

/// Time series: `step,t,energy,ratio,newton_iters[,l2_err,h1_err]`. The
/// error columns appear when any row carries them.
void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(const std::string& path);

}  // namespace acsf::io
