#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "aportrait/exponents.hpp"
#include "aportrait/integrator.hpp"
#include "aportrait/linalg.hpp"
#include "aportrait/smalleig.hpp"
#include "aportrait/systems.hpp"

namespace aportrait {

enum class Polarity { attract, repel, neutral };
enum class SegmentKind { real_line, complex_plane_arm };

const char* polarity_name(Polarity p);
const char* segment_kind_name(SegmentKind k);

// One attractiveness segment: a line through `center` along `direction`,
// extending half_length to each side, colored by the eigenvalue's sign.
struct PortraitSegment {
    Vec center;
    Vec direction;  // unit
    double half_length = 0;
    Polarity polarity = Polarity::neutral;
    double eig_real = 0;
    double eig_imag = 0;
    SegmentKind kind = SegmentKind::real_line;
};

struct PortraitSample {
    double t = 0;
    Vec point;
    std::vector<PortraitSegment> segments;
    bool defective = false;
    std::array<double, 3> spectrum_real_parts{};  // all eigenvalues, multiplicity included
};

struct PortraitColors {
    std::string attract = "#0000FF";
    std::string repel = "#FF0000";
    std::string trajectory = "#00AA00";
    std::string neutral = "#888888";
};

struct BoundingBox {
    Vec min, max;
    double diagonal() const { return (max - min).norm(); }
};

struct PortraitDocument {
    std::string system;
    std::vector<std::pair<std::string, double>> parameters;
    int dimension = 0;
    double T = 0;
    int m = 0;
    double scale = 0;  // resolved half-length multiplier
    double neutral_threshold = 0;
    std::vector<double> polyline_times;
    std::vector<Vec> polyline;
    std::vector<PortraitSample> samples;  // m + 1 groups
    PortraitColors colors;
    BoundingBox bbox;
};

// Segment half-lengths are scale * |eigenvalue|. The relative policy picks
// the scale so the longest full segment spans `relative` of the trajectory
// bounding-box diagonal; an absolute scale overrides it when positive.
struct ScalePolicy {
    double relative = 0.05;
    double absolute = 0;
};

// Eigen-structure segments of the frozen-coefficient system at one point.
std::vector<PortraitSegment> portrait_at(const SystemDefinition& sys, const Vec& y, double scale,
                                         double neutral_threshold, double t = 0);

PortraitSample portrait_sample_at(const SystemDefinition& sys, const Vec& y, double t,
                                  double scale, double neutral_threshold);

PortraitDocument build_portrait(const SystemDefinition& sys, const Vec& y0,
                                const WindowPlan& plan, const ScalePolicy& scale = {},
                                double neutral_threshold = 1e-9,
                                const ToleranceSettings& control = {});

// 3-to-2 projection for rendering; rows are the screen axes. For
// 2-dimensional systems the third column is ignored.
struct ViewSpec {
    std::string name = "xy";
    std::array<double, 6> projection = {1, 0, 0, 0, 1, 0};  // row-major 2x3
    int width = 1000;
    int height = 800;
    double margin = 40;
    double trajectory_stroke = 1.0;
    double segment_stroke = 1.0;
};

// Named views: xy, xz, yz, and a fixed axonometric view "axon".
ViewSpec named_view(const std::string& name);

// Deterministic SVG: the trajectory polyline first, then the segments.
std::string render_svg(const PortraitDocument& doc, const ViewSpec& view);

void write_document_json(const PortraitDocument& doc, std::ostream& out);

// Phase alignment between a long chaotic trajectory and a periodic one:
// scans shifts over [0, period) at period/1024 resolution and maximizes the
// normalized cross-correlation of one component sampled every 0.1 time units.
struct PhaseAlignment {
    double shift = 0;
    double score = 0;
    std::vector<std::array<double, 3>> pairs;  // (t, chaotic value, shifted periodic value)
};

PhaseAlignment hidden_structure_compare(const Trajectory& chaotic, const Trajectory& periodic,
                                        int component, double period);

}  // namespace aportrait
