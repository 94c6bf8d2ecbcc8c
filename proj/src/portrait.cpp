#include "aportrait/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aportrait {

namespace {

Polarity classify(double real_part, double threshold) {
    if (real_part < -threshold) return Polarity::attract;
    if (real_part > threshold) return Polarity::repel;
    return Polarity::neutral;
}

std::vector<PortraitSegment> segments_from_spectrum(const Spectrum& spec, const Vec& y,
                                                    double scale, double threshold) {
    std::vector<PortraitSegment> segments;
    bool pair_done = false;
    for (int i = 0; i < spec.dimension; ++i) {
        const auto lambda = spec.values[static_cast<size_t>(i)];
        if (lambda.imag() != 0.0) {
            if (pair_done || !spec.plane) continue;
            pair_done = true;
            const double re = lambda.real();
            const double im = std::fabs(lambda.imag());
            const double half = scale * std::abs(lambda);
            for (const Vec& dir : {spec.plane->u, spec.plane->v}) {
                PortraitSegment seg;
                seg.center = y;
                seg.direction = dir;
                seg.half_length = half;
                seg.polarity = classify(re, threshold);
                seg.eig_real = re;
                seg.eig_imag = im;
                seg.kind = SegmentKind::complex_plane_arm;
                segments.push_back(seg);
            }
            continue;
        }
        if (!spec.lines[static_cast<size_t>(i)]) continue;  // defective, no vector available
        PortraitSegment seg;
        seg.center = y;
        seg.direction = spec.lines[static_cast<size_t>(i)]->direction;
        seg.half_length = scale * std::fabs(lambda.real());
        seg.polarity = classify(lambda.real(), threshold);
        seg.eig_real = lambda.real();
        seg.eig_imag = 0;
        seg.kind = SegmentKind::real_line;
        segments.push_back(seg);
    }
    return segments;
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

const char* polarity_name(Polarity p) {
    switch (p) {
        case Polarity::attract: return "attract";
        case Polarity::repel: return "repel";
        case Polarity::neutral: return "neutral";
    }
    return "?";
}

const char* segment_kind_name(SegmentKind k) {
    return k == SegmentKind::real_line ? "real-line" : "complex-plane-arm";
}

PortraitSample portrait_sample_at(const SystemDefinition& sys, const Vec& y, double t,
                                  double scale, double neutral_threshold) {
    const Spectrum spec = eigen(eval_jacobian(sys, y, t));
    PortraitSample sample;
    sample.t = t;
    sample.point = y;
    sample.defective = spec.defective;
    for (int i = 0; i < spec.dimension; ++i)
        sample.spectrum_real_parts[static_cast<size_t>(i)] = spec.real_part(i);
    sample.segments = segments_from_spectrum(spec, y, scale, neutral_threshold);
    return sample;
}

std::vector<PortraitSegment> portrait_at(const SystemDefinition& sys, const Vec& y, double scale,
                                         double neutral_threshold, double t) {
    if (!y.finite()) throw std::invalid_argument("portrait point must be finite");
    if (!(scale > 0)) throw std::invalid_argument("portrait scale must be positive");
    return portrait_sample_at(sys, y, t, scale, neutral_threshold).segments;
}

PortraitDocument build_portrait(const SystemDefinition& sys, const Vec& y0,
                                const WindowPlan& plan, const ScalePolicy& policy,
                                double neutral_threshold, const ToleranceSettings& control) {
    if (!(plan.window_length > 0)) throw std::invalid_argument("sampling interval T must be positive");
    if (plan.window_count < 0) throw std::invalid_argument("sample interval count must be >= 0");
    const int n = sys.dimension();
    const double T = plan.window_length;
    const int m = plan.window_count;

    PortraitDocument doc;
    doc.system = sys.name();
    doc.parameters = sys.parameters();
    doc.dimension = n;
    doc.T = T;
    doc.m = m;
    doc.neutral_threshold = neutral_threshold;

    const double t_begin = plan.t_start + plan.transient;
    Vec y = (t_begin > 0) ? advance(sys, y0, 0.0, t_begin, control) : y0;

    // polyline spacing divides T so every sample point is a polyline point
    const int per_interval = std::clamp(static_cast<int>(std::ceil(T / 0.02)), 1, 1000);

    std::vector<double> sample_times;
    std::vector<Vec> sample_points;
    doc.polyline_times.push_back(t_begin);
    doc.polyline.push_back(y);
    sample_times.push_back(t_begin);
    sample_points.push_back(y);

    for (int k = 0; k < m; ++k) {
        const double a = t_begin + k * T;
        const Trajectory traj = integrate(sys, y, a, a + T, control);
        for (int j = 1; j <= per_interval; ++j) {
            const double t = a + T * j / per_interval;
            const Vec p = (j == per_interval) ? traj.back() : traj.state_at(t);
            doc.polyline_times.push_back(t);
            doc.polyline.push_back(p);
        }
        y = traj.back();
        sample_times.push_back(a + T);
        sample_points.push_back(y);
    }

    doc.bbox.min = doc.polyline.front();
    doc.bbox.max = doc.polyline.front();
    for (const Vec& p : doc.polyline)
        for (int i = 0; i < n; ++i) {
            doc.bbox.min[i] = std::min(doc.bbox.min[i], p[i]);
            doc.bbox.max[i] = std::max(doc.bbox.max[i], p[i]);
        }

    // first pass over the spectra fixes the scale, second emits segments
    std::vector<Spectrum> spectra;
    spectra.reserve(sample_points.size());
    double max_modulus = 0;
    for (size_t k = 0; k < sample_points.size(); ++k) {
        spectra.push_back(eigen(eval_jacobian(sys, sample_points[k], sample_times[k])));
        for (int i = 0; i < n; ++i)
            max_modulus = std::max(max_modulus, std::abs(spectra.back().values[static_cast<size_t>(i)]));
    }
    if (policy.absolute > 0)
        doc.scale = policy.absolute;
    else
        doc.scale = (max_modulus > 0) ? policy.relative * doc.bbox.diagonal() / (2.0 * max_modulus)
                                      : 0.0;

    for (size_t k = 0; k < sample_points.size(); ++k) {
        PortraitSample sample;
        sample.t = sample_times[k];
        sample.point = sample_points[k];
        sample.defective = spectra[k].defective;
        for (int i = 0; i < n; ++i)
            sample.spectrum_real_parts[static_cast<size_t>(i)] = spectra[k].real_part(i);
        sample.segments =
            segments_from_spectrum(spectra[k], sample_points[k], doc.scale, neutral_threshold);
        doc.samples.push_back(std::move(sample));
    }
    return doc;
}

ViewSpec named_view(const std::string& name) {
    ViewSpec v;
    v.name = name;
    if (name == "xy") {
        v.projection = {1, 0, 0, 0, 1, 0};
    } else if (name == "xz") {
        v.projection = {1, 0, 0, 0, 0, 1};
    } else if (name == "yz") {
        v.projection = {0, 1, 0, 0, 0, 1};
    } else if (name == "axon") {
        // isometric-style axes
        const double s3 = std::sqrt(3.0) / 2.0;
        v.projection = {s3, -s3, 0, 0.5, 0.5, -1.0};
    } else {
        throw std::invalid_argument("unknown view '" + name + "' (use xy, xz, yz, axon)");
    }
    return v;
}

std::string render_svg(const PortraitDocument& doc, const ViewSpec& view) {
    if (view.width <= 0 || view.height <= 0)
        throw std::invalid_argument("viewport dimensions must be positive");
    const auto& P = view.projection;
    const Vec r0(P[0], P[1], P[2]);
    const Vec r1(P[3], P[4], P[5]);
    if (r0.cross(r1).norm() < 1e-12)
        throw std::invalid_argument("degenerate projection: rank < 2");

    auto project = [&](const Vec& p) {
        const double x = p[0], y = p[1], z = (p.size() == 3) ? p[2] : 0.0;
        return std::pair<double, double>{P[0] * x + P[1] * y + P[2] * z,
                                         P[3] * x + P[4] * y + P[5] * z};
    };

    // gather projected extent of everything drawable
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    auto extend = [&](std::pair<double, double> q) {
        if (first) {
            xmin = xmax = q.first;
            ymin = ymax = q.second;
            first = false;
            return;
        }
        xmin = std::min(xmin, q.first);
        xmax = std::max(xmax, q.first);
        ymin = std::min(ymin, q.second);
        ymax = std::max(ymax, q.second);
    };
    for (const Vec& p : doc.polyline) extend(project(p));
    for (const auto& sample : doc.samples)
        for (const auto& seg : sample.segments) {
            extend(project(seg.center + seg.direction * seg.half_length));
            extend(project(seg.center - seg.direction * seg.half_length));
        }
    if (first) {
        xmin = ymin = 0;
        xmax = ymax = 1;
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    if (ymax - ymin < 1e-12) ymax = ymin + 1;

    const double sx = (view.width - 2 * view.margin) / (xmax - xmin);
    const double sy = (view.height - 2 * view.margin) / (ymax - ymin);
    const double s = std::min(sx, sy);
    const double ox = view.margin + 0.5 * ((view.width - 2 * view.margin) - s * (xmax - xmin));
    const double oy = view.margin + 0.5 * ((view.height - 2 * view.margin) - s * (ymax - ymin));
    auto to_screen = [&](std::pair<double, double> q) {
        return std::pair<double, double>{ox + s * (q.first - xmin),
                                         view.height - (oy + s * (q.second - ymin))};
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << view.width << "\" height=\""
        << view.height << "\" viewBox=\"0 0 " << view.width << " " << view.height << "\">\n";
    svg << "<desc>attractiveness portrait: " << doc.system << ", view " << view.name
        << "</desc>\n";

    // trajectory beneath segments; z-order is part of the format
    svg << "<g id=\"trajectory\" fill=\"none\" stroke=\"" << doc.colors.trajectory
        << "\" stroke-width=\"" << fmt_num(view.trajectory_stroke) << "\">\n";
    if (doc.polyline.size() > 1) {
        svg << "<polyline points=\"";
        for (size_t i = 0; i < doc.polyline.size(); ++i) {
            const auto q = to_screen(project(doc.polyline[i]));
            if (i) svg << " ";
            svg << fmt_num(q.first) << "," << fmt_num(q.second);
        }
        svg << "\"/>\n";
    }
    svg << "</g>\n";

    svg << "<g id=\"segments\" stroke-width=\"" << fmt_num(view.segment_stroke) << "\">\n";
    for (const auto& sample : doc.samples)
        for (const auto& seg : sample.segments) {
            const auto a = to_screen(project(seg.center - seg.direction * seg.half_length));
            const auto b = to_screen(project(seg.center + seg.direction * seg.half_length));
            const std::string& color = seg.polarity == Polarity::attract ? doc.colors.attract
                                       : seg.polarity == Polarity::repel ? doc.colors.repel
                                                                         : doc.colors.neutral;
            svg << "<line x1=\"" << fmt_num(a.first) << "\" y1=\"" << fmt_num(a.second)
                << "\" x2=\"" << fmt_num(b.first) << "\" y2=\"" << fmt_num(b.second)
                << "\" stroke=\"" << color << "\"/>\n";
        }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void write_document_json(const PortraitDocument& doc, std::ostream& out) {
    nlohmann::json j;
    j["format"] = "aportrait/1";
    j["system"] = doc.system;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : doc.parameters) params[k] = v;
    j["parameters"] = params;
    j["plan"] = {{"T", doc.T}, {"m", doc.m}};
    j["colors"] = {{"attract", doc.colors.attract},
                   {"repel", doc.colors.repel},
                   {"trajectory", doc.colors.trajectory},
                   {"neutral", doc.colors.neutral}};

    nlohmann::json polyline = nlohmann::json::array();
    for (const Vec& p : doc.polyline) {
        nlohmann::json pt = nlohmann::json::array();
        for (int i = 0; i < doc.dimension; ++i) pt.push_back(p[i]);
        polyline.push_back(pt);
    }
    j["polyline"] = polyline;

    nlohmann::json samples = nlohmann::json::array();
    for (const auto& sample : doc.samples) {
        nlohmann::json js;
        js["t"] = sample.t;
        nlohmann::json pt = nlohmann::json::array();
        for (int i = 0; i < doc.dimension; ++i) pt.push_back(sample.point[i]);
        js["point"] = pt;
        if (sample.defective) js["defective"] = true;
        nlohmann::json segs = nlohmann::json::array();
        for (const auto& seg : sample.segments) {
            nlohmann::json s;
            nlohmann::json dir = nlohmann::json::array();
            for (int i = 0; i < doc.dimension; ++i) dir.push_back(seg.direction[i]);
            s["dir"] = dir;
            s["half_len"] = seg.half_length;
            s["re"] = seg.eig_real;
            s["im"] = seg.eig_imag;
            s["polarity"] = polarity_name(seg.polarity);
            s["kind"] = segment_kind_name(seg.kind);
            segs.push_back(s);
        }
        js["segments"] = segs;
        samples.push_back(js);
    }
    j["samples"] = samples;
    out << j.dump() << "\n";
}

PhaseAlignment hidden_structure_compare(const Trajectory& chaotic, const Trajectory& periodic,
                                        int component, double period) {
    if (!(period > 0)) throw std::invalid_argument("period must be positive");
    if (component < 0 || component >= chaotic.dimension() || component >= periodic.dimension())
        throw std::invalid_argument("component index out of range");
    const double span = std::min(chaotic.span(), periodic.span());
    if (span < period)
        throw std::invalid_argument("comparison span shorter than one period");

    constexpr double kSpacing = 0.1;
    constexpr int kShiftSteps = 1024;
    const double usable = span - period;
    const size_t count = static_cast<size_t>(std::floor(usable / kSpacing)) + 1;

    std::vector<double> c(count);
    for (size_t i = 0; i < count; ++i)
        c[i] = chaotic.state_at(chaotic.start_time() + kSpacing * static_cast<double>(i))[component];
    double c_mean = 0;
    for (double v : c) c_mean += v;
    c_mean /= static_cast<double>(count);
    double c_var = 0;
    for (double v : c) c_var += (v - c_mean) * (v - c_mean);

    PhaseAlignment best;
    best.score = -2.0;
    std::vector<double> p(count);
    for (int k = 0; k < kShiftSteps; ++k) {
        const double shift = period * k / kShiftSteps;
        double p_mean = 0;
        for (size_t i = 0; i < count; ++i) {
            p[i] = periodic.state_at(periodic.start_time() + shift +
                                     kSpacing * static_cast<double>(i))[component];
            p_mean += p[i];
        }
        p_mean /= static_cast<double>(count);
        double cov = 0, p_var = 0;
        for (size_t i = 0; i < count; ++i) {
            cov += (c[i] - c_mean) * (p[i] - p_mean);
            p_var += (p[i] - p_mean) * (p[i] - p_mean);
        }
        const double denom = std::sqrt(c_var * p_var);
        const double score = denom > 0 ? cov / denom : 0.0;
        if (score > best.score) {
            best.score = score;
            best.shift = shift;
        }
    }

    best.pairs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        const double t = kSpacing * static_cast<double>(i);
        best.pairs.push_back(
            {t, c[i],
             periodic.state_at(periodic.start_time() + best.shift + t)[component]});
    }
    return best;
}

}  // namespace aportrait
