#include "ltg/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltg {

namespace {

constexpr double kTimeEps = 1e-9;

struct Arc {
    double start, end;
    ArcKind kind;
};

TimeGrid assemble(std::vector<Arc> arcs, const OrbitalElements& chief_mean, double tn_min) {
    // Merge adjacent coast arcs.
    std::vector<Arc> merged;
    for (const Arc& a : arcs) {
        if (a.end - a.start <= kTimeEps) continue;
        if (!merged.empty() && merged.back().kind == ArcKind::Coast && a.kind == ArcKind::Coast)
            merged.back().end = a.end;
        else
            merged.push_back(a);
    }
    TimeGrid grid;
    grid.chief_epoch_elements = chief_mean;
    grid.tn_min = tn_min;
    if (merged.empty()) throw std::invalid_argument("time grid: horizon produced no arcs");
    grid.instants.push_back(merged.front().start);
    for (const Arc& a : merged) {
        grid.instants.push_back(a.end);
        grid.arc_kinds.push_back(a.kind);
    }
    grid.validate();
    return grid;
}

}  // namespace

std::size_t TimeGrid::num_forced_arcs() const {
    return static_cast<std::size_t>(std::count(arc_kinds.begin(), arc_kinds.end(),
                                               ArcKind::Forced));
}

TimeGrid TimeGrid::suffix_from(std::size_t node_index, const OrbitalElements& chief_at_node) const {
    if (node_index >= arc_kinds.size() || !is_forced(node_index))
        throw std::invalid_argument("suffix_from: node must start a forced arc");
    TimeGrid sub;
    sub.instants.assign(instants.begin() + static_cast<std::ptrdiff_t>(node_index),
                        instants.end());
    sub.arc_kinds.assign(arc_kinds.begin() + static_cast<std::ptrdiff_t>(node_index),
                         arc_kinds.end());
    sub.chief_epoch_elements = chief_at_node;
    sub.tn_min = tn_min;
    sub.validate();
    return sub;
}

void TimeGrid::validate() const {
    if (instants.size() < 3 || arc_kinds.size() + 1 != instants.size())
        throw std::invalid_argument("time grid: inconsistent sizes");
    for (std::size_t k = 0; k + 1 < instants.size(); ++k)
        if (!(instants[k + 1] > instants[k]))
            throw std::invalid_argument("time grid: instants not strictly increasing");
    if (arc_kinds.front() != ArcKind::Forced || arc_kinds.back() != ArcKind::Coast)
        throw std::invalid_argument("time grid: must start forced and end coast");
    for (std::size_t k = 0; k + 1 < arc_kinds.size(); ++k)
        if (arc_kinds[k] == arc_kinds[k + 1])
            throw std::invalid_argument("time grid: arcs must alternate");
    for (std::size_t k = 0; k < arc_kinds.size(); ++k)
        if (arc_kinds[k] == ArcKind::Coast && arc_duration(k) < tn_min - kTimeEps)
            throw std::invalid_argument("time grid: coast arc shorter than minimum");
    if (m() % 2 != 1) throw std::invalid_argument("time grid: m must be odd");
}

double min_coast_duration(double omega_max, double t_safety) {
    if (!(omega_max > 0.0)) throw std::invalid_argument("min_coast_duration: omega_max <= 0");
    return kPi / omega_max + t_safety;
}

TimeGrid build_grid(double t0, double tf, double tf_arc, double tn_arc,
                    const OrbitalElements& chief_mean) {
    return build_grid(t0, tf, std::vector<TfSegment>{{tf, tf_arc}}, tn_arc, chief_mean);
}

TimeGrid build_grid(double t0, double tf, const std::vector<TfSegment>& segments, double tn_arc,
                    const OrbitalElements& chief_mean) {
    if (segments.empty()) throw std::invalid_argument("build_grid: no Tf segments");
    for (const TfSegment& s : segments)
        if (!(s.tf_arc > 0.0)) throw std::invalid_argument("build_grid: Tf must be > 0");
    if (!(tn_arc > 0.0)) throw std::invalid_argument("build_grid: Tn must be > 0");

    auto tf_at = [&](double t) {
        for (const TfSegment& s : segments)
            if (t < s.until - kTimeEps) return s.tf_arc;
        return segments.back().tf_arc;
    };

    if (tf - t0 < tf_at(t0) + tn_arc - kTimeEps)
        throw std::invalid_argument("build_grid: horizon shorter than one forced+coast pair");

    std::vector<Arc> arcs;
    double t = t0;
    while (t + tf_at(t) + tn_arc <= tf + kTimeEps) {
        const double f = tf_at(t);
        arcs.push_back({t, t + f, ArcKind::Forced});
        arcs.push_back({t + f, t + f + tn_arc, ArcKind::Coast});
        t += f + tn_arc;
    }
    arcs.back().end = tf;  // absorb the trailing partial arc into the final coast
    return assemble(std::move(arcs), chief_mean, tn_arc);
}

TimeGrid build_grid_with_windows(double t0, double tf, double tf_arc,
                                 const std::vector<ThrustWindow>& windows, double tn_min,
                                 const OrbitalElements& chief_mean) {
    if (!(tf_arc > 0.0)) throw std::invalid_argument("build_grid_with_windows: Tf must be > 0");
    if (!(tn_min > 0.0)) throw std::invalid_argument("build_grid_with_windows: Tn_min must be > 0");
    if (windows.empty()) return build_grid(t0, tf, tf_arc, tn_min, chief_mean);

    std::vector<ThrustWindow> win = windows;
    std::sort(win.begin(), win.end(),
              [](const ThrustWindow& a, const ThrustWindow& b) { return a.start < b.start; });
    for (std::size_t j = 0; j < win.size(); ++j) {
        if (win[j].start < t0 - kTimeEps || win[j].end > tf + kTimeEps || win[j].end <= win[j].start)
            throw std::invalid_argument("build_grid_with_windows: window outside horizon");
        if (win[j].end - win[j].start < tn_min - kTimeEps)
            throw std::invalid_argument("build_grid_with_windows: window shorter than Tn_min");
        if (j + 1 < win.size() && win[j].end > win[j + 1].start + kTimeEps)
            throw std::invalid_argument("build_grid_with_windows: overlapping windows");
    }
    if (win.front().start <= t0 + kTimeEps)
        throw std::invalid_argument("build_grid_with_windows: window at horizon start "
                                    "(first arc must be forced)");

    std::vector<Arc> arcs;
    bool any_forced = false;
    double cursor = t0;
    for (std::size_t j = 0; j <= win.size(); ++j) {
        const double span_end = (j < win.size()) ? win[j].start : tf;
        const bool last_span = (j == win.size());
        double pos = cursor;
        const double span = span_end - pos;

        if (span > kTimeEps) {
            const double pair = tf_arc + tn_min;
            auto pairs = static_cast<std::size_t>(std::floor((span + kTimeEps) / pair));
            for (std::size_t p = 0; p < pairs; ++p) {
                arcs.push_back({pos, pos + tf_arc, ArcKind::Forced});
                arcs.push_back({pos + tf_arc, pos + pair, ArcKind::Coast});
                pos += pair;
                any_forced = true;
            }
            double leftover = span_end - pos;
            if (last_span) {
                // Reserve a trailing coast; a gap shorter than Tf still gets
                // its own (shorter) forced arc when there is room for one.
                if (leftover > tn_min + kTimeEps) {
                    arcs.push_back({pos, span_end - tn_min, ArcKind::Forced});
                    arcs.push_back({span_end - tn_min, span_end, ArcKind::Coast});
                    any_forced = true;
                } else if (!arcs.empty()) {
                    arcs.back().end = span_end;  // extend the previous coast
                }
            } else if (leftover > kTimeEps) {
                const double flen = std::min(tf_arc, leftover);
                arcs.push_back({pos, pos + flen, ArcKind::Forced});
                any_forced = true;
                if (leftover - flen > kTimeEps)
                    arcs.push_back({pos + flen, span_end, ArcKind::Coast});
            }
        }
        if (j < win.size()) {
            arcs.push_back({win[j].start, win[j].end, ArcKind::Coast});
            cursor = win[j].end;
        }
    }
    if (!any_forced)
        throw std::invalid_argument("build_grid_with_windows: windows leave no room for thrust");
    return assemble(std::move(arcs), chief_mean, tn_min);
}

}  // namespace ltg
