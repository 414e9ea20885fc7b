#pragma once

#include <cstddef>
#include <vector>

#include "ltg/elements.hpp"

namespace ltg {

enum class ArcKind { Forced, Coast };

/// A no-thrust interval imposed by mission operations [s].
struct ThrustWindow {
    double start = 0.0;
    double end = 0.0;
};

/// Ordered switch instants t_0 < t_1 < ... < t_{m+1} partitioning the
/// horizon into alternating thrust/coast arcs, first forced, last coast.
struct TimeGrid {
    std::vector<double> instants;                 // size m+2 [s]
    std::vector<ArcKind> arc_kinds;               // size m+1, alternating
    OrbitalElements chief_epoch_elements;         // mean elements at instants.front()
    double tn_min = 0.0;                          // minimum admissible coast [s]

    std::size_t num_arcs() const { return arc_kinds.size(); }
    int m() const { return static_cast<int>(num_arcs()) - 1; }
    double t0() const { return instants.front(); }
    double tf() const { return instants.back(); }
    double arc_duration(std::size_t k) const { return instants[k + 1] - instants[k]; }
    bool is_forced(std::size_t k) const { return arc_kinds[k] == ArcKind::Forced; }

    std::size_t num_forced_arcs() const;

    /// Subgrid covering [t_k, t_f]; k must index a forced arc so the
    /// suffix keeps the forced-first alternation. Chief epoch elements are
    /// advanced to t_k with the secular mean rates.
    TimeGrid suffix_from(std::size_t node_index, const OrbitalElements& chief_at_node) const;

    void validate() const;
};

/// Slew-time budget: worst-case pi rotation at omega_max plus a margin.
double min_coast_duration(double omega_max, double t_safety);

/// Uniform alternating grid with forced arcs of length tf_arc and coasts of
/// length tn_arc; a trailing partial arc is absorbed into the final coast.
TimeGrid build_grid(double t0, double tf, double tf_arc, double tn_arc,
                    const OrbitalElements& chief_mean);

/// Forced-arc length per horizon portion: `tf_arc` applies to arcs starting
/// before `until` [s]. Used e.g. to shorten arcs on the final orbit.
struct TfSegment {
    double until = 0.0;
    double tf_arc = 0.0;
};

/// build_grid with a piecewise-constant forced-arc length.
TimeGrid build_grid(double t0, double tf, const std::vector<TfSegment>& segments, double tn_arc,
                    const OrbitalElements& chief_mean);

/// Tile the complement of the no-thrust windows with forced arcs of length
/// at most tf_arc, inserting minimum-length coasts between consecutive
/// forced arcs; windows become (part of) coast arcs.
TimeGrid build_grid_with_windows(double t0, double tf, double tf_arc,
                                 const std::vector<ThrustWindow>& windows, double tn_min,
                                 const OrbitalElements& chief_mean);

}  // namespace ltg
