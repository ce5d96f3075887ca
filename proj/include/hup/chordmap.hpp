#pragma once

#include "hup/curve.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace hup {

// A maximal interval on which the projection is strictly monotone.
// For closed curves lo/hi are lifted parameters (hi may exceed 1).
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    int sign = 0;     // +1 increasing, -1 decreasing
    double vlo = 0.0; // min projection value on the piece
    double vhi = 0.0;
    bool lo_critical = false; // endpoint is a critical point (not a window end)
    bool hi_critical = false;
};

struct SubPiece {
    double lo = 0.0;
    double hi = 0.0;
    int multiplicity = 0;
    int piece = 0;
    int label = 0; // 0: I0, -1: I-, +1: I+, 3: multi-fold
};

struct ProjectionSplit {
    Angle theta;
    std::vector<Piece> pieces;
    std::vector<double> critical_set; // reduced into the domain, sorted
    std::vector<Interval> I0, Iminus, Iplus, multi;
    std::vector<SubPiece> subpieces;
    int fold_count = 0;

    bool multi_fold() const { return fold_count > 2; }
    double I0_measure() const;
    // index of the piece holding s, or -1 (s on a critical point returns the piece to its right)
    int piece_of(double s, bool closed) const;
    // lift s into the piece coordinates (closed curves)
    double lift(double s, bool closed) const;
};

ProjectionSplit projection_split(const Curve& curve, Angle theta);
std::vector<double> tangency_points(const Curve& curve, Angle theta);

// one root per monotone piece whose closed value range holds zeta
std::vector<double> level_set_solve(const Curve& curve, Angle theta, double zeta);
std::vector<double> level_set_solve(const Curve& curve, const ProjectionSplit& split, double zeta);
// root on one piece (value clamped to its range)
double solve_on_piece(const Curve& curve, const ProjectionSplit& split, int piece, double zeta);

struct ChordMapOptions {
    bool force_numeric = false;         // skip the ellipse closed form
    double tangency_threshold = 1e-8;   // |pi'(s)| below this uses the local reflection model
};

class ChordMap {
public:
    ChordMap(Curve curve, Angle theta, ChordMapOptions options = {});

    double eval(double s) const;
    std::optional<double> try_eval(double s) const;
    double derivative(double s) const;
    bool in_I0(double s) const { return !try_eval(s).has_value(); }

    const Curve& curve() const { return curve_; }
    Angle theta() const { return theta_; }
    const ProjectionSplit& split() const { return *split_; }
    bool closed_form() const { return closed_form_; }

private:
    Curve curve_;
    Angle theta_;
    ChordMapOptions opt_;
    std::shared_ptr<const ProjectionSplit> split_;
    bool closed_form_ = false;
    double phase_ = 0.0; // ellipse: Phi(s) = phase/pi - s
};

inline ChordMap chord_map(const Curve& curve, Angle theta, ChordMapOptions options = {}) {
    return ChordMap(curve, theta, options);
}
inline double chord_map_derivative(const ChordMap& map, double s) { return map.derivative(s); }

// Three-fold regime of a graph with a cusp at a breakpoint.
struct CuspMaps {
    Angle theta;
    double cusp = 0.0;
    double a = 0.0; // other preimage of the cusp value, in the far piece
    double b = 0.0; // tangency
    double c = 0.0; // other preimage of the tangency value, in the near piece
    Curve curve;
    ProjectionSplit split;
    int near_piece = 0, middle_piece = 0, far_piece = 0;

    double phi(double s) const; // (c, cusp) -> (cusp, b)
    double psi(double s) const; // (c, cusp) -> (b, a)
};

CuspMaps cusp_maps(const Curve& curve, Angle theta);

bool single_line_hup_check(const Curve& curve, Angle theta);

// measure of a list of intervals
double measure(const std::vector<Interval>& ivs);

} // namespace hup
