#pragma once

#include "core/grid.hpp"

namespace latcart {

struct DiffusionParams {
    // Padded linear size relative to max(n1, n2), rounded up to the next
    // power of two.
    double pad_factor = 2.0;
    // Minimum density as a fraction of the mean.
    double density_floor_rel = 1e-8;
    // Stopping rule: integration ends once max |v| x remaining time falls
    // below convergence_tol x cell width.
    double convergence_tol = 1e-9;
    // Time horizon: the t where exp(-lambda_min t) = 10^-max_time_factor.
    double max_time_factor = 12.0;
    // Step-size controller safety factor.
    double rk_safety = 0.8;
    // Largest accepted per-step displacement, in cell widths.
    double max_step_displacement = 0.2;
    // Accepted per-step embedded error estimate (RK4 vs midpoint), in cell
    // widths. Kept separate from convergence_tol: a 1e-9 per-step bound
    // costs ~30x the steps for no measurable gain in the final mesh.
    double step_error_tol = 3e-5;
};

void validate_params(const DiffusionParams& p);

struct SolveDiagnostics {
    int padded_size = 0;
    int steps_accepted = 0;
    int steps_rejected = 0;
    double final_time = 0.0;
    double horizon_time = 0.0;
    // Max displacement of the last accepted step, in cell widths.
    double final_step_increment_cells = 0.0;
    // Max total displacement |T(z) - z| over cells, in cell widths.
    double max_displacement_cells = 0.0;
};

// Transformed cell-center positions defining T (forward, by bilinear
// interpolation) and its approximate inverse.
struct TransformField {
    GridSpec spec;
    std::vector<double> positions; // n1 x n2 x 2, row-major
    SolveDiagnostics diag;

    Point at(int i, int j) const {
        const double* p = positions.data() + (static_cast<std::int64_t>(i) * spec.n2 + j) * 2;
        return {p[0], p[1]};
    }
};

void validate_transform(const TransformField& t);

// TransformField with T = identity on the given grid.
TransformField identity_transform(const GridSpec& spec);

// Density-equalizing transform of the measure by diffusion: the floored
// density is embedded in a mean-density sea on a padded power-of-two grid,
// the heat equation is solved in closed form in the cosine basis, and each
// cell center is advected through v = -grad(rho)/rho by adaptive RK4 until
// the velocity budget drops below convergence_tol.
TransformField solve_transform(const MeasureField& m, const DiffusionParams& params = {});

Point forward_map(const TransformField& t, Point z);

// Locates the transformed quad containing zt (walk search seeded at the
// untransformed cell, exhaustive scan as fallback), then inverts the
// bilinear patch by Newton iteration to 1e-12 cell widths.
Point inverse_map(const TransformField& t, Point zt);

// Post-transform density: floored density x original cell area / transformed
// quad area. Quad (i,j) spans centers (i,j)..(i+1,j+1); the last row and
// column reuse their neighbor's quad.
MeasureField cell_density_after(const MeasureField& m, const TransformField& t);

// Signed areas of the (n1-1) x (n2-1) transformed quads (shoelace).
std::vector<double> quad_signed_areas(const TransformField& t);

// Floored copy of m as used by the solver: max(value, density_floor_rel x mean).
MeasureField floored_density(const MeasureField& m, double density_floor_rel);

} // namespace latcart
