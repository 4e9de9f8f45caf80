#pragma once

#include "gvf/implicit.hpp"

namespace gvf {

/// v / |v|. Throws SingularityError for the zero vector.
Vec normalize(const Vec& v);

/// gamma E grad(phi) - k_p phi grad(phi). Zero exactly where grad(phi) = 0.
Vec path_field_2d(const PathSpec& path, const Vec& p);

/// grad(phi1) x grad(phi2) - k1 phi1 grad(phi1) - k2 phi2 grad(phi2).
Vec path_field_3d(const PathSpec& path, const Vec& p);

/// Dispatches on the path dimension.
Vec path_field(const PathSpec& path, const Vec& p);

/// gamma E grad(phi - shift) - k_r (phi - shift) grad(phi). A nonzero shift
/// gives the field of the shifted boundary phi = shift.
Vec reactive_field_2d(const Obstacle& obs, const Vec& p, double t = 0.0, double shift = 0.0);

/// grad(phi) x v - k_r phi grad(phi), with v the obstacle's bypass direction.
Vec reactive_field_3d(const Obstacle& obs, const Vec& p, double t = 0.0);

/// Dispatches on the obstacle dimension.
Vec reactive_field(const Obstacle& obs, const Vec& p, double t = 0.0);

/// Reactive field for a moving obstacle:
///   tangent - k_r phi grad(phi) + (-dphi/dt + rho - l phi) grad(phi) / |grad(phi)|^2
/// where the tangent term is gamma E grad(phi) in 2D and grad(phi) x v in 3D.
/// rho models an error in the measured obstacle motion. Throws
/// SingularityError where grad(phi) = 0.
Vec reactive_field_moving(const Obstacle& obs, const Vec& p, double t, double rho = 0.0);

}  // namespace gvf
