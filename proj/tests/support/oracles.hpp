#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "cscdyn/grid.hpp"
#include "cscdyn/model.hpp"
#include "cscdyn/pde.hpp"

// Independent reference computations used by the unit and acceptance tests.
namespace oracle {

/// Symmetric difference quotient (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Plain bisection for a sign change of f on [a, b].
double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-15, int max_iter = 400);

/// Slow-manifold ordinate from bisection on M(u, v) = k(u+v)|Omega|(u+v) - alpha v in 50-digit arithmetic.
double slow_manifold_value_mp(double sigma, double alpha, double u, double omega = 1.0);

/// Dense Neumann Laplacian assembled from the ghost-node stencil.
Eigen::MatrixXd laplacian_matrix(const cscdyn::Grid& grid);

/// Trapezoid weights re-derived from the node counts.
Eigen::VectorXd trapezoid_weights(const cscdyn::Grid& grid);

/// Jacobian of the fast system at the constant state point, state vector (u, v).
Eigen::MatrixXd fast_linearization(const cscdyn::ModelParams& params, const cscdyn::Grid& grid,
                                   const cscdyn::MeanState& point);

/// Finite-difference Jacobian of an arbitrary field map around s.
Eigen::MatrixXd fd_jacobian(const std::function<cscdyn::FieldState(const cscdyn::FieldState&)>& f,
                            const cscdyn::FieldState& s, double h = 1e-6);

/// Block operator D L_h + J (x) I on (u, v), J uniform across nodes.
Eigen::MatrixXd modal_operator(const cscdyn::Grid& grid, double d, const Eigen::Matrix2d& j);

/// Removes the constant mode of each component: A - c (Pi (x) I) with Pi = 1 w^T / |Omega|.
Eigen::MatrixXd deflate_constants(const Eigen::MatrixXd& a, const cscdyn::Grid& grid, double shift = 1e6);

/// All eigenvalues, sorted by descending real part.
std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& a);

/// Largest real part among the eigenvalues.
double leading_real_part(const Eigen::MatrixXd& a);

/// Fixed-step classical RK4 of the mean-field reduction.
cscdyn::MeanState rk4_mean(const cscdyn::ModelParams& params, cscdyn::MeanState s, double t_end, double h);

}  // namespace oracle
