#pragma once

#include "reeb/conley_zehnder.hpp"
#include "reeb/convex_body.hpp"

#include <complex>
#include <string>
#include <vector>

namespace reeb {

/// Parallel kernels take this switch; `serial` runs the identical loop on one
/// thread and is kept as the reference implementation.
enum class Execution { parallel, serial };

struct IntegratorOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-2;
  double surface_tol = 1e-10;  // accepted distance |H2(z) - 1| of the starting point
  double drift_warn = 1e-9;    // pre-projection energy drift that triggers a warning
};

struct ReebTrajectory {
  Vector point;
  int steps = 0;
  double max_drift = 0.0;  // largest |H2 - 1| seen before a projection
  std::vector<std::string> warnings;
};

/// Flow of J grad H2 (the Reeb flow on Sigma) for time t, which may be
/// negative. Adaptive Runge-Kutta-Fehlberg 7(8), radial projection onto Sigma
/// after every accepted step.
ReebTrajectory integrate_reeb_detailed(const ConvexBody& body, const Vector& z, double t,
                                       const IntegratorOptions& opts = {});
Vector integrate_reeb(const ConvexBody& body, const Vector& z, double t, const IntegratorOptions& opts = {});

/// Point and linearization of the flow of the degree-`degree` Hamiltonian
/// H2^{degree/2} for time t (degree in (1, 2]).
struct LinearizedState {
  Vector point;
  Matrix phi;
};
LinearizedState integrate_linearized(const ConvexBody& body, const Vector& z, double t, double degree,
                                     const IntegratorOptions& opts = {});

/// Gamma(s) = d phi_H^{s T}(z) for s in [0, 1], H of degree `degree`, with
/// checkpoints on a uniform grid and exact derivatives J Hess H Gamma.
SymplecticPath linearized_flow_path(const ConvexBody& body, const Vector& z, double total_time, double degree,
                                    int checkpoints = 2048, const IntegratorOptions& opts = {});

struct ClosedOrbit {
  Vector initial_point;
  double period = 0.0;
  double residual = 0.0;  // |phi_R^period(z) - z|
  Matrix monodromy;       // degree-2 linearized flow over one period
  Matrix return_block;    // N on E^omega in a symplectic basis
  int cz = 0;
  int morse = 0;
  int nullity = 0;         // 1 + dim ker(N - I)
  int nullity_direct = 0;  // dim ker(Gamma_alpha(1) - I)
  bool indices_filled = false;
  double block_residual = 0.0;  // deviation of Gamma_alpha(1) from M_alpha (+) N
  bool block_flag = false;      // block_residual > 1e-6
  double symplectic_defect = 0.0;
  double alpha = 0.0;

  std::vector<std::complex<double>> monodromy_eigenvalues() const;
};

struct OrbitSearchOptions {
  double t_max = 3.0;
  int sobol_seeds = 16;
  bool plane_seeds = true;
  double tol_orbit = 1e-9;
  double dedup_tol = 1e-6;
  int samples_per_unit_time = 400;
  int newton_max_iter = 25;
  Execution execution = Execution::parallel;
  IntegratorOptions integrator{};
};

struct OrbitSearchResult {
  std::vector<ClosedOrbit> orbits;              // minimal periods, deduplicated
  std::vector<std::vector<double>> multiples;   // k * period <= t_max for each orbit
  std::vector<std::string> log;                 // per-seed failures (not fatal)
  int seeds = 0;
};

/// Shooting with Gauss-Newton on (z, tau) subject to H2(z) = 1 and a phase
/// condition, from coordinate-plane circles and Sobol surface samples.
OrbitSearchResult find_closed_orbits(const ConvexBody& body, const OrbitSearchOptions& opts = {});

/// Newton refinement of an approximate closed orbit; throws NumericalError
/// when the residual does not drop below tol.
ClosedOrbit refine_orbit(const ConvexBody& body, const Vector& z0, double tau0, double tol = 1e-9,
                         int max_iter = 25, const IntegratorOptions& opts = {});

/// Fills monodromy, N, cz (via the degree-alpha path), morse = cz - n and
/// nullity = 1 + dim ker(N - I).
ClosedOrbit monodromy_and_index(const ConvexBody& body, ClosedOrbit orbit, double alpha,
                                const CzOptions& cz_opts = {}, const IntegratorOptions& opts = {});

struct BesseTestResult {
  bool besse = false;  // numerical evidence only
  double tau = 0.0;
  double max_displacement = 0.0;
  Vector witness;  // worst sample point
  double tolerance = 0.0;
  int samples = 0;
  std::string label = "numerical evidence";
};

/// Flows quasi-uniform surface samples for time tau; Besse at tau iff every
/// displacement is below tol_rel * diameter.
BesseTestResult numerical_besse_test(const ConvexBody& body, double tau, int samples = 10000,
                                     Execution exec = Execution::parallel, double tol_rel = 1e-6,
                                     const IntegratorOptions& opts = {});

}  // namespace reeb
