#pragma once

#include "reeb/symplectic.hpp"

#include <array>
#include <vector>

namespace reeb {

/// One intersection of a path with the Maslov cycle {det(M - I) = 0}.
struct CrossingRecord {
  double time = 0.0;
  int kernel_dim = 0;
  int signature_contribution = 0;
};

struct CzOptions {
  int grid = 2048;
  double tol_ker = 1e-8;
  /// Endpoint rotations e^{-eps J} used for the lower semicontinuous
  /// convention; a value is accepted once two consecutive ones agree.
  std::array<double, 3> eps_sequence{1e-3, 1e-4, 1e-5};
  int max_grid_doublings = 3;
};

struct CzResult {
  int index = 0;
  bool degenerate = false;  // lower semicontinuous convention was applied
  double eps_used = 0.0;    // 0 for non-degenerate paths
  int start_signature = 0;  // signature of the crossing form at t = 0
  std::vector<CrossingRecord> crossings;  // interior crossings of the path actually counted
};

/// Crossings of Gamma with the Maslov cycle in the open interval (0, 1),
/// each with its kernel dimension and crossing-form signature. Throws
/// UnresolvedCrossing on non-isolated or non-regular crossings.
std::vector<CrossingRecord> interior_crossings(const SymplecticPath& path, const CzOptions& opts = {});

/// Conley-Zehnder index. Degenerate paths (endpoint on the Maslov cycle,
/// non-regular crossings, degenerate start) get the largest lower
/// semicontinuous extension, realized by rotating with e^{-eps t J}.
/// Normalized so that t -> e^{2 pi J t} in Sp(2) has index +1.
CzResult conley_zehnder(const SymplecticPath& path, const CzOptions& opts = {});
int cz_index(const SymplecticPath& path, const CzOptions& opts = {});

/// Sum of dim ker(Gamma(t) - I) over interior crossing times.
int morse_index_from_path(const SymplecticPath& path, const CzOptions& opts = {});

struct NullityResult {
  int nullity = 0;
  bool borderline = false;  // a singular value sits between tol_ker and 1e-4
  double smallest_nonzero = 0.0;
};

/// dim ker(M - I) with the rank decided at `tol_ker` (relative to max(1, |M|)).
NullityResult kernel_dimension(const Matrix& m, double tol_ker = 1e-8);
NullityResult cz_nullity(const SymplecticPath& path, double tol_ker = 1e-8);

/// Parity of the index of any identity-based path ending at M. Eigenvalues
/// within `tol` of 1 are treated as degenerate and resolved by the same
/// e^{-eps J} rotation as the index; throws NumericalError when the
/// classification does not stabilize.
int parity(const SymplecticMatrix& m, double tol = 1e-6);

/// e^{-eps t J} Gamma(t).
SymplecticPath negative_rotation_perturbation(const SymplecticPath& path, double eps);

}  // namespace reeb
