#pragma once

#include <stdexcept>
#include <string>

namespace dshock {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "solver could not proceed" can catch
// invalid_input and solver_error respectively.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class invalid_input : public error {
 public:
  using error::error;
};

/// A well-formed problem the solver could not resolve.
class solver_error : public error {
 public:
  using error::error;
};

/// Expanding bracket reached the density cap without a sign change.
class bracket_error : public solver_error {
 public:
  using solver_error::solver_error;
};

/// Requested quantity leaves the admissible domain (negative density,
/// divergent improper integral at vacuum, eigenvectors at rho = 0).
class domain_error : public solver_error {
 public:
  using solver_error::solver_error;
};

/// A left/right pair does not lie on the claimed shock locus.
class off_locus_error : public solver_error {
 public:
  using solver_error::solver_error;
};

/// The two wave curves do not intersect for this epsilon (epsilon above the
/// existence threshold for the data).
class no_intersection_error : public solver_error {
 public:
  using solver_error::solver_error;
};

/// The finite-volume run violated its stability or domain assumptions.
class simulation_error : public solver_error {
 public:
  using solver_error::solver_error;
};

}  // namespace dshock
