#pragma once
#include <stdexcept>
#include <string>

namespace ase {

// Precondition violations: bad inputs, malformed configs, out-of-range
// parameters. The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degenerate numerical outcomes (CLI exit code 2).

struct NonPositiveSpectrum : std::runtime_error {
  int index;
  double value;
  NonPositiveSpectrum(int idx, double val)
      : std::runtime_error("retained eigenvalue " + std::to_string(idx + 1) +
                           " is not positive (" + std::to_string(val) + ")"),
        index(idx),
        value(val) {}
};

struct ZeroRow : std::runtime_error {
  int index;
  explicit ZeroRow(int idx)
      : std::runtime_error("row " + std::to_string(idx) + " has near-zero norm, cannot project"),
        index(idx) {}
};

struct TooFewDistinctRows : std::runtime_error {
  int distinct;
  int k;
  TooFewDistinctRows(int distinct_rows, int k_requested)
      : std::runtime_error("k=" + std::to_string(k_requested) + " exceeds the " +
                           std::to_string(distinct_rows) + " distinct rows available"),
        distinct(distinct_rows),
        k(k_requested) {}
};

struct EigNonConvergence : std::runtime_error {
  double residual;
  explicit EigNonConvergence(double achieved_residual)
      : std::runtime_error("eigensolver hit its iteration cap, achieved residual " +
                           std::to_string(achieved_residual)),
        residual(achieved_residual) {}
};

}  // namespace ase
