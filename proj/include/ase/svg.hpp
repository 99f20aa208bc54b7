#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "ase/harness.hpp"
#include "ase/matrix.hpp"

namespace ase {

// Log-log line chart of mean error vs n with standard-error bars.
void write_sweep_svg(std::ostream& os, const SweepSummary& summary);

// Scatter of embedded rows colored by block; when `projected` is non-null a
// second panel shows the sphere projection. Points carry class="block<k>",
// panels are <g id="xhat"> and <g id="yhat">.
void write_scatter_svg(std::ostream& os, const Matrix& Xhat, const std::vector<int>& labels,
                       const Matrix* projected);

}  // namespace ase
