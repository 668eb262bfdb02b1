// periodogram.hpp — Dominant-frequency estimate of a uniformly sampled series

#pragma once

#include <vector>

namespace qheat::signal {

// Location of the peak of the windowed power spectrum on [omega_lo, omega_hi]:
// dense scan followed by golden-section refinement. The series is mean-removed
// and Hann-windowed, so a clean tone is located far below the scan resolution.
double dominant_frequency(const std::vector<double>& samples, double dt,
                          double omega_lo, double omega_hi, int scan_points = 2048);

}  // namespace qheat::signal
