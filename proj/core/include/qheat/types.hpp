// types.hpp — Shared scalar aliases

#pragma once

#include <complex>

namespace qheat {

using Complex = std::complex<double>;

}  // namespace qheat
