#pragma once

/// Core library. fracturb/io.hpp is separate because it pulls in JSON and
/// libcrypto.

#include "fracturb/analysis.hpp"
#include "fracturb/anomalous_diffusion.hpp"
#include "fracturb/errors.hpp"
#include "fracturb/fft.hpp"
#include "fracturb/fractional_operators.hpp"
#include "fracturb/grid.hpp"
#include "fracturb/mittag_leffler.hpp"
#include "fracturb/random.hpp"
#include "fracturb/scaling_laws.hpp"
#include "fracturb/spectral_solver.hpp"
