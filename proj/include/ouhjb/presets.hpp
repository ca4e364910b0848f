#pragma once

#include <cstdint>

#include "ouhjb/market_model.hpp"

namespace ouhjb::presets {

/// Decoupled benchmark family on [0,1]: r = 0.5, gamma = 0.5, rho = varrho = 0,
/// alpha ~ 0.3 + 0.4 U, mu ~ 5 + 3 U, sigma an orthogonal matrix drawn from the
/// QR factor of a random 0.01 U matrix (so sigma sigma' = I).
ModelParams decoupled_random(int n, std::uint64_t seed);

/// One-asset problem used for the PDE comparison: r = 0.01, gamma = 0.5,
/// rho0 = 0.01, alpha = 0.005, mu = 3, sigma = 1 on [0,1].
ModelParams single_asset_reference();

/// Two-asset oil case on [0, 0.25] with perturbed off-diagonal volatility.
ModelParams oil_two_asset();

/// One-asset problem with fast mean reversion and nonzero discount
/// coefficients; used where the reference case above is too flat to resolve
/// scheme errors.
ModelParams single_asset_stiff();

}  // namespace ouhjb::presets
