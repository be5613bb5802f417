#pragma once

// Umbrella header for the qproots library: characteristic-root computation,
// certification, and asymptotic prediction for delay-PDE quasipolynomials.

#include "qproots/asymptotics.hpp"
#include "qproots/errors.hpp"
#include "qproots/integrator.hpp"
#include "qproots/lambert.hpp"
#include "qproots/report.hpp"
#include "qproots/rootfinder.hpp"
#include "qproots/symbols.hpp"
#include "qproots/version.hpp"
