#pragma once
// Convenience include for the whole library.

#include "cradle/chain.hpp"
#include "cradle/config.hpp"
#include "cradle/coupling_law.hpp"
#include "cradle/csv.hpp"
#include "cradle/fit.hpp"
#include "cradle/observables.hpp"
#include "cradle/photon_stats.hpp"
#include "cradle/propagator.hpp"
#include "cradle/series_oracle.hpp"
#include "cradle/sweeps.hpp"
#include "cradle/version.hpp"
