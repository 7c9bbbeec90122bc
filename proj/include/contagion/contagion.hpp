#pragma once

// Umbrella header.

#include "contagion/closed_form.hpp"
#include "contagion/config.hpp"
#include "contagion/io.hpp"
#include "contagion/mc.hpp"
#include "contagion/model.hpp"
#include "contagion/pricing.hpp"
#include "contagion/quadrature.hpp"
#include "contagion/rng.hpp"
#include "contagion/tables.hpp"
#include "contagion/validation.hpp"
