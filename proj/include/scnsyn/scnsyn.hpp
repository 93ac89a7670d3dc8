#pragma once

#include "analysis.hpp"
#include "config.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "io.hpp"
#include "kinetics.hpp"
#include "levenberg_marquardt.hpp"
#include "models.hpp"
#include "presets.hpp"
#include "protocols.hpp"
#include "units.hpp"
