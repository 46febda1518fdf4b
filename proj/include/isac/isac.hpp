#pragma once

#include "isac/core/parallel.hpp"
#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/stats.hpp"
#include "isac/core/types.hpp"
#include "isac/waveform/waveform.hpp"
#include "isac/array/array.hpp"
#include "isac/radar/detection.hpp"
#include "isac/radar/echo.hpp"
#include "isac/radar/estimation.hpp"
#include "isac/radar/omp.hpp"
#include "isac/comms/comms.hpp"
#include "isac/joint/ccd.hpp"
#include "isac/joint/index_modulation.hpp"
#include "isac/joint/pareto.hpp"
