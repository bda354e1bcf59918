#pragma once

// Umbrella header.
#include "mmc/baselines.hpp"
#include "mmc/certificate.hpp"
#include "mmc/data_io.hpp"
#include "mmc/errors.hpp"
#include "mmc/eval.hpp"
#include "mmc/factor_pair.hpp"
#include "mmc/format.hpp"
#include "mmc/linalg.hpp"
#include "mmc/log.hpp"
#include "mmc/model_io.hpp"
#include "mmc/observations.hpp"
#include "mmc/solver.hpp"
