#pragma once

#include "pathtrust/csv.hpp"
#include "pathtrust/engine.hpp"
#include "pathtrust/error_model.hpp"
#include "pathtrust/ledger.hpp"
#include "pathtrust/linear_system.hpp"
#include "pathtrust/metrics.hpp"
#include "pathtrust/nnls.hpp"
#include "pathtrust/report_io.hpp"
#include "pathtrust/rng.hpp"
#include "pathtrust/simulator.hpp"
#include "pathtrust/solver.hpp"
#include "pathtrust/sweep.hpp"
#include "pathtrust/topology.hpp"
#include "pathtrust/types.hpp"
