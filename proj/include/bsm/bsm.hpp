#pragma once

#include "bsm/adwin.hpp"
#include "bsm/batch_tree.hpp"
#include "bsm/csv.hpp"
#include "bsm/errors.hpp"
#include "bsm/evaluation.hpp"
#include "bsm/hoeffding_tree.hpp"
#include "bsm/metrics.hpp"
#include "bsm/report.hpp"
#include "bsm/stats.hpp"
#include "bsm/stream.hpp"
#include "bsm/synth.hpp"
#include "bsm/tree.hpp"
