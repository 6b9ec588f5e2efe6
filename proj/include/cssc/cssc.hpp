#pragma once

// Cost-sensitive semi-supervised classification toolkit: umbrella include.

#include "cssc/config.hpp"
#include "cssc/core.hpp"
#include "cssc/cost.hpp"
#include "cssc/dataset.hpp"
#include "cssc/evaluate.hpp"
#include "cssc/folds.hpp"
#include "cssc/learner.hpp"
#include "cssc/metacost.hpp"
#include "cssc/metrics.hpp"
#include "cssc/pipeline.hpp"
#include "cssc/report.hpp"
#include "cssc/serialize.hpp"
#include "cssc/synthetic.hpp"
#include "cssc/ttest.hpp"
#include "cssc/tuning.hpp"
