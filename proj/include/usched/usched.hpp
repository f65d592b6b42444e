#pragma once

#include "usched/baselines.hpp"
#include "usched/convolution.hpp"
#include "usched/dks.hpp"
#include "usched/error.hpp"
#include "usched/generators.hpp"
#include "usched/instance.hpp"
#include "usched/io.hpp"
#include "usched/job_set.hpp"
#include "usched/portfolio.hpp"
#include "usched/prec_graph.hpp"
#include "usched/reconstruct.hpp"
#include "usched/schedule.hpp"
#include "usched/subexp.hpp"
