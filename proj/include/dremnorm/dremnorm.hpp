#pragma once

#include "dremnorm/config.hpp"
#include "dremnorm/drem_mixing.hpp"
#include "dremnorm/errors.hpp"
#include "dremnorm/estimators.hpp"
#include "dremnorm/excitation_analysis.hpp"
#include "dremnorm/excitation_normalizer.hpp"
#include "dremnorm/experiment.hpp"
#include "dremnorm/lti_sim.hpp"
#include "dremnorm/output.hpp"
#include "dremnorm/svf_regression.hpp"
