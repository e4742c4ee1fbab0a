#pragma once

#include "urnlab/color.hpp"
#include "urnlab/engine.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/kernels.hpp"
#include "urnlab/measures.hpp"
#include "urnlab/montecarlo.hpp"
#include "urnlab/oracle.hpp"
#include "urnlab/rational.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/sampler.hpp"
#include "urnlab/spectral.hpp"
#include "urnlab/stats.hpp"
#include "urnlab/test_function.hpp"
