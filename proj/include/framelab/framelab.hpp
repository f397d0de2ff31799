#pragma once

#include "framelab/coordinate_vector.hpp"
#include "framelab/diagnostics.hpp"
#include "framelab/interval_set.hpp"
#include "framelab/pettis.hpp"
#include "framelab/sampling.hpp"
#include "framelab/step_function.hpp"
#include "framelab/translate_frame.hpp"
#include "framelab/version.hpp"
#include "framelab/wavelet_frame.hpp"
