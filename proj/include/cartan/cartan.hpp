#pragma once

#include "cartan/balgebra.hpp"
#include "cartan/errors.hpp"
#include "cartan/exp_vec.hpp"
#include "cartan/json_io.hpp"
#include "cartan/lie.hpp"
#include "cartan/matrix.hpp"
#include "cartan/modules.hpp"
#include "cartan/presets.hpp"
#include "cartan/rational.hpp"
#include "cartan/reps.hpp"
#include "cartan/scalar.hpp"
#include "cartan/verify.hpp"
